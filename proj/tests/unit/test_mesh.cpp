#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "pinnfem/common/errors.hpp"
#include "pinnfem/mesh/mesh.hpp"

using namespace pinnfem;
using namespace pinnfem::mesh;

namespace {

// Count cells incident to every facet by brute force over sorted vertex tuples.
std::map<std::vector<int>, int> facet_incidence(const Mesh& m)
{
    std::map<std::vector<int>, int> count;
    for (int c = 0; c < m.cell_count(); ++c) {
        const auto v = m.cell(c);
        for (int f = 0; f < m.vertices_per_cell(); ++f) {
            std::vector<int> facet;
            for (int k = 0; k < m.vertices_per_cell(); ++k) {
                if (k != f) facet.push_back(v[static_cast<std::size_t>(k)]);
            }
            std::sort(facet.begin(), facet.end());
            ++count[facet];
        }
    }
    return count;
}

void check_conformity(const Mesh& m)
{
    const auto inc = facet_incidence(m);
    std::set<std::vector<int>> boundary;
    for (int f = 0; f < m.boundary_facet_count(); ++f) {
        auto v = std::vector<int>(m.boundary_facet(f).begin(), m.boundary_facet(f).end());
        std::sort(v.begin(), v.end());
        boundary.insert(v);
    }
    CHECK(static_cast<int>(boundary.size()) == m.boundary_facet_count());
    for (const auto& [facet, n] : inc) {
        if (boundary.count(facet)) {
            CHECK(n == 1);
        } else {
            CHECK(n == 2);
        }
    }
}

double total_measure(const Mesh& m)
{
    double s = 0.0;
    for (int c = 0; c < m.cell_count(); ++c) {
        CHECK(m.cell_measure(c) > 0.0);
        s += m.cell_measure(c);
    }
    return s;
}

} // namespace

TEST_CASE("interval meshes")
{
    const Mesh m = interval_mesh(10);
    CHECK(m.node_count() == 11);
    CHECK(m.cell_count() == 10);
    CHECK(m.h == doctest::Approx(0.1));
    CHECK(m.boundary_nodes == std::vector<int>{0, 10});
    const Mesh one = interval_mesh(1);
    CHECK(one.nodes[0][0] == 0.0);
    CHECK(one.nodes[1][0] == 1.0);
    CHECK(one.cell_count() == 1);
    CHECK(interval_mesh(320).node_count() == 321);
    CHECK_THROWS_AS((void)interval_mesh(0), InputError);
    CHECK(std::abs(total_measure(m) - 1.0) <= 1e-14);
}

TEST_CASE("triangle meshes")
{
    const Mesh m4 = triangle_mesh(4);
    CHECK(m4.node_count() == 25);
    CHECK(m4.cell_count() == 32);
    const Mesh m8 = triangle_mesh(8);
    CHECK(m8.node_count() == 81);
    CHECK(m8.cell_count() == 128);
    const Mesh m1 = triangle_mesh(1);
    CHECK(m1.node_count() == 4);
    CHECK(m1.cell_count() == 2);
    CHECK(std::abs(total_measure(m1) - 1.0) <= 1e-14);
    CHECK_THROWS_AS((void)triangle_mesh(0), InputError);

    const auto b = classify_boundary(m4);
    CHECK(b.nodes.size() == 16);
    CHECK(b.facets.size() / 2 == 16);
    for (int m = 1; m <= 8; ++m) {
        const Mesh mesh = triangle_mesh(m);
        CHECK(std::abs(total_measure(mesh) - 1.0) <= 1e-14);
        check_conformity(mesh);
    }
}

TEST_CASE("tetrahedral meshes")
{
    const Mesh m1 = tet_mesh(1);
    CHECK(m1.node_count() == 8);
    CHECK(m1.cell_count() == 6);
    CHECK(std::abs(total_measure(m1) - 1.0) <= 1e-14);
    CHECK(classify_boundary(m1).nodes.size() == 8);

    const Mesh m2 = tet_mesh(2);
    CHECK(m2.node_count() == 27);
    CHECK(m2.cell_count() == 48);
    check_conformity(m2);

    for (int m = 3; m <= 8; ++m) {
        const Mesh mesh = tet_mesh(m);
        CHECK(std::abs(total_measure(mesh) - 1.0) <= 1e-13);
        check_conformity(mesh);
    }
    const Mesh big = tet_mesh(32);
    CHECK(big.node_count() == 35937);
    CHECK(big.cell_count() == 196608);
    CHECK_THROWS_AS((void)tet_mesh(0), InputError);
}

TEST_CASE("boundary nodes are exactly the lattice nodes on the box faces")
{
    for (const Mesh& m : {interval_mesh(6), triangle_mesh(5), tet_mesh(3)}) {
        std::set<int> b(m.boundary_nodes.begin(), m.boundary_nodes.end());
        for (int n = 0; n < m.node_count(); ++n) {
            bool face = false;
            for (int a = 0; a < m.dim; ++a) {
                const double x = m.nodes[static_cast<std::size_t>(n)][static_cast<std::size_t>(a)];
                face = face || x == 0.0 || x == 1.0;
            }
            CHECK(face == (b.count(n) == 1));
        }
    }
}

namespace {

bool inside(const Mesh& m, int c, const Point& x)
{
    // barycentric test by sub-simplex measures
    const auto v = m.cell(c);
    Mesh probe = m;
    double total = 0.0;
    for (int k = 0; k < m.vertices_per_cell(); ++k) {
        probe.nodes.push_back(x);
        probe.connectivity.assign(v.begin(), v.end());
        probe.connectivity[static_cast<std::size_t>(k)] = static_cast<int>(probe.nodes.size()) - 1;
        const double part = probe.cell_measure(0);
        if (part < -1e-14) return false;
        total += part;
        probe.nodes.pop_back();
    }
    return std::abs(total - m.cell_measure(c)) < 1e-12;
}

} // namespace

TEST_CASE("locate agrees with a containment test")
{
    const Mesh meshes[] = {interval_mesh(7), triangle_mesh(5), tet_mesh(3)};
    unsigned seed = 1;
    auto rnd = [&]() {
        seed = seed * 1103515245u + 12345u;
        return static_cast<double>((seed >> 8) & 0xFFFF) / 65535.0;
    };
    for (const Mesh& m : meshes) {
        for (int t = 0; t < 200; ++t) {
            Point x{rnd(), rnd(), rnd()};
            for (int a = m.dim; a < 3; ++a) x[static_cast<std::size_t>(a)] = 0.0;
            const auto c = m.locate(x);
            REQUIRE(c.has_value());
            CHECK(inside(m, *c, x));
        }
        CHECK_FALSE(m.locate(Point{1.5, 0.5, 0.5}).has_value());
    }
}

TEST_CASE("mesh dump format")
{
    std::ostringstream os;
    write_mesh(triangle_mesh(1), os);
    const std::string s = os.str();
    CHECK(s.rfind("NODES 4\n", 0) == 0);
    CHECK(s.find("CELLS 2\n") != std::string::npos);
}
