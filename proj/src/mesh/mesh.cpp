#include "pinnfem/mesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::mesh {

namespace {

// Axis orderings of the Kuhn path from the cube's origin corner to (1,1,1).
constexpr std::array<std::array<int, 3>, 6> kuhn_paths = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

constexpr bool kuhn_even(int p) { return p == 0 || p == 3 || p == 4; }

void require_positive(int n, const char* what)
{
    if (n < 1) throw InputError(std::string(what) + " needs at least one cell per axis");
}

bool on_boundary(const std::array<int, 3>& ijk, int dim, int m)
{
    for (int a = 0; a < dim; ++a) {
        if (ijk[static_cast<std::size_t>(a)] == 0 || ijk[static_cast<std::size_t>(a)] == m) return true;
    }
    return false;
}

void build_lattice(Mesh& mesh)
{
    const int m = mesh.cells_per_axis;
    const int n1 = m + 1;
    const int ny = mesh.dim >= 2 ? n1 : 1;
    const int nz = mesh.dim >= 3 ? n1 : 1;
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < n1; ++i) {
                mesh.lattice.push_back({i, j, k});
                mesh.nodes.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m,
                                      static_cast<double>(k) / m});
            }
        }
    }
    if (mesh.dim < 3) {
        for (auto& p : mesh.nodes) p[2] = 0.0;
    }
    if (mesh.dim < 2) {
        for (auto& p : mesh.nodes) p[1] = 0.0;
    }
}

int node_id(int i, int j, int k, int m) { return i + (m + 1) * (j + (m + 1) * k); }

} // namespace

bool Mesh::is_boundary_node(int node) const
{
    return on_boundary(lattice.at(static_cast<std::size_t>(node)), dim, cells_per_axis);
}

double Mesh::cell_measure(int c) const
{
    const auto v = cell(c);
    const Point& p0 = nodes[static_cast<std::size_t>(v[0])];
    auto diff = [&](int k, int a) {
        return nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(k)])][static_cast<std::size_t>(a)]
            - p0[static_cast<std::size_t>(a)];
    };
    switch (dim) {
    case 1: return diff(1, 0);
    case 2: return 0.5 * (diff(1, 0) * diff(2, 1) - diff(1, 1) * diff(2, 0));
    default: {
        const double a00 = diff(1, 0), a01 = diff(1, 1), a02 = diff(1, 2);
        const double a10 = diff(2, 0), a11 = diff(2, 1), a12 = diff(2, 2);
        const double a20 = diff(3, 0), a21 = diff(3, 1), a22 = diff(3, 2);
        const double det = a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) + a02 * (a10 * a21 - a11 * a20);
        return det / 6.0;
    }
    }
}

std::optional<int> Mesh::locate(const Point& x) const
{
    const int m = cells_per_axis;
    std::array<int, 3> idx{};
    std::array<double, 3> local{};
    for (int a = 0; a < dim; ++a) {
        const double v = x[static_cast<std::size_t>(a)];
        if (!(v >= 0.0 && v <= 1.0)) return std::nullopt;
        const double s = v * m;
        const int i = std::min(static_cast<int>(std::floor(s)), m - 1);
        idx[static_cast<std::size_t>(a)] = i;
        local[static_cast<std::size_t>(a)] = s - i;
    }
    switch (dim) {
    case 1: return idx[0];
    case 2: {
        const int square = idx[1] * m + idx[0];
        return 2 * square + (local[0] >= local[1] ? 0 : 1);
    }
    default: {
        std::array<int, 3> order = {0, 1, 2};
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return local[static_cast<std::size_t>(a)] > local[static_cast<std::size_t>(b)];
        });
        int p = 0;
        while (kuhn_paths[static_cast<std::size_t>(p)] != order) ++p;
        const int cube = idx[0] + m * (idx[1] + m * idx[2]);
        return 6 * cube + p;
    }
    }
}

Mesh interval_mesh(int n)
{
    require_positive(n, "interval_mesh");
    Mesh mesh;
    mesh.dim = 1;
    mesh.cells_per_axis = n;
    mesh.shape = CellShape::interval;
    mesh.h = 1.0 / n;
    build_lattice(mesh);
    for (int i = 0; i < n; ++i) {
        mesh.connectivity.push_back(i);
        mesh.connectivity.push_back(i + 1);
    }
    auto b = classify_boundary(mesh);
    mesh.boundary_nodes = std::move(b.nodes);
    mesh.boundary_facets = std::move(b.facets);
    return mesh;
}

Mesh triangle_mesh(int m)
{
    require_positive(m, "triangle_mesh");
    Mesh mesh;
    mesh.dim = 2;
    mesh.cells_per_axis = m;
    mesh.shape = CellShape::triangle;
    mesh.h = 1.0 / m;
    build_lattice(mesh);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const int v00 = node_id(i, j, 0, m), v10 = node_id(i + 1, j, 0, m);
            const int v01 = node_id(i, j + 1, 0, m), v11 = node_id(i + 1, j + 1, 0, m);
            mesh.connectivity.insert(mesh.connectivity.end(), {v00, v10, v11});
            mesh.connectivity.insert(mesh.connectivity.end(), {v00, v11, v01});
        }
    }
    auto b = classify_boundary(mesh);
    mesh.boundary_nodes = std::move(b.nodes);
    mesh.boundary_facets = std::move(b.facets);
    return mesh;
}

Mesh tet_mesh(int m)
{
    require_positive(m, "tet_mesh");
    Mesh mesh;
    mesh.dim = 3;
    mesh.cells_per_axis = m;
    mesh.shape = CellShape::tetrahedron;
    mesh.h = 1.0 / m;
    build_lattice(mesh);
    mesh.connectivity.reserve(static_cast<std::size_t>(24) * m * m * m);
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) {
                for (int p = 0; p < 6; ++p) {
                    std::array<int, 3> c = {i, j, k};
                    std::array<int, 4> v{};
                    v[0] = node_id(c[0], c[1], c[2], m);
                    for (int s = 0; s < 3; ++s) {
                        ++c[static_cast<std::size_t>(kuhn_paths[static_cast<std::size_t>(p)][static_cast<std::size_t>(s)])];
                        v[static_cast<std::size_t>(s + 1)] = node_id(c[0], c[1], c[2], m);
                    }
                    if (!kuhn_even(p)) std::swap(v[1], v[2]);
                    mesh.connectivity.insert(mesh.connectivity.end(), v.begin(), v.end());
                }
            }
        }
    }
    auto b = classify_boundary(mesh);
    mesh.boundary_nodes = std::move(b.nodes);
    mesh.boundary_facets = std::move(b.facets);
    return mesh;
}

BoundaryClassification classify_boundary(const Mesh& mesh)
{
    BoundaryClassification out;
    const int m = mesh.cells_per_axis;
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (on_boundary(mesh.lattice[static_cast<std::size_t>(n)], mesh.dim, m)) out.nodes.push_back(n);
    }
    const int nv = mesh.vertices_per_cell();
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto v = mesh.cell(c);
        // facet f is the cell minus its vertex f
        for (int f = 0; f < nv; ++f) {
            std::vector<int> facet;
            for (int k = 0; k < nv; ++k) {
                if (k != f) facet.push_back(v[static_cast<std::size_t>(k)]);
            }
            bool boundary = false;
            for (int a = 0; a < mesh.dim && !boundary; ++a) {
                for (int side : {0, m}) {
                    const bool all = std::all_of(facet.begin(), facet.end(), [&](int node) {
                        return mesh.lattice[static_cast<std::size_t>(node)][static_cast<std::size_t>(a)] == side;
                    });
                    if (all) boundary = true;
                }
            }
            if (boundary) out.facets.insert(out.facets.end(), facet.begin(), facet.end());
        }
    }
    return out;
}

void write_mesh(const Mesh& mesh, std::ostream& out)
{
    out << "NODES " << mesh.node_count() << '\n';
    for (const auto& p : mesh.nodes) {
        for (int a = 0; a < mesh.dim; ++a) out << (a ? " " : "") << p[static_cast<std::size_t>(a)];
        out << '\n';
    }
    out << "CELLS " << mesh.cell_count() << '\n';
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto v = mesh.cell(c);
        for (std::size_t k = 0; k < v.size(); ++k) out << (k ? " " : "") << v[k];
        out << '\n';
    }
}

} // namespace pinnfem::mesh
