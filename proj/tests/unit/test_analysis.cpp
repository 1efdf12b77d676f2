#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "pinnfem/analysis/error_norms.hpp"
#include "pinnfem/analysis/study.hpp"
#include "pinnfem/cli/registry.hpp"
#include "pinnfem/common/errors.hpp"
#include "pinnfem/fem/cell_values.hpp"
#include "pinnfem/fem/evaluate.hpp"

using namespace pinnfem;

namespace {

std::shared_ptr<const mesh::Mesh> interval(int n)
{
    return std::make_shared<const mesh::Mesh>(mesh::interval_mesh(n));
}

} // namespace

TEST_CASE("registry sources agree with their exact solutions")
{
    CHECK_NOTHROW(cli::verify_registry());
    for (const auto& id : cli::problem_ids()) {
        const ProblemSpec p = cli::make_problem(id);
        CHECK(p.id == id);
        CHECK(cli::source_mismatch(p) <= 1e-8);
    }
    CHECK_THROWS_AS((void)cli::make_problem("nope"), ConfigError);
    try {
        (void)cli::make_problem("p9d");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("p9d") != std::string::npos);
    }
}

TEST_CASE("registry source check detects a wrong source")
{
    ProblemSpec p = cli::make_problem("p1d_poisson");
    p.source_f = ad::constant_field(1.0);
    CHECK(cli::source_mismatch(p) > 1e-2);
}

TEST_CASE("error norms of a zero discrete function against u = 1")
{
    ProblemSpec p = cli::make_problem("p2d_c0");
    p.exact_u = ad::constant_field(1.0);
    const auto space = fem::make_space(std::make_shared<const mesh::Mesh>(mesh::triangle_mesh(3)),
                                       fem::Element::lagrange(2, 1));
    const auto e = analysis::error_norms(space, Eigen::VectorXd::Zero(space.n_dofs), p);
    CHECK(e.l2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e.h1_semi == doctest::Approx(0.0));
    CHECK(e.h1 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_FALSE(e.h2.has_value());
}

TEST_CASE("error norms vanish for functions inside the space")
{
    ProblemSpec p = cli::make_problem("p1d_poisson");
    p.exact_u = ad::make_field(1, [](const auto& x) { return x[0] * x[0] * x[0] - 2.0 * x[0]; });
    const auto space = fem::make_space(interval(7), fem::Element::lagrange(1, 3));
    const auto e = analysis::error_norms(space, fem::interpolate(space, *p.exact_u), p);
    CHECK(e.l2 <= 1e-10);
    CHECK(e.h1 <= 1e-10);

    const auto hs = fem::make_space(interval(4), fem::Element::hermite());
    ProblemSpec b = cli::make_problem("p1d_biharmonic");
    b.exact_u = p.exact_u;
    const auto eh = analysis::error_norms(hs, fem::interpolate(hs, *b.exact_u), b, {0, true});
    CHECK(eh.l2 <= 1e-10);
    REQUIRE(eh.h2.has_value());
    CHECK(*eh.h2 <= 1e-10);
}

TEST_CASE("P1 interpolant error matches a composite Simpson oracle")
{
    const ProblemSpec p = cli::make_problem("p1d_poisson");
    const auto space = fem::make_space(interval(10), fem::Element::lagrange(1, 1));
    const Eigen::VectorXd u = fem::interpolate(space, *p.exact_u);
    const auto e = analysis::error_norms(space, u, p);

    const int n = 100000;
    const double h = 1.0 / n;
    double l2 = 0.0, semi = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const Point x{i * h, 0.0, 0.0};
        const ad::Jet uh = fem::evaluate_fe(space, u, x, 1);
        const ad::Jet ue = p.exact_u->jet(x, ad::Layout::for_order(1, 1));
        l2 += w * (ue[0] - uh[0]) * (ue[0] - uh[0]);
    }
    l2 = std::sqrt(l2 * h / 3.0);
    CHECK(e.l2 == doctest::Approx(l2).epsilon(1e-6));

    // seminorm: Simpson per cell, where the interpolant gradient is smooth
    for (int c = 0; c < 10; ++c) {
        const int k = 10000;
        const double a = c * 0.1, s = 0.1 / k;
        const double slope = u(c + 1) - u(c);
        for (int i = 0; i <= k; ++i) {
            const double w = (i == 0 || i == k) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const Point x{a + i * s, 0.0, 0.0};
            const double d = p.exact_u->jet(x, ad::Layout::for_order(1, 1))[1] - slope / 0.1;
            semi += w * d * d * s / 3.0;
        }
    }
    CHECK(e.h1_semi == doctest::Approx(std::sqrt(semi)).epsilon(1e-6));
    CHECK(e.h1 * e.h1 == doctest::Approx(e.l2 * e.l2 + e.h1_semi * e.h1_semi).epsilon(1e-12));
    CHECK(e.h1 >= e.h1_semi);
}

TEST_CASE("error norms need the exact solution")
{
    ProblemSpec p = cli::make_problem("p1d_poisson");
    p.exact_u.reset();
    const auto space = fem::make_space(interval(2), fem::Element::lagrange(1, 1));
    CHECK_THROWS_AS((void)analysis::error_norms(space, Eigen::VectorXd::Zero(space.n_dofs), p), CapabilityError);
}

TEST_CASE("order between two errors")
{
    CHECK(analysis::order_between(4e-2, 1e-2) == doctest::Approx(2.0));
    CHECK(analysis::order_between(1e-3, 1e-3) == doctest::Approx(0.0));
    CHECK(analysis::order_between(1.189e-2, 2.983e-3) == doctest::Approx(1.995).epsilon(1e-3));
    CHECK(std::isnan(analysis::order_between(0.0, 1e-3)));
    CHECK(std::isnan(analysis::order_between(1e-3, -1.0)));
}

TEST_CASE("classical 1D P1 study reproduces the reference V_h column")
{
    const ProblemSpec p = cli::make_problem("p1d_poisson");
    analysis::StudyConfig c;
    c.mesh_sizes = {10, 20, 40, 80, 160, 320};
    const auto rep = analysis::convergence_study(p, c);
    const double l2[] = {1.189e-02, 2.983e-03, 7.463e-04, 1.866e-04, 4.666e-05, 1.166e-05};
    const double order[] = {0.0, 1.995, 1.999, 2.000, 2.000, 2.000};
    REQUIRE(rep.rows.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CAPTURE(i);
        CHECK(rep.rows[i].ok());
        CHECK(rep.rows[i].errors.l2 == doctest::Approx(l2[i]).epsilon(0.02));
        if (i > 0) CHECK(std::abs(rep.rows[i].l2_order - order[i]) <= 0.01);
        CHECK(rep.rows[i].errors.h1 >= rep.rows[i].errors.h1_semi);
    }
    CHECK(std::isnan(rep.rows[0].l2_order));
    CHECK_FALSE(rep.pinn_l2.has_value());

    std::ostringstream a, b;
    analysis::write_report_csv(rep, a);
    analysis::write_report_csv(analysis::convergence_study(p, c), b);
    CHECK(a.str() == b.str());
    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n_or_h,l2,l2_order,h1,h1_order,h1_semi,h1_semi_order");
    std::getline(in, line);
    CHECK(line.rfind("10,0.0118", 0) == 0);
    CHECK(line.find(",,") != std::string::npos);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);

    std::ostringstream meta;
    analysis::write_metadata(rep, meta);
    CHECK(meta.str().find("problem=p1d_poisson\n") != std::string::npos);
    CHECK(meta.str().find("space=classical\n") != std::string::npos);
    CHECK(meta.str().find("row5.status=ok\n") != std::string::npos);
}

TEST_CASE("classical Hermite study reports H2")
{
    const ProblemSpec p = cli::make_problem("p1d_biharmonic");
    analysis::StudyConfig c;
    c.family = fem::Family::hermite;
    c.degree = 3;
    c.mesh_sizes = {5, 10, 20, 40, 80};
    const auto rep = analysis::convergence_study(p, c);
    CHECK(rep.with_h2);
    CHECK(rep.rows[0].errors.l2 == doctest::Approx(7.608e-04).epsilon(0.02));
    CHECK(rep.rows[0].errors.h1_semi == doctest::Approx(1.320e-02).epsilon(0.02));
    CHECK(*rep.rows[0].errors.h2 == doctest::Approx(4.284e-01).epsilon(0.02));
    CHECK(std::abs(rep.rows[4].l2_order - 4.001) <= 0.02);
    CHECK(std::abs(rep.rows[4].h2_order - 2.000) <= 0.02);
    std::ostringstream out;
    analysis::write_report_csv(rep, out);
    CHECK(out.str().rfind("n_or_h,l2,l2_order,h1,h1_order,h1_semi,h1_semi_order,h2,h2_order\n", 0) == 0);
}

TEST_CASE("study configuration errors and per-row failures")
{
    const ProblemSpec p = cli::make_problem("p1d_poisson");
    analysis::StudyConfig c;
    CHECK_THROWS_AS((void)analysis::convergence_study(p, c), InputError);
    c.mesh_sizes = {10, 30};
    CHECK_THROWS_AS((void)analysis::convergence_study(p, c), InputError);
    c.mesh_sizes = {10, 20};
    c.space = analysis::SpaceKind::additive;
    CHECK_THROWS_AS((void)analysis::convergence_study(p, c), InputError);
    c.space = analysis::SpaceKind::classical;
    c.family = fem::Family::hermite;
    c.degree = 3;
    CHECK_THROWS_AS((void)analysis::convergence_study(cli::make_problem("p2d_c0"), c), InputError);
    c.family = fem::Family::lagrange;
    c.degree = 1;
    CHECK_THROWS_AS((void)analysis::convergence_study(cli::make_problem("p1d_biharmonic"), c), InputError);

    // forced shift below the margin: every row fails, the study still returns
    ad::DenseNetwork net({1, 3, 1});
    net.bias(1)(0) = 0.1;
    c.space = analysis::SpaceKind::multiplicative;
    c.net = net;
    c.enrichment.shift = 0.0;
    c.mesh_sizes = {10, 20, 40};
    const auto rep = analysis::convergence_study(p, c);
    for (const auto& r : rep.rows) {
        CHECK_FALSE(r.ok());
        CHECK(r.status.find("margin") != std::string::npos);
        CHECK(std::isnan(r.errors.l2));
        CHECK(std::isnan(r.l2_order));
    }
    REQUIRE(rep.pinn_l2.has_value());
    std::ostringstream out;
    analysis::write_report_csv(rep, out);
    CHECK(out.str().find("\n20,,,,,,\n") != std::string::npos);

    c.enrichment.shift.reset();
    const auto ok = analysis::convergence_study(p, c);
    for (const auto& r : ok.rows) {
        CHECK(r.ok());
        CHECK(r.shift == doctest::Approx(0.4));
    }
    std::ostringstream meta;
    analysis::write_metadata(ok, meta);
    CHECK(meta.str().find("row0.shift=0.4\n") != std::string::npos);
    CHECK(meta.str().find("pinn_l2=") != std::string::npos);
}

TEST_CASE("field dump")
{
    const ProblemSpec p = cli::make_problem("p1d_poisson");
    const fem::FunctionSpace s = fem::make_space(interval(4), fem::Element::lagrange(1, 1));
    const Eigen::VectorXd U = fem::interpolate(s, *p.exact_u);
    std::ostringstream a;
    analysis::field_dump(s, U, p, 2, a);
    CHECK(a.str() == "x,u_h,u,abs_error\n0,2,2,0\n1,2,2,0\n");

    const ProblemSpec p2 = cli::make_problem("p2d_c0");
    const fem::FunctionSpace s2 = fem::make_space(std::make_shared<const mesh::Mesh>(mesh::triangle_mesh(2)),
                                                  fem::Element::lagrange(2, 1));
    const auto exact = std::make_shared<ad::ClosedFormField>(2, *p2.exact_u);
    const fem::FunctionSpace e2 = fem::enrich(s2, fem::Enrichment::additive, exact);
    std::ostringstream b;
    analysis::field_dump(e2, Eigen::VectorXd::Zero(e2.n_dofs), p2, 7, b);
    std::istringstream in(b.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,u_h,u,abs_error");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::stod(line.substr(line.rfind(',') + 1)) <= 1e-9);
    }
    CHECK(rows == 49);

    CHECK_THROWS_AS(analysis::field_dump(s, U, p, 1, a), InputError);
    CHECK_THROWS_AS(analysis::field_dump(s, U, p, 3, std::filesystem::path("/nonexistent_dir/f.csv")), IoError);
}

TEST_CASE("error quadrature stability and the L2 / H1 order gap")
{
    struct Case {
        const char* id;
        fem::Family family;
        int degree;
        std::vector<int> sizes;
    };
    const std::vector<Case> cases{
        {"p1d_poisson", fem::Family::lagrange, 1, {10, 20, 40, 80, 160, 320}},
        {"p1d_poisson", fem::Family::lagrange, 2, {10, 20, 40, 80, 160, 320}},
        {"p1d_poisson", fem::Family::lagrange, 3, {10, 20, 40, 80, 160}},
        {"p1d_biharmonic", fem::Family::hermite, 3, {5, 10, 20, 40, 80}},
        {"p2d_c0", fem::Family::lagrange, 1, {4, 8, 16}},
        {"p2d_cm5", fem::Family::lagrange, 2, {4, 8, 16}},
        {"p3d_poisson", fem::Family::lagrange, 1, {2, 4, 8}},
    };
    for (const auto& k : cases) {
        CAPTURE(k.id);
        CAPTURE(k.degree);
        const ProblemSpec p = cli::make_problem(k.id);
        analysis::StudyConfig c;
        c.family = k.family;
        c.degree = k.degree;
        c.mesh_sizes = k.sizes;
        const auto base = analysis::convergence_study(p, c);
        const fem::Element el = k.family == fem::Family::hermite ? fem::Element::hermite()
                                                                 : fem::Element::lagrange(p.dim, k.degree);
        const fem::FunctionSpace probe =
            fem::make_space(std::make_shared<const mesh::Mesh>(p.dim == 1   ? mesh::interval_mesh(1)
                                                               : p.dim == 2 ? mesh::triangle_mesh(1)
                                                                            : mesh::tet_mesh(1)),
                            el);
        c.errors.quadrature_degree = 2 * fem::error_degree(probe);
        const auto fine = analysis::convergence_study(p, c);
        for (std::size_t i = 0; i < base.rows.size(); ++i) {
            CHECK(fine.rows[i].errors.l2 == doctest::Approx(base.rows[i].errors.l2).epsilon(1e-3));
            CHECK(fine.rows[i].errors.h1_semi == doctest::Approx(base.rows[i].errors.h1_semi).epsilon(1e-3));
        }
        const auto& last = base.rows.back();
        CHECK(last.l2_order >= last.h1_semi_order + 0.75);
        CHECK(last.l2_order >= last.h1_order + 0.75);
    }
}
