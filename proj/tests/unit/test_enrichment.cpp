#include "doctest.h"

#include <cmath>
#include <random>

#include "pinnfem/analysis/error_norms.hpp"
#include "pinnfem/cli/registry.hpp"
#include "pinnfem/common/errors.hpp"
#include "pinnfem/enrichment/enrichment.hpp"
#include "pinnfem/fem/evaluate.hpp"
#include "pinnfem/pinn/network_function.hpp"
#include "pinnfem/pinn/train.hpp"

using namespace pinnfem;
using enrichment::EnrichmentOptions;

namespace {

std::shared_ptr<const ad::JetField> closed(int dim, ad::ScalarField f)
{
    return std::make_shared<ad::ClosedFormField>(dim, std::move(f));
}

fem::FunctionSpace coarse_space(const ProblemSpec& p)
{
    if (p.op == Operator::biharmonic_1d) {
        return fem::make_space(std::make_shared<const mesh::Mesh>(mesh::interval_mesh(5)), fem::Element::hermite());
    }
    switch (p.dim) {
    case 1: return fem::make_space(std::make_shared<const mesh::Mesh>(mesh::interval_mesh(10)), fem::Element::lagrange(1, 1));
    case 2: return fem::make_space(std::make_shared<const mesh::Mesh>(mesh::triangle_mesh(4)), fem::Element::lagrange(2, 1));
    default: return fem::make_space(std::make_shared<const mesh::Mesh>(mesh::tet_mesh(2)), fem::Element::lagrange(3, 1));
    }
}

Eigen::VectorXd classical(const fem::FunctionSpace& s, const ProblemSpec& p, int degree)
{
    fem::AssemblyOptions o;
    o.quadrature_degree = degree;
    fem::AssembledSystem sys = fem::assemble(s, p, o);
    fem::apply_dirichlet(sys);
    return fem::solve(sys).solution;
}

// Network with zero weights and output bias b: u_bar = b without the boundary operator.
ad::DenseNetwork constant_net(int dim, double b)
{
    ad::DenseNetwork net({dim, 3, 1});
    net.bias(1)(0) = b;
    return net;
}

} // namespace

TEST_CASE("sample grid")
{
    const auto g1 = enrichment::sample_grid(1, 64);
    REQUIRE(g1.size() == 64);
    CHECK(g1.front()[0] == 0.0);
    CHECK(g1.back()[0] == 1.0);
    CHECK(enrichment::sample_grid(2, 64).size() == 4096);
    CHECK(enrichment::sample_grid(3, 64).size() == 46u * 46u * 46u);
    CHECK(enrichment::sample_grid(2, 1000).size() == 316u * 316u);
    CHECK_THROWS_AS((void)enrichment::sample_grid(1, 1), InputError);
}

TEST_CASE("shift rule")
{
    CHECK(enrichment::compute_shift(*closed(1, ad::constant_field(2.0)), 0.5) == 0.0);
    CHECK(enrichment::compute_shift(*closed(2, ad::constant_field(-1.0)), 0.5) == 1.5);
    CHECK(enrichment::compute_shift(*closed(1, ad::constant_field(0.5)), 0.5) == 0.0);

    const ProblemSpec p = cli::make_problem("p1d_poisson");
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        auto net = ad::DenseNetwork::glorot({1, 20, 1}, seed);
        for (double& t : net.parameters()) t *= 3.0;
        const double C = enrichment::compute_shift(net, p, 0.5, 64);
        const pinn::NetworkFunction u(net, p);
        double lo = 1e300;
        for (int i = 0; i <= 640; ++i) lo = std::min(lo, u.value(Point{i / 640.0, 0.0, 0.0}) + C);
        CHECK(lo >= 0.5 * (1.0 - 1e-3));
    }

    auto bad = ad::DenseNetwork::glorot({1, 4, 1}, 1);
    bad.parameters()[2] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)enrichment::compute_shift(bad, p), EvaluationError);
    CHECK_THROWS_AS((void)enrichment::compute_shift(*closed(1, ad::constant_field(1.0)), 0.0), InputError);
}

TEST_CASE("degenerate networks reproduce the classical solve")
{
    for (const auto& id : cli::problem_ids()) {
        CAPTURE(id);
        const ProblemSpec p = cli::make_problem(id);
        const fem::FunctionSpace s = coarse_space(p);
        EnrichmentOptions o;
        o.assembly.quadrature_degree = 2 * s.element.degree() + 4;
        const Eigen::VectorXd ref = classical(s, p, o.assembly.quadrature_degree);

        const auto add = enrichment::solve_additive(p, s, constant_net(p.dim, 0.0), o);
        CHECK((add.aux_dofs - ref).cwiseAbs().maxCoeff() <= 1e-10);
        const auto mul = enrichment::solve_multiplicative(p, s, constant_net(p.dim, 1.0), o);
        CHECK(mul.plan.shift == 0.0);
        CHECK((mul.aux_dofs - ref).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(add.solve.relative_residual <= 1e-12);
    }
}

TEST_CASE("the exact solution as enrichment collapses the error")
{
    for (const auto& id : cli::problem_ids()) {
        CAPTURE(id);
        const ProblemSpec p = cli::make_problem(id);
        const fem::FunctionSpace s = coarse_space(p);
        const auto exact = closed(p.dim, *p.exact_u);
        // F(v) - B[u, v] only cancels up to quadrature error
        EnrichmentOptions o;
        o.assembly.quadrature_degree = p.dim == 3 ? 20 : 16;
        const auto add = enrichment::solve_additive(p, s, exact, o);
        CHECK(add.aux_dofs.cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(analysis::error_norms(add.space, add.aux_dofs, p).l2 <= 1e-9);
        const auto mul = enrichment::solve_multiplicative(p, s, exact, o);
        CHECK(mul.plan.shift == 0.0);
        // w = 1: unit values, zero slopes
        for (int i = 0; i < mul.space.n_dofs; ++i) {
            const double target = mul.space.dof_kinds[static_cast<std::size_t>(i)] == fem::DofKind::vertex_derivative ? 0.0 : 1.0;
            CHECK(std::abs(mul.aux_dofs(i) - target) <= 1e-9);
        }
        CHECK(analysis::error_norms(mul.space, mul.aux_dofs, p).l2 <= 1e-9);
    }
}

TEST_CASE("multiplicative shift handling")
{
    const ProblemSpec p = cli::make_problem("p1d_poisson");
    const fem::FunctionSpace s = coarse_space(p);
    const auto half = closed(1, ad::make_field(1, [](const auto& x) { return x[0] - 0.25; }));

    const auto sol = enrichment::solve_multiplicative(p, s, half);
    CHECK(sol.plan.shift == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(sol.space.shift == sol.plan.shift);
    // shifted space still contains the discrete solution's accuracy
    const double ec = analysis::error_norms(s, classical(s, p, 0), p).l2;
    CHECK(analysis::error_norms(sol.space, sol.aux_dofs, p).l2 <= 2.0 * ec);

    EnrichmentOptions fixed;
    fixed.shift = 0.0;
    CHECK_THROWS_AS((void)enrichment::solve_multiplicative(p, s, half, fixed), ShiftError);
    fixed.shift = 0.7;
    CHECK_THROWS_AS((void)enrichment::solve_multiplicative(p, s, half, fixed), ShiftError);
    fixed.shift = 0.8;
    CHECK_NOTHROW((void)enrichment::solve_multiplicative(p, s, half, fixed));

    // C travels in the network's shift field
    auto net = ad::DenseNetwork::glorot({1, 6, 1}, 2);
    net.boundary_mode = ad::BoundaryMode::dirichlet_product;
    ProblemSpec low = p;
    low.boundary_g = ad::constant_field(-1.0);
    const auto ns = enrichment::solve_multiplicative(low, s, net);
    REQUIRE(ns.plan.net.has_value());
    CHECK(ns.plan.shift >= 1.5);
    CHECK(ns.plan.net->shift == ns.plan.shift);
    const pinn::NetworkFunction phi(*ns.plan.net, low);
    for (double x : {0.0, 0.3, 0.9}) {
        CHECK(phi.value(Point{x, 0.0, 0.0}) ==
              doctest::Approx(ns.space.field->value(Point{x, 0.0, 0.0})).epsilon(1e-14));
    }

    CHECK_THROWS_AS((void)enrichment::solve_additive(p, s, closed(2, ad::constant_field(1.0))), InputError);
}

TEST_CASE("evaluating enriched solutions")
{
    const ProblemSpec p = cli::make_problem("p2d_c0");
    const fem::FunctionSpace s = coarse_space(p);
    auto net = ad::DenseNetwork::glorot({2, 6, 1}, 8);
    net.boundary_mode = ad::BoundaryMode::dirichlet_product;
    const pinn::NetworkFunction u(net, p);

    auto add = enrichment::solve_additive(p, s, net);
    auto mul = enrichment::solve_multiplicative(p, s, net);
    CHECK(mul.plan.shift == 0.0);
    const Point x{0.37, 0.61, 0.0};
    add.aux_dofs.setZero();
    CHECK(enrichment::evaluate_enriched(add, x).value() == doctest::Approx(u.value(x)).epsilon(1e-14));
    mul.aux_dofs.setOnes();
    CHECK(enrichment::evaluate_enriched(mul, x).value() == doctest::Approx(u.value(x)).epsilon(1e-14));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> r(-1.0, 1.0);
    for (auto* sol : {&add, &mul}) {
        for (Eigen::Index i = 0; i < sol->aux_dofs.size(); ++i) sol->aux_dofs(i) = 1.0 + 0.3 * r(rng);
        for (const Point& y : {Point{0.31, 0.17, 0.0}, Point{0.58, 0.87, 0.0}, Point{0.91, 0.38, 0.0}}) {
            const auto j = enrichment::evaluate_enriched(*sol, y, 1);
            const double h = 1e-6;
            for (int a = 0; a < 2; ++a) {
                Point up = y, dn = y;
                up[static_cast<std::size_t>(a)] += h;
                dn[static_cast<std::size_t>(a)] -= h;
                const double fd = (enrichment::evaluate_enriched(*sol, up).value() -
                                   enrichment::evaluate_enriched(*sol, dn).value()) /
                                  (2.0 * h);
                CHECK(std::abs(fd - j[1 + a]) <= 1e-6 * std::max(1.0, std::abs(fd)));
            }
        }
    }
    CHECK_THROWS_AS((void)enrichment::evaluate_enriched(add, x, 3), InputError);
}

TEST_CASE("zero point certificate")
{
    const ProblemSpec p = cli::make_problem("p1d_poisson");
    const auto one = enrichment::zero_point_certificate(*closed(1, ad::constant_field(1.0)), p);
    CHECK_FALSE(one.flagged);
    CHECK(one.zero_points.empty());
    CHECK_FALSE(one.error_bound.has_value());

    const auto half = closed(1, ad::make_field(1, [](const auto& x) { return x[0] - 0.5; }));
    const auto rep = enrichment::zero_point_certificate(*half, p);
    CHECK(rep.flagged);
    REQUIRE(rep.zero_points.size() == 1);
    CHECK(std::abs(rep.zero_points[0][0] - 0.5) <= 1.0 / 63.0);
    CHECK(std::abs(rep.argmin[0] - 0.5) <= 1.0 / 63.0);
    REQUIRE(rep.error_bound.has_value());
    CHECK(*rep.error_bound == doctest::Approx(std::abs((*p.exact_u)(rep.argmin))));
    CHECK(*rep.error_bound > 1.5);

    // a 2D field vanishing on the line x + y = 1
    const ProblemSpec p2 = cli::make_problem("p2d_c0");
    const auto line = enrichment::zero_point_certificate(
        *closed(2, ad::make_field(2, [](const auto& x) { return x[0] + x[1] - 1.0; })), p2, 32);
    CHECK(line.flagged);
    CHECK(line.min_abs == 0.0);
    CHECK(line.zero_points.size() >= 32);
    for (const Point& z : line.zero_points) CHECK(std::abs(z[0] + z[1] - 1.0) <= 1.0 / 31.0);
}

TEST_CASE("unshifted multiplicative functions inherit the zeros of the field")
{
    const ProblemSpec p = cli::make_problem("p1d_poisson");
    const fem::FunctionSpace s = coarse_space(p);
    const auto half = closed(1, ad::make_field(1, [](const auto& x) { return x[0] - 0.45; }));
    const fem::FunctionSpace m = fem::enrich(s, fem::Enrichment::multiplicative, half);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> r;
    Eigen::VectorXd w(m.n_dofs);
    for (int t = 0; t < 5; ++t) {
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = r(rng);
        CHECK(std::abs(fem::evaluate_fe(m, w, Point{0.45, 0.0, 0.0}, 0).value()) <= 1e-12);
    }
}

TEST_CASE("trained penalty network on homogeneous data has zeros near the boundary")
{
    ProblemSpec p;
    p.id = "sine";
    p.dim = 1;
    p.coeff_a = ad::constant_field(1.0);
    p.coeff_c = ad::constant_field(0.0);
    p.unit_diffusion = true;
    constexpr double pi = 3.14159265358979323846;
    p.exact_u = ad::make_field(1, [](const auto& x) { return sin(pi * x[0]); });
    p.source_f = ad::make_field(1, [](const auto& x) { return pi * pi * sin(pi * x[0]); });
    p.boundary_g = ad::constant_field(0.0);

    pinn::TrainingConfig c;
    c.boundary_mode = pinn::BoundaryHandling::penalty;
    c.epochs_residual = 2000;
    c.seed = 1;
    const auto r = pinn::train(p, c);
    const auto rep = enrichment::zero_point_certificate(r.net, p, 1000);
    CHECK(rep.flagged);
    CHECK(std::min(rep.argmin[0], 1.0 - rep.argmin[0]) <= 0.05);
    for (const Point& z : rep.zero_points) CHECK(std::min(z[0], 1.0 - z[0]) <= 0.05);
    REQUIRE(rep.error_bound.has_value());
    CHECK(*rep.error_bound <= 0.2);
}
