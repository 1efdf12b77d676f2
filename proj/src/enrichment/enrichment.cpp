#include "pinnfem/enrichment/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pinnfem/common/errors.hpp"
#include "pinnfem/fem/evaluate.hpp"
#include "pinnfem/pinn/network_function.hpp"

namespace pinnfem::enrichment {

namespace {

constexpr double max_samples = 1e5;

int axis_count(int dim, int resolution)
{
    if (dim < 1 || dim > 3) throw InputError("dimension must be 1, 2 or 3");
    if (resolution < 2) throw InputError("sample resolution must be at least 2");
    int cap = static_cast<int>(std::floor(std::pow(max_samples, 1.0 / dim) + 1e-9));
    while (std::pow(cap + 1, dim) <= max_samples) ++cap;
    while (std::pow(cap, dim) > max_samples) --cap;
    return std::min(resolution, cap);
}

std::vector<double> sample_values(const ad::JetField& u, std::span<const Point> pts)
{
    const auto jets = u.evaluate(pts, ad::Layout{ad::JetKind::taylor, u.dim(), 0});
    std::vector<double> v(jets.size());
    for (std::size_t k = 0; k < jets.size(); ++k) {
        v[k] = jets[k].value();
        if (!std::isfinite(v[k])) throw EvaluationError("non-finite enrichment field value at a sample point");
    }
    return v;
}

double sampled_min(const ad::JetField& u, int resolution)
{
    const auto pts = sample_grid(u.dim(), resolution);
    const auto v = sample_values(u, pts);
    return *std::min_element(v.begin(), v.end());
}

EnrichmentPlan plan_for(Mode mode, std::shared_ptr<const ad::JetField> u, const EnrichmentOptions& o)
{
    if (!u) throw InputError("enrichment needs a field");
    EnrichmentPlan plan;
    plan.mode = mode;
    plan.field = std::move(u);
    plan.shift_margin = o.shift_margin;
    plan.sample_resolution = o.sample_resolution;
    return plan;
}

EnrichedSolution finish(const ProblemSpec& problem, fem::FunctionSpace space, EnrichmentPlan plan,
                        const EnrichmentOptions& o)
{
    fem::AssembledSystem sys = fem::assemble(space, problem, o.assembly);
    fem::apply_dirichlet(sys);
    fem::SolveResult r = fem::solve(sys, o.solver);
    EnrichedSolution sol{std::move(space), r.solution, std::move(plan), std::move(r)};
    return sol;
}

void check_dim(const ProblemSpec& problem, const fem::FunctionSpace& base, const ad::JetField& u)
{
    if (base.enrichment != fem::Enrichment::classical) throw InputError("the base space must be classical");
    if (base.dim() != problem.dim || u.dim() != problem.dim) {
        throw InputError("space, field and problem dimensions differ");
    }
}

} // namespace

std::vector<Point> sample_grid(int dim, int resolution)
{
    const int m = axis_count(dim, resolution);
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(m);
    std::vector<Point> pts;
    pts.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        Point x{0.0, 0.0, 0.0};
        std::size_t r = k;
        for (int a = 0; a < dim; ++a) {
            x[static_cast<std::size_t>(a)] = static_cast<double>(r % static_cast<std::size_t>(m)) / (m - 1);
            r /= static_cast<std::size_t>(m);
        }
        pts.push_back(x);
    }
    return pts;
}

double compute_shift(const ad::JetField& u, double margin, int resolution)
{
    if (!(margin > 0.0)) throw InputError("shift margin must be positive");
    const double lo = sampled_min(u, resolution);
    return lo >= margin ? 0.0 : margin - lo;
}

double compute_shift(const ad::DenseNetwork& net, const ProblemSpec& problem, double margin, int resolution)
{
    return compute_shift(pinn::NetworkFunction(net, problem), margin, resolution);
}

EnrichedSolution solve_additive(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                std::shared_ptr<const ad::JetField> u, const EnrichmentOptions& o)
{
    EnrichmentPlan plan = plan_for(Mode::additive, std::move(u), o);
    check_dim(problem, base, *plan.field);
    fem::FunctionSpace space = fem::enrich(base, fem::Enrichment::additive, plan.field);
    return finish(problem, std::move(space), std::move(plan), o);
}

EnrichedSolution solve_additive(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                const ad::DenseNetwork& net, const EnrichmentOptions& o)
{
    EnrichedSolution sol = solve_additive(problem, base, std::make_shared<pinn::NetworkFunction>(net, problem), o);
    sol.plan.net = net;
    return sol;
}

EnrichedSolution solve_multiplicative(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                      std::shared_ptr<const ad::JetField> u, const EnrichmentOptions& o)
{
    EnrichmentPlan plan = plan_for(Mode::multiplicative, std::move(u), o);
    check_dim(problem, base, *plan.field);
    plan.shift = o.shift ? *o.shift : compute_shift(*plan.field, o.shift_margin, o.sample_resolution);
    auto phi = std::make_shared<ad::OffsetField>(plan.field, plan.shift);
    const double lo = sampled_min(*phi, o.sample_resolution);
    if (lo < o.shift_margin) {
        throw ShiftError("min of u_bar + C is " + std::to_string(lo) + " < margin " + std::to_string(o.shift_margin) +
                         "; recompute the shift with a larger margin");
    }
    fem::FunctionSpace space = fem::enrich(base, fem::Enrichment::multiplicative, phi, plan.shift);
    return finish(shifted(problem, plan.shift), std::move(space), std::move(plan), o);
}

EnrichedSolution solve_multiplicative(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                      const ad::DenseNetwork& net, const EnrichmentOptions& o)
{
    EnrichedSolution sol =
        solve_multiplicative(problem, base, std::make_shared<pinn::NetworkFunction>(net, problem), o);
    ad::DenseNetwork shifted_net = net;
    shifted_net.shift += sol.plan.shift;
    sol.plan.net = std::move(shifted_net);
    return sol;
}

ad::Jet evaluate_enriched(const EnrichedSolution& sol, const Point& x, int order)
{
    if (order < 0 || order > 2) throw InputError("derivative order must be 0, 1 or 2");
    return fem::evaluate_fe(sol.space, sol.aux_dofs, x, order);
}

ZeroPointReport zero_point_certificate(const ad::JetField& u, const ProblemSpec& problem, int resolution,
                                       double margin)
{
    const int d = u.dim();
    const int m = axis_count(d, resolution);
    const auto pts = sample_grid(d, resolution);
    const auto v = sample_values(u, pts);

    ZeroPointReport rep;
    rep.min_abs = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) < rep.min_abs) {
            rep.min_abs = std::abs(v[k]);
            best = k;
        }
        if (v[k] == 0.0) rep.zero_points.push_back(pts[k]);
    }
    rep.argmin = pts[best];
    rep.value_at_argmin = v[best];
    rep.flagged = rep.min_abs < margin;
    if (rep.flagged && problem.exact_u) rep.error_bound = std::abs((*problem.exact_u)(rep.argmin));

    std::size_t stride = 1;
    for (int a = 0; a < d; ++a) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if ((k / stride) % static_cast<std::size_t>(m) == static_cast<std::size_t>(m - 1)) continue;
            const std::size_t n = k + stride;
            if ((v[k] < 0.0 && v[n] > 0.0) || (v[k] > 0.0 && v[n] < 0.0)) {
                Point mid{};
                for (std::size_t i = 0; i < 3; ++i) mid[i] = 0.5 * (pts[k][i] + pts[n][i]);
                rep.zero_points.push_back(mid);
            }
        }
        stride *= static_cast<std::size_t>(m);
    }
    return rep;
}

ZeroPointReport zero_point_certificate(const ad::DenseNetwork& net, const ProblemSpec& problem, int resolution,
                                       double margin)
{
    return zero_point_certificate(pinn::NetworkFunction(net, problem), problem, resolution, margin);
}

} // namespace pinnfem::enrichment
