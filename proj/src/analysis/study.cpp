#include "pinnfem/analysis/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "pinnfem/common/errors.hpp"
#include "pinnfem/fem/evaluate.hpp"
#include "pinnfem/pinn/loss.hpp"

namespace pinnfem::analysis {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::shared_ptr<const mesh::Mesh> make_mesh(int dim, int size)
{
    switch (dim) {
    case 1: return std::make_shared<const mesh::Mesh>(mesh::interval_mesh(size));
    case 2: return std::make_shared<const mesh::Mesh>(mesh::triangle_mesh(size));
    default: return std::make_shared<const mesh::Mesh>(mesh::tet_mesh(size));
    }
}

void validate(const ProblemSpec& p, const StudyConfig& c)
{
    if (c.mesh_sizes.empty()) throw InputError("the study needs at least one mesh size");
    for (std::size_t i = 0; i < c.mesh_sizes.size(); ++i) {
        if (c.mesh_sizes[i] < 1) throw InputError("mesh sizes must be positive");
        if (i > 0 && c.mesh_sizes[i] != 2 * c.mesh_sizes[i - 1]) {
            throw InputError("each mesh size must double the previous one");
        }
    }
    if (c.family == fem::Family::hermite && (p.dim != 1 || c.degree != 3)) {
        throw InputError("the Hermite element is the 1D cubic");
    }
    if (p.op == Operator::biharmonic_1d && c.family != fem::Family::hermite) {
        throw InputError("biharmonic problems need the Hermite element");
    }
    if (c.space != SpaceKind::classical) {
        if (!c.net) throw InputError("enriched spaces need a network");
        if (c.net->input_dim() != p.dim) throw InputError("network input dimension does not match the problem");
    }
    if (!p.exact_u) throw CapabilityError("convergence studies need the exact solution of " + p.id);
}

ErrorTriple failed_errors(bool h2)
{
    ErrorTriple e{nan, nan, nan, std::nullopt};
    if (h2) e.h2 = nan;
    return e;
}

double order_or_nan(const StudyRow& a, const StudyRow& b, double ea, double eb)
{
    if (!a.ok() || !b.ok()) return nan;
    return order_between(ea, eb);
}

void put(std::ostream& out, double v) { out << format6(v); }

} // namespace

std::string space_name(SpaceKind kind)
{
    switch (kind) {
    case SpaceKind::classical: return "classical";
    case SpaceKind::additive: return "additive";
    case SpaceKind::multiplicative: return "multiplicative";
    }
    return "";
}

std::string format6(double v)
{
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ConvergenceReport convergence_study(const ProblemSpec& problem, const StudyConfig& config)
{
    validate(problem, config);
    ConvergenceReport rep;
    rep.problem = problem.id;
    rep.dim = problem.dim;
    rep.space = config.space;
    rep.family = config.family;
    rep.degree = config.degree;
    rep.with_h2 = config.errors.with_h2 || config.family == fem::Family::hermite;
    rep.pinn = config.pinn;

    const fem::Element element =
        config.family == fem::Family::hermite ? fem::Element::hermite() : fem::Element::lagrange(problem.dim, config.degree);
    ErrorOptions eo = config.errors;
    eo.with_h2 = rep.with_h2;

    for (int size : config.mesh_sizes) {
        StudyRow row;
        row.size = size;
        row.h = 1.0 / size;
        try {
            const fem::FunctionSpace base = fem::make_space(make_mesh(problem.dim, size), element);
            row.n_dofs = base.n_dofs;
            fem::SolveResult solve;
            if (config.space == SpaceKind::classical) {
                fem::AssembledSystem sys = fem::assemble(base, problem, config.enrichment.assembly);
                fem::apply_dirichlet(sys);
                solve = fem::solve(sys, config.enrichment.solver);
                row.errors = error_norms(base, solve.solution, problem, eo);
            } else {
                const auto sol = config.space == SpaceKind::additive
                                     ? enrichment::solve_additive(problem, base, *config.net, config.enrichment)
                                     : enrichment::solve_multiplicative(problem, base, *config.net, config.enrichment);
                solve = sol.solve;
                row.shift = sol.plan.shift;
                row.errors = error_norms(sol.space, sol.aux_dofs, problem, eo);
            }
            row.relative_residual = solve.relative_residual;
            row.condition_estimate = solve.condition_estimate;
            row.solver = solve.method;
        } catch (const Error& e) {
            row.status = e.what();
            row.errors = failed_errors(rep.with_h2);
            row.relative_residual = nan;
            row.condition_estimate = nan;
        }
        rep.rows.push_back(std::move(row));
    }

    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        StudyRow& r = rep.rows[i];
        if (i == 0) {
            r.l2_order = r.h1_order = r.h1_semi_order = r.h2_order = nan;
            continue;
        }
        const StudyRow& q = rep.rows[i - 1];
        r.l2_order = order_or_nan(q, r, q.errors.l2, r.errors.l2);
        r.h1_order = order_or_nan(q, r, q.errors.h1, r.errors.h1);
        r.h1_semi_order = order_or_nan(q, r, q.errors.h1_semi, r.errors.h1_semi);
        r.h2_order = rep.with_h2 ? order_or_nan(q, r, q.errors.h2.value_or(nan), r.errors.h2.value_or(nan))
                                 : nan;
    }

    if (config.net) {
        const int res = config.pinn_resolution > 0 ? config.pinn_resolution
                                                   : (problem.dim == 1 ? 64 : problem.dim == 2 ? 32 : 8);
        rep.pinn_l2 = pinn::pinn_l2_error(*config.net, problem, res);
    }
    return rep;
}

void write_report_csv(const ConvergenceReport& rep, std::ostream& out)
{
    out << "n_or_h,l2,l2_order,h1,h1_order,h1_semi,h1_semi_order";
    if (rep.with_h2) out << ",h2,h2_order";
    out << '\n';
    for (const StudyRow& r : rep.rows) {
        if (rep.dim == 1) {
            out << r.size;
        } else {
            put(out, r.h);
        }
        for (double v : {r.errors.l2, r.l2_order, r.errors.h1, r.h1_order, r.errors.h1_semi, r.h1_semi_order}) {
            out << ',';
            put(out, v);
        }
        if (rep.with_h2) {
            out << ',';
            put(out, r.errors.h2.value_or(nan));
            out << ',';
            put(out, r.h2_order);
        }
        out << '\n';
    }
}

void write_metadata(const ConvergenceReport& rep, std::ostream& out)
{
    out << "problem=" << rep.problem << '\n';
    out << "space=" << space_name(rep.space) << '\n';
    out << "element=" << (rep.family == fem::Family::hermite ? "hermite" : "lagrange") << '\n';
    out << "degree=" << rep.degree << '\n';
    if (rep.pinn) {
        out << "seed=" << rep.pinn->seed << '\n';
        out << "epochs_ritz=" << rep.pinn->epochs_ritz << '\n';
        out << "epochs_residual=" << rep.pinn->epochs_residual << '\n';
        out << "final_J_r=" << format6(rep.pinn->final_residual) << '\n';
        out << "final_J_b=" << format6(rep.pinn->final_boundary) << '\n';
        out << "final_J_R_shifted=" << format6(rep.pinn->final_shifted_ritz) << '\n';
    }
    if (rep.pinn_l2) out << "pinn_l2=" << format6(*rep.pinn_l2) << '\n';
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const StudyRow& r = rep.rows[i];
        const std::string k = "row" + std::to_string(i) + ".";
        out << k << "size=" << r.size << '\n';
        out << k << "dofs=" << r.n_dofs << '\n';
        out << k << "status=" << r.status << '\n';
        out << k << "solver=" << r.solver << '\n';
        out << k << "relative_residual=" << format6(r.relative_residual) << '\n';
        out << k << "condition_estimate=" << format6(r.condition_estimate) << '\n';
        if (rep.space == SpaceKind::multiplicative) out << k << "shift=" << format6(r.shift) << '\n';
    }
}

void field_dump(const fem::FunctionSpace& space, const Eigen::VectorXd& dofs, const ProblemSpec& problem,
                int resolution, std::ostream& out)
{
    if (resolution < 2) throw InputError("field dump resolution must be at least 2");
    const int d = space.dim();
    static const char* axis[] = {"x", "y", "z"};
    for (int a = 0; a < d; ++a) out << axis[a] << ',';
    out << "u_h,u,abs_error\n";
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(resolution);
    char buf[32];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t k = 0; k < total; ++k) {
        Point x{0.0, 0.0, 0.0};
        std::size_t r = k;
        for (int a = 0; a < d; ++a) {
            x[static_cast<std::size_t>(a)] = static_cast<double>(r % static_cast<std::size_t>(resolution)) / (resolution - 1);
            r /= static_cast<std::size_t>(resolution);
        }
        for (int a = 0; a < d; ++a) {
            num(x[static_cast<std::size_t>(a)]);
            out << ',';
        }
        const double uh = fem::evaluate_fe(space, dofs, x, 0).value();
        num(uh);
        out << ',';
        if (problem.exact_u) {
            const double u = (*problem.exact_u)(x);
            num(u);
            out << ',';
            num(std::abs(u - uh));
        } else {
            out << ',';
        }
        out << '\n';
    }
}

void field_dump(const fem::FunctionSpace& space, const Eigen::VectorXd& dofs, const ProblemSpec& problem,
                int resolution, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    field_dump(space, dofs, problem, resolution, out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

} // namespace pinnfem::analysis
