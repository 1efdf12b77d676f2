#include "pinnfem/cli/registry.hpp"

#include <cmath>
#include <numbers>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::cli {

namespace {

constexpr double pi = std::numbers::pi;

ProblemSpec base(const std::string& id, int dim)
{
    ProblemSpec p;
    p.id = id;
    p.dim = dim;
    p.coeff_a = ad::constant_field(1.0);
    p.coeff_c = ad::constant_field(0.0);
    p.unit_diffusion = true;
    return p;
}

ProblemSpec poisson_1d()
{
    ProblemSpec p = base("p1d_poisson", 1);
    p.exact_u = ad::make_field(1, [](const auto& x) {
        using std::sin;
        return (1.0 - x[0]) * sin(5.0 * x[0]) + 2.0;
    });
    p.source_f = ad::make_field(1, [](const auto& x) {
        using std::cos;
        using std::sin;
        return 10.0 * cos(5.0 * x[0]) + 25.0 * (1.0 - x[0]) * sin(5.0 * x[0]);
    });
    p.boundary_g = ad::constant_field(2.0);
    return p;
}

ProblemSpec biharmonic_1d()
{
    ProblemSpec p = base("p1d_biharmonic", 1);
    p.op = Operator::biharmonic_1d;
    p.exact_u = ad::make_field(1, [](const auto& x) {
        using std::sin;
        return 3.0 * x[0] * x[0] + (x[0] + 1.0) * sin(4.0 * x[0]) + 1.0;
    });
    p.source_f = ad::make_field(1, [](const auto& x) {
        using std::cos;
        using std::sin;
        return 256.0 * (x[0] + 1.0) * sin(4.0 * x[0]) - 256.0 * cos(4.0 * x[0]);
    });
    // clamped data: value and slope of the exact solution at both ends
    p.boundary_g = *p.exact_u;
    return p;
}

ProblemSpec elliptic_2d(const std::string& id, double c)
{
    ProblemSpec p = base(id, 2);
    p.coeff_c = ad::constant_field(c);
    p.exact_u = ad::make_field(2, [](const auto& x) {
        using std::sin;
        return sin(pi * x[0]) * sin(pi * x[1]) + 2.0;
    });
    p.source_f = ad::make_field(2, [c](const auto& x) {
        using std::sin;
        return (2.0 * pi * pi + c) * sin(pi * x[0]) * sin(pi * x[1]) + 2.0 * c;
    });
    p.boundary_g = ad::constant_field(2.0);
    return p;
}

ProblemSpec poisson_3d()
{
    ProblemSpec p = base("p3d_poisson", 3);
    p.exact_u = ad::make_field(3, [](const auto& x) {
        using std::exp;
        using std::sin;
        return exp(x[0] + x[1] + x[2]) * sin(pi * x[0]) * sin(pi * x[1]) * sin(pi * x[2]) + 1.0;
    });
    // d^2/dx^2 (e^x sin(pi x)) = e^x ((1 - pi^2) sin(pi x) + 2 pi cos(pi x))
    p.source_f = ad::make_field(3, [](const auto& x) {
        using std::cos;
        using std::exp;
        using std::sin;
        const auto s0 = sin(pi * x[0]), s1 = sin(pi * x[1]), s2 = sin(pi * x[2]);
        const auto c0 = cos(pi * x[0]), c1 = cos(pi * x[1]), c2 = cos(pi * x[2]);
        const auto e = exp(x[0] + x[1] + x[2]);
        return -1.0 * e * (3.0 * (1.0 - pi * pi) * s0 * s1 * s2 + 2.0 * pi * (c0 * s1 * s2 + s0 * c1 * s2 + s0 * s1 * c2));
    });
    p.boundary_g = ad::constant_field(1.0);
    return p;
}

} // namespace

const std::vector<std::string>& problem_ids()
{
    static const std::vector<std::string> ids = {"p1d_poisson", "p1d_biharmonic", "p2d_c0",
                                                 "p2d_cm5",     "p2d_eig",        "p3d_poisson"};
    return ids;
}

ProblemSpec make_problem(const std::string& id)
{
    if (id == "p1d_poisson") return poisson_1d();
    if (id == "p1d_biharmonic") return biharmonic_1d();
    if (id == "p2d_c0") return elliptic_2d(id, 0.0);
    if (id == "p2d_cm5") return elliptic_2d(id, -5.0);
    if (id == "p2d_eig") return elliptic_2d(id, -2.0 * pi * pi + 0.01);
    if (id == "p3d_poisson") return poisson_3d();
    throw ConfigError("unknown problem id '" + id + "'");
}

double source_mismatch(const ProblemSpec& p, int samples)
{
    if (!p.exact_u) throw CapabilityError("problem " + p.id + " has no exact solution");
    const int m = std::max(1, static_cast<int>(std::floor(std::pow(samples, 1.0 / p.dim) + 1e-9)));
    const ad::Layout layout = p.op == Operator::biharmonic_1d ? ad::Layout{ad::JetKind::taylor, 1, 4}
                                                              : ad::Layout::laplacian(p.dim);
    double worst = 0.0;
    const int total = static_cast<int>(std::pow(m, p.dim));
    for (int n = 0; n < total; ++n) {
        Point x{};
        int r = n;
        for (int a = 0; a < p.dim; ++a) {
            x[static_cast<std::size_t>(a)] = (r % m + 0.5) / m;
            r /= m;
        }
        const ad::Jet u = p.exact_u->jet(x, layout);
        const double f = p.source_f.value(x);
        worst = std::max(worst, std::abs(f - apply_operator(p, x, u)) / std::max(1.0, std::abs(f)));
    }
    return worst;
}

void verify_registry()
{
    for (const auto& id : problem_ids()) {
        const double e = source_mismatch(make_problem(id));
        if (!(e <= 1e-8)) throw Error("registry problem " + id + " fails its source check (" + std::to_string(e) + ")");
    }
}

} // namespace pinnfem::cli
