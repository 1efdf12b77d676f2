#include "pinnfem/common/problem.hpp"

namespace pinnfem {

ProblemSpec shifted(const ProblemSpec& p, double C)
{
    ProblemSpec s = p;
    if (C == 0.0) return s;
    const ad::ScalarField f = p.source_f, c = p.coeff_c, g = p.boundary_g;
    s.source_f.value = [f, c, C](const Point& x) { return f.value(x) + C * c.value(x); };
    s.source_f.jet = [f, c, C](const Point& x, const ad::Layout& l) { return f.jet(x, l) + C * c.jet(x, l); };
    s.boundary_g.value = [g, C](const Point& x) { return g.value(x) + C; };
    s.boundary_g.jet = [g, C](const Point& x, const ad::Layout& l) { return g.jet(x, l) + C; };
    if (p.exact_u) {
        const ad::ScalarField u = *p.exact_u;
        ad::ScalarField su;
        su.value = [u, C](const Point& x) { return u.value(x) + C; };
        su.jet = [u, C](const Point& x, const ad::Layout& l) { return u.jet(x, l) + C; };
        s.exact_u = su;
    }
    return s;
}

int operator_order(const ProblemSpec& p) noexcept
{
    return p.op == Operator::biharmonic_1d ? 4 : 2;
}

double apply_operator(const ProblemSpec& p, const Point& x, const ad::Jet& u)
{
    if (p.op == Operator::biharmonic_1d) return u.derivative(4);
    double lu = 0.0;
    if (p.unit_diffusion) {
        lu = -u.laplacian();
    } else {
        const ad::Jet a = p.coeff_a.jet(x, ad::Layout::for_order(p.dim, 1));
        lu = -a.value() * u.laplacian();
        for (int i = 0; i < p.dim; ++i) lu -= a.grad(i) * u.grad(i);
    }
    return lu + p.coeff_c.value(x) * u.value();
}

} // namespace pinnfem
