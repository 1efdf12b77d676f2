#include "pinnfem/fem/evaluate.hpp"

#include "pinnfem/common/errors.hpp"

namespace pinnfem::fem {

ad::Jet evaluate_on_cell(const FunctionSpace& space, const Eigen::VectorXd& dofs, int cell, const Point& x, int order)
{
    if (dofs.size() != space.n_dofs) throw InputError("DoF vector length does not match the space");
    const int d = space.dim();
    const CellGeometry g = cell_geometry(*space.mesh, cell);
    Point xhat = reference_point(g, x);
    // clamp round-off so boundary points stay inside the reference cell
    for (int a = 0; a < d; ++a) {
        auto& v = xhat[static_cast<std::size_t>(a)];
        if (v < 0.0 && v > -1e-12) v = 0.0;
    }
    const std::vector<ad::Jet> basis = reference_basis(space.element, xhat, order);
    const ad::Layout layout = basis.front().layout();
    ad::Jet ref(layout);
    const auto cd = space.cell_dofs(cell);
    const double h = g.jacobian(0, 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double u = dofs(cd[i]);
        if (space.element.dofs()[i].kind == DofKind::vertex_derivative) u *= h;
        for (int s = 0; s < layout.slots(); ++s) ref[s] += u * basis[i][s];
    }
    ad::Jet out(layout, ref[0]);
    if (layout.kind == ad::JetKind::taylor) {
        double scale = 1.0;
        for (int k = 1; k < layout.slots(); ++k) {
            scale /= h;
            out[k] = ref[k] * scale;
        }
        return out;
    }
    for (int a = 0; a < d; ++a) {
        double v = 0.0;
        for (int c = 0; c < d; ++c) v += g.inverse(c, a) * ref[1 + c];
        out[1 + a] = v;
    }
    if (layout.kind == ad::JetKind::grad_hess) {
        // H = J^-T Hhat J^-1
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                double v = 0.0;
                for (int p = 0; p < d; ++p) {
                    for (int q = 0; q < d; ++q) v += g.inverse(p, i) * ref[layout.hessian_slot(p, q)] * g.inverse(q, j);
                }
                out[layout.hessian_slot(i, j)] = v;
            }
        }
    }
    return out;
}

ad::Jet evaluate_fe(const FunctionSpace& space, const Eigen::VectorXd& dofs, const Point& x, int order)
{
    for (int a = 0; a < space.dim(); ++a) {
        const double v = x[static_cast<std::size_t>(a)];
        if (!(v >= 0.0 && v <= 1.0)) throw InputError("evaluation point lies outside the unit box");
    }
    const auto cell = space.mesh->locate(x);
    if (!cell) throw InputError("evaluation point lies outside the mesh");
    const ad::Jet w = evaluate_on_cell(space, dofs, *cell, x, order);
    switch (space.enrichment) {
    case Enrichment::classical: return w;
    case Enrichment::additive: return w + space.field->evaluate(x, w.layout());
    case Enrichment::multiplicative: return w * space.field->evaluate(x, w.layout()) - space.shift;
    }
    return w;
}

} // namespace pinnfem::fem
