#include "pinnfem/fem/cell_values.hpp"

#include <cmath>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::fem {

namespace {

constexpr std::size_t batch_points = 8192;

} // namespace

int assembly_degree(const FunctionSpace& space) noexcept
{
    const int k = space.element.degree();
    return space.enrichment == Enrichment::classical ? 2 * k + 2 : 2 * k + 4;
}

int error_degree(const FunctionSpace& space) noexcept
{
    return 2 * space.element.degree() + 6;
}

CellIntegrator::CellIntegrator(const FunctionSpace& space, int quadrature_degree, int order)
    : space_(&space), rule_(quadrature_for(space.element.shape(), quadrature_degree)), order_(order)
{
    if (order < 1 || order > 2) throw CapabilityError("cell tabulation supports derivative orders 1 and 2");
    if (order == 2 && space.dim() != 1) throw CapabilityError("second derivatives are tabulated in 1D only");
    ref_.reserve(rule_.points.size());
    for (const Point& p : rule_.points) ref_.push_back(space.element.basis(p, order));
}

void CellIntegrator::fill(int cell, const std::vector<ad::Jet>* ref, std::span<const Point> xhat,
                          std::span<const ad::Jet> field, CellValues& out) const
{
    const FunctionSpace& s = *space_;
    const int d = s.dim();
    const int nb = s.element.dofs_per_cell();
    const auto nq = static_cast<Eigen::Index>(xhat.size());
    const CellGeometry g = cell_geometry(*s.mesh, cell);
    out.cell = cell;
    out.value.resize(nb, nq);
    for (int a = 0; a < d; ++a) out.grad[static_cast<std::size_t>(a)].resize(nb, nq);
    if (order_ >= 2) out.second.resize(nb, nq);

    std::vector<ad::Jet> local;
    const auto& dofs = s.element.dofs();
    const double h = g.jacobian(0, 0);
    for (Eigen::Index q = 0; q < nq; ++q) {
        if (!ref) local = s.element.basis(xhat[static_cast<std::size_t>(q)], order_);
        const std::vector<ad::Jet>& b = ref ? ref[q] : local;
        for (int i = 0; i < nb; ++i) {
            const ad::Jet& j = b[static_cast<std::size_t>(i)];
            // physical slope DoFs: psi = h * psi_hat
            const double scale = dofs[static_cast<std::size_t>(i)].kind == DofKind::vertex_derivative ? h : 1.0;
            out.value(i, q) = scale * j[0];
            for (int a = 0; a < d; ++a) {
                double v = 0.0;
                for (int c = 0; c < d; ++c) v += g.inverse(c, a) * j[1 + c];
                out.grad[static_cast<std::size_t>(a)](i, q) = scale * v;
            }
            if (order_ >= 2) out.second(i, q) = scale * j[2] / (h * h);
        }
    }

    if (!field.empty() && s.enrichment == Enrichment::multiplicative) {
        for (Eigen::Index q = 0; q < nq; ++q) {
            const ad::Jet& f = field[static_cast<std::size_t>(q)];
            for (int i = 0; i < nb; ++i) {
                const double v = out.value(i, q);
                if (order_ >= 2) {
                    out.second(i, q) = out.second(i, q) * f[0] + 2.0 * out.grad[0](i, q) * f[1] + v * f[2];
                }
                for (int a = 0; a < d; ++a) {
                    auto& ga = out.grad[static_cast<std::size_t>(a)];
                    ga(i, q) = ga(i, q) * f[0] + v * f[1 + a];
                }
                out.value(i, q) = v * f[0];
            }
        }
    }
    out.field = field;
}

void CellIntegrator::tabulate(int cell, std::span<const Point> xhat, std::span<const ad::Jet> field,
                              CellValues& out) const
{
    fill(cell, nullptr, xhat, field, out);
    out.weights.resize(0);
}

void CellIntegrator::visit(int begin, int end, const std::function<void(const CellValues&)>& fn) const
{
    const FunctionSpace& s = *space_;
    const auto nq = rule_.points.size();
    const bool enriched = s.enrichment != Enrichment::classical;
    const ad::Layout layout = ad::Layout::for_order(s.dim(), order_);
    const int cells_per_batch = std::max<int>(1, static_cast<int>(batch_points / nq));

    std::vector<Point> points;
    std::vector<ad::Jet> jets;
    CellValues cv;
    for (int b0 = begin; b0 < end; b0 += cells_per_batch) {
        const int b1 = std::min(end, b0 + cells_per_batch);
        points.clear();
        for (int c = b0; c < b1; ++c) {
            const CellGeometry g = cell_geometry(*s.mesh, c);
            for (const Point& p : rule_.points) points.push_back(map_point(g, p));
        }
        if (enriched) {
            jets = s.field->evaluate(points, layout);
            for (const ad::Jet& j : jets) {
                for (double v : j.data()) {
                    if (!std::isfinite(v)) throw EvaluationError("enrichment field is not finite at a quadrature point");
                }
            }
        }
        for (int c = b0; c < b1; ++c) {
            const std::size_t off = static_cast<std::size_t>(c - b0) * nq;
            std::span<const ad::Jet> f;
            if (enriched) f = std::span<const ad::Jet>(jets).subspan(off, nq);
            fill(c, ref_.data(), rule_.points, f, cv);
            const CellGeometry g = cell_geometry(*s.mesh, c);
            cv.weights.resize(static_cast<Eigen::Index>(nq));
            for (std::size_t q = 0; q < nq; ++q) {
                cv.weights(static_cast<Eigen::Index>(q)) = rule_.weights[q] * std::abs(g.det);
            }
            cv.points = std::span<const Point>(points).subspan(off, nq);
            fn(cv);
        }
    }
}

} // namespace pinnfem::fem
