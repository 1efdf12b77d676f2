#include "pinnfem/analysis/error_norms.hpp"

#include <cmath>
#include <limits>

#include "pinnfem/common/errors.hpp"
#include "pinnfem/common/parallel.hpp"
#include "pinnfem/fem/cell_values.hpp"

namespace pinnfem::analysis {

ErrorTriple error_norms(const fem::FunctionSpace& space, const Eigen::VectorXd& dofs, const ProblemSpec& problem,
                        const ErrorOptions& options)
{
    if (!problem.exact_u) throw CapabilityError("error norms need the exact solution of " + problem.id);
    if (dofs.size() != space.n_dofs) throw InputError("DoF vector length does not match the space");
    if (options.with_h2 && space.dim() != 1) throw CapabilityError("H2 errors are computed in 1D only");
    const int degree = options.quadrature_degree > 0 ? options.quadrature_degree : fem::error_degree(space);
    const int order = options.with_h2 ? 2 : 1;
    const fem::CellIntegrator integrator(space, degree, order);
    const int d = space.dim();
    const ad::Layout layout = ad::Layout::for_order(d, order);
    const bool additive = space.enrichment == fem::Enrichment::additive;
    const double offset = space.enrichment == fem::Enrichment::multiplicative ? -space.shift : 0.0;
    const ad::ScalarField& exact = *problem.exact_u;

    const int nc = space.mesh->cell_count();
    const std::size_t chunks = (static_cast<std::size_t>(nc) + 1023) / 1024;
    std::vector<std::array<double, 3>> partial(chunks, {0.0, 0.0, 0.0});
    for_chunks(static_cast<std::size_t>(nc), chunks, [&](std::size_t chunk, std::size_t b, std::size_t e) {
        auto& acc = partial[chunk];
        Eigen::VectorXd local;
        integrator.visit(static_cast<int>(b), static_cast<int>(e), [&](const fem::CellValues& cv) {
            const auto cd = space.cell_dofs(cv.cell);
            local.resize(static_cast<Eigen::Index>(cd.size()));
            for (std::size_t i = 0; i < cd.size(); ++i) local(static_cast<Eigen::Index>(i)) = dofs(cd[i]);
            const Eigen::VectorXd val = cv.value.transpose() * local;
            std::array<Eigen::VectorXd, 3> grad;
            for (int a = 0; a < d; ++a) grad[static_cast<std::size_t>(a)] = cv.grad[static_cast<std::size_t>(a)].transpose() * local;
            Eigen::VectorXd sec;
            if (order >= 2) sec = cv.second.transpose() * local;
            for (int q = 0; q < cv.quadrature_points(); ++q) {
                const ad::Jet u = exact.jet(cv.points[static_cast<std::size_t>(q)], layout);
                double uh = val(q) + offset;
                if (additive) uh += cv.field[static_cast<std::size_t>(q)][0];
                const double w = cv.weights(q);
                acc[0] += w * (u[0] - uh) * (u[0] - uh);
                for (int a = 0; a < d; ++a) {
                    double g = grad[static_cast<std::size_t>(a)](q);
                    if (additive) g += cv.field[static_cast<std::size_t>(q)][1 + a];
                    acc[1] += w * (u[1 + a] - g) * (u[1 + a] - g);
                }
                if (order >= 2) {
                    double s = sec(q);
                    if (additive) s += cv.field[static_cast<std::size_t>(q)][2];
                    acc[2] += w * (u[2] - s) * (u[2] - s);
                }
            }
        });
    });
    double l2 = 0.0, semi = 0.0, h2 = 0.0;
    for (const auto& p : partial) {
        l2 += p[0];
        semi += p[1];
        h2 += p[2];
    }
    ErrorTriple t;
    t.l2 = std::sqrt(l2);
    t.h1_semi = std::sqrt(semi);
    t.h1 = std::sqrt(l2 + semi);
    if (options.with_h2) t.h2 = std::sqrt(h2);
    return t;
}

double order_between(double e_coarse, double e_fine) noexcept
{
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(e_coarse / e_fine);
}

} // namespace pinnfem::analysis
