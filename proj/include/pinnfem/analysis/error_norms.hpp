#pragma once

#include <optional>

#include <Eigen/Core>

#include "pinnfem/common/problem.hpp"
#include "pinnfem/fem/space.hpp"

namespace pinnfem::analysis {

struct ErrorTriple {
    double l2 = 0.0;
    /// Full H1 norm: sqrt(l2^2 + h1_semi^2).
    double h1 = 0.0;
    double h1_semi = 0.0;
    /// |u - u_h|_{H2} seminorm, 1D only.
    std::optional<double> h2;
};

struct ErrorOptions {
    /// Quadrature exactness; <= 0 picks fem::error_degree(space).
    int quadrature_degree = 0;
    bool with_h2 = false;
};

/// Errors of the reconstructed u_h (see fem::evaluate_fe) against exact_u,
/// by cell-wise quadrature.
[[nodiscard]] ErrorTriple error_norms(const fem::FunctionSpace& space, const Eigen::VectorXd& dofs,
                                      const ProblemSpec& problem, const ErrorOptions& options = {});

/// log2(e_coarse / e_fine); NaN when either error is not positive.
[[nodiscard]] double order_between(double e_coarse, double e_fine) noexcept;

} // namespace pinnfem::analysis
