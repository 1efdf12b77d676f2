#pragma once

#include <Eigen/Core>

#include "pinnfem/autodiff/jet.hpp"
#include "pinnfem/fem/space.hpp"

namespace pinnfem::fem {

/// u_h at x with derivatives up to `order` (<= 2), layout Layout::for_order(dim, order).
///
/// Reconstruction follows the space: classical sum_j U_j phi_j; additive
/// sum_j U_j phi_j + field; multiplicative (sum_j U_j phi_j) * field - shift.
[[nodiscard]] ad::Jet evaluate_fe(const FunctionSpace& space, const Eigen::VectorXd& dofs, const Point& x, int order);

/// The discrete part only, sum_j U_j phi_j, on a given cell (no locate, no enrichment).
[[nodiscard]] ad::Jet evaluate_on_cell(const FunctionSpace& space, const Eigen::VectorXd& dofs, int cell,
                                       const Point& x, int order);

} // namespace pinnfem::fem
