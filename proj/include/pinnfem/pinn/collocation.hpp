#pragma once

#include <vector>

#include "pinnfem/common/point.hpp"

namespace pinnfem::pinn {

/// Cell-centered tensor grid in (0,1)^d plus per-face grids on the boundary.
struct CollocationSet {
    int dim = 1;
    /// Points per axis.
    int resolution = 0;
    std::vector<Point> interior_points;
    std::vector<Point> boundary_points;
    /// 1 / interior count.
    double interior_weight = 0.0;
    /// 1/2 for the two endpoints in 1D; face measure / face points otherwise.
    double boundary_weight = 0.0;
};

/// m = floor(count^(1/dim)) points per axis, coordinates (i + 1/2) / m. Each
/// face of the box gets the same centered grid of its own dimension (the two
/// endpoints in 1D). Throws InputError when count < 2^dim.
[[nodiscard]] CollocationSet make_collocation(int dim, int count);

} // namespace pinnfem::pinn
