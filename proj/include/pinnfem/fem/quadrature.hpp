#pragma once

#include <vector>

#include "pinnfem/common/point.hpp"
#include "pinnfem/mesh/mesh.hpp"

namespace pinnfem::fem {

/// Points and weights on a reference cell: [0,1], the unit triangle or the unit tetrahedron.
struct QuadratureRule {
    mesh::CellShape shape = mesh::CellShape::interval;
    int exactness = 0;
    std::vector<Point> points;
    std::vector<double> weights;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(weights.size()); }
};

/// Highest exactness degree available per cell shape.
[[nodiscard]] int max_quadrature_degree(mesh::CellShape shape) noexcept;

/// Gauss-Legendre on [0,1] with n points (exact to degree 2n-1).
[[nodiscard]] QuadratureRule gauss_legendre(int n);

/// Smallest rule in the family exact for polynomials of total degree `degree`.
/// Simplices use collapsed (Duffy) products of Gauss-Legendre rules.
[[nodiscard]] QuadratureRule quadrature_for(mesh::CellShape shape, int degree);

} // namespace pinnfem::fem
