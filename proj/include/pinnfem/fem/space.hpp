#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pinnfem/autodiff/field.hpp"
#include "pinnfem/fem/element.hpp"
#include "pinnfem/mesh/mesh.hpp"

namespace pinnfem::fem {

enum class Enrichment { classical, additive, multiplicative };

/// Finite element space on a mesh, possibly enriched by a field.
///
/// additive: functions w + field, w in V_h (the discrete unknown is w).
/// multiplicative: functions w * field, w in V_h; `field` is the multiplier
/// and already includes the shift C, which reconstruction subtracts again.
struct FunctionSpace {
    std::shared_ptr<const mesh::Mesh> mesh;
    Element element = Element::lagrange(1, 1);
    /// dofs_per_cell entries per cell.
    std::vector<int> dof_map;
    int n_dofs = 0;
    /// Location and kind of each global DoF.
    std::vector<Point> dof_points;
    std::vector<DofKind> dof_kinds;
    /// Global DoFs carrying Dirichlet data.
    std::vector<int> boundary_dofs;

    Enrichment enrichment = Enrichment::classical;
    std::shared_ptr<const ad::JetField> field;
    double shift = 0.0;

    [[nodiscard]] int dim() const noexcept { return element.dim(); }
    [[nodiscard]] std::span<const int> cell_dofs(int c) const
    {
        const auto n = static_cast<std::size_t>(element.dofs_per_cell());
        return {dof_map.data() + static_cast<std::size_t>(c) * n, n};
    }
};

/// Classical space. 1D DoFs are numbered left to right; otherwise vertex DoFs
/// take the node numbers and edge DoFs follow in first-seen order.
[[nodiscard]] FunctionSpace make_space(std::shared_ptr<const mesh::Mesh> mesh, const Element& element);

/// Copy of `base` enriched by `field`. Multiplicative spaces record `shift`.
[[nodiscard]] FunctionSpace enrich(const FunctionSpace& base, Enrichment mode, std::shared_ptr<const ad::JetField> field,
                                   double shift = 0.0);

/// Affine map x = v0 + J xhat of one cell.
struct CellGeometry {
    Point origin{};
    Eigen::Matrix3d jacobian = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d inverse = Eigen::Matrix3d::Identity();
    double det = 1.0;
};

[[nodiscard]] CellGeometry cell_geometry(const mesh::Mesh& mesh, int cell);
[[nodiscard]] Point map_point(const CellGeometry& g, const Point& xhat);
/// Reference coordinates of a physical point.
[[nodiscard]] Point reference_point(const CellGeometry& g, const Point& x);

/// Nodal interpolation of a closed form into the classical V_h (derivative
/// DoFs take f').
[[nodiscard]] Eigen::VectorXd interpolate(const FunctionSpace& space, const ad::ScalarField& f);

} // namespace pinnfem::fem
