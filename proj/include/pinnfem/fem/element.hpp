#pragma once

#include <vector>

#include <Eigen/Core>

#include "pinnfem/autodiff/jet.hpp"
#include "pinnfem/common/point.hpp"
#include "pinnfem/mesh/mesh.hpp"

namespace pinnfem::fem {

enum class Family { lagrange, hermite };

enum class DofKind { vertex_value, vertex_derivative, edge, interior };

struct DofDescriptor {
    DofKind kind = DofKind::vertex_value;
    /// Local vertex index, local edge index, or interior ordinal.
    int entity = 0;
    /// Node on the reference cell.
    Point node{};
};

/// Reference element on [0,1], the unit triangle or the unit tetrahedron.
///
/// Lagrange P1-P3 (1D), P1-P2 (2D), P1 (3D) with equispaced nodes; Hermite
/// cubic in 1D with local DoFs (u(0), u'(0), u(1), u'(1)).
/// Local order: vertex DoFs, then edge DoFs along edges (0,1), (1,2), (0,2), then interior.
class Element {
public:
    static Element lagrange(int dim, int degree);
    static Element hermite();

    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int dofs_per_cell() const noexcept { return static_cast<int>(dofs_.size()); }
    [[nodiscard]] const std::vector<DofDescriptor>& dofs() const noexcept { return dofs_; }
    [[nodiscard]] mesh::CellShape shape() const noexcept;

    /// Jets per local basis function at the reference point; layout
    /// Layout::for_order(dim, order), order <= 2 (<= 4 in 1D).
    [[nodiscard]] std::vector<ad::Jet> basis(const Point& xhat, int order) const;

private:
    Element() = default;
    void build_coefficients();

    Family family_ = Family::lagrange;
    int dim_ = 1;
    int degree_ = 1;
    std::vector<DofDescriptor> dofs_;
    std::vector<std::array<int, 3>> monomials_;
    /// coeffs_(m, i): coefficient of monomial m in basis function i.
    Eigen::MatrixXd coeffs_;
};

/// Same as element.basis, after checking that xhat lies in the reference cell.
[[nodiscard]] std::vector<ad::Jet> reference_basis(const Element& element, const Point& xhat, int order);

[[nodiscard]] bool in_reference_cell(mesh::CellShape shape, const Point& xhat, double tol = 1e-12) noexcept;

} // namespace pinnfem::fem
