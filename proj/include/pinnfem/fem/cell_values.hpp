#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pinnfem/autodiff/jet.hpp"
#include "pinnfem/fem/quadrature.hpp"
#include "pinnfem/fem/space.hpp"

namespace pinnfem::fem {

/// Physical basis functions of one cell at its quadrature points.
///
/// For multiplicative spaces the basis is already multiplied by the field,
/// so value/grad/second describe phi_i * field directly.
struct CellValues {
    int cell = 0;
    std::span<const Point> points;
    /// Quadrature weight times |det J|.
    Eigen::VectorXd weights;
    /// nb x nq each.
    Eigen::MatrixXd value;
    std::array<Eigen::MatrixXd, 3> grad;
    /// Second derivative, 1D only, present when order >= 2.
    Eigen::MatrixXd second;
    /// Field jets at the quadrature points (enriched spaces only; empty otherwise).
    std::span<const ad::Jet> field;

    [[nodiscard]] int quadrature_points() const noexcept { return static_cast<int>(weights.size()); }
};

/// Iterates cells of a space with a fixed quadrature rule, evaluating the
/// enrichment field once per quadrature point in batches of cells.
class CellIntegrator {
public:
    /// `order` is the highest derivative needed: 1, or 2 (1D only).
    CellIntegrator(const FunctionSpace& space, int quadrature_degree, int order);

    [[nodiscard]] const QuadratureRule& rule() const noexcept { return rule_; }
    [[nodiscard]] int order() const noexcept { return order_; }

    /// Calls fn once per cell in [begin, end), in order.
    void visit(int begin, int end, const std::function<void(const CellValues&)>& fn) const;

    /// Basis values and derivatives at arbitrary reference points of one cell,
    /// enrichment transform included when `field` jets are given.
    void tabulate(int cell, std::span<const Point> xhat, std::span<const ad::Jet> field, CellValues& out) const;

private:
    void fill(int cell, const std::vector<ad::Jet>* ref, std::span<const Point> xhat,
              std::span<const ad::Jet> field, CellValues& out) const;

    const FunctionSpace* space_;
    QuadratureRule rule_;
    int order_;
    // reference basis at every quadrature point, nq x nb jets
    std::vector<std::vector<ad::Jet>> ref_;
};

/// Default assembly quadrature degree: 2k+2 classical, 2k+4 enriched.
[[nodiscard]] int assembly_degree(const FunctionSpace& space) noexcept;
/// Default error-norm quadrature degree 2k+6.
[[nodiscard]] int error_degree(const FunctionSpace& space) noexcept;

} // namespace pinnfem::fem
