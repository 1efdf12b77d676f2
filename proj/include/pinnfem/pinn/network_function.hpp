#pragma once

#include <memory>

#include "pinnfem/autodiff/field.hpp"
#include "pinnfem/autodiff/network.hpp"
#include "pinnfem/common/problem.hpp"

namespace pinnfem::pinn {

/// Distance factor D and boundary-data extension G of the boundary operator
/// u_bar = D u + G, as jets at one point.
///
/// Elliptic: D = prod_i x_i (1 - x_i), G = g.
/// biharmonic_1d: D = x^2 (1 - x)^2, G = cubic Hermite interpolant of (g, g') at {0, 1}.
struct BoundaryTerms {
    ad::Jet distance;
    ad::Jet extension;
};

class BoundaryOperator {
public:
    explicit BoundaryOperator(const ProblemSpec& problem);
    [[nodiscard]] BoundaryTerms at(const Point& x, const ad::Layout& layout) const;

private:
    int dim_;
    bool biharmonic_;
    ad::ScalarField g_;
    // biharmonic endpoint data g(0), g'(0), g(1), g'(1)
    double g0_ = 0.0, s0_ = 0.0, g1_ = 0.0, s1_ = 0.0;
};

/// u_bar = D * raw + G + shift when the network carries dirichlet_product,
/// raw + shift otherwise. Points are evaluated in sub-batches.
class NetworkFunction final : public ad::JetField {
public:
    NetworkFunction(ad::DenseNetwork net, const ProblemSpec& problem);

    [[nodiscard]] int dim() const override { return net_.input_dim(); }
    using ad::JetField::evaluate;
    [[nodiscard]] std::vector<ad::Jet> evaluate(std::span<const Point> points, const ad::Layout& layout) const override;

    [[nodiscard]] const ad::DenseNetwork& network() const noexcept { return net_; }
    [[nodiscard]] const BoundaryOperator& boundary() const noexcept { return op_; }

private:
    ad::DenseNetwork net_;
    BoundaryOperator op_;
};

/// The boundary-operated network u_bar as an evaluable field.
[[nodiscard]] std::shared_ptr<const NetworkFunction> apply_boundary_operator(const ad::DenseNetwork& net,
                                                                             const ProblemSpec& problem);

/// Columns t of the linear map raw jet -> D * raw jet, so that
/// (D * raw)[s] = sum_t M[s][t] raw[t].
void product_matrix(const ad::Jet& distance, double (&m)[ad::max_slots][ad::max_slots]);

} // namespace pinnfem::pinn
