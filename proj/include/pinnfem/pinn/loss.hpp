#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "pinnfem/autodiff/field.hpp"
#include "pinnfem/autodiff/network.hpp"
#include "pinnfem/common/problem.hpp"
#include "pinnfem/pinn/collocation.hpp"
#include "pinnfem/pinn/network_function.hpp"

namespace pinnfem::pinn {

/// residual: w sum (L u - f)^2 over interior points.
/// boundary: w_b sum (u - g)^2 over boundary points; biharmonic_1d adds (u' - g')^2.
/// ritz: w sum (a |grad u|^2 / 2 + c u^2 - u f), second-order problems only.
enum class LossKind { residual, boundary, ritz };

/// Loss functionals of one problem on one collocation set, with the per-point
/// data (coefficients, source, boundary-operator jets) computed once.
class LossFunctional {
public:
    LossFunctional(const ProblemSpec& problem, const CollocationSet& colloc);

    /// Loss of an arbitrary field standing in for u_bar.
    [[nodiscard]] double value(LossKind kind, const ad::JetField& u) const;
    /// Loss of the network's u_bar (boundary operator per net.boundary_mode).
    [[nodiscard]] double value(LossKind kind, const ad::DenseNetwork& net) const;
    /// Same value, with d(loss)/d(theta) written to grad.
    double gradient(LossKind kind, const ad::DenseNetwork& net, std::span<double> grad) const;

    /// J_R(exact_u) on the same points; nullopt without an exact solution or for biharmonic problems.
    [[nodiscard]] std::optional<double> exact_ritz() const noexcept { return exact_ritz_; }

    [[nodiscard]] const ProblemSpec& problem() const noexcept { return problem_; }
    [[nodiscard]] const CollocationSet& collocation() const noexcept { return colloc_; }
    [[nodiscard]] ad::Layout layout(LossKind kind) const;

private:
    struct Batch {
        ad::Layout layout;
        int slots = 0;
        // per point: S x S matrix of raw -> D * raw (row-major), then G
        std::vector<double> product;
        std::vector<double> extension;
    };

    [[nodiscard]] const std::vector<Point>& points(LossKind kind) const;
    [[nodiscard]] const Batch& batch(LossKind kind) const;
    double term(LossKind kind, std::size_t p, const double* u, double* bar) const;
    // u_bar slots at point p from the network output slots
    void operated(const Batch& b, std::size_t p, const double* out, double shift, double* u) const;
    void check(LossKind kind) const;
    double evaluate(LossKind kind, const ad::DenseNetwork& net, std::span<double>* grad) const;

    ProblemSpec problem_;
    CollocationSet colloc_;
    Batch residual_, boundary_, ritz_;
    // residual: L u = sum_t op[t] u[t]
    std::vector<std::array<double, ad::max_slots>> op_;
    std::vector<double> f_, a_, c_;
    std::vector<ad::Jet> g_;
    std::optional<double> exact_ritz_;
};

[[nodiscard]] double residual_loss(const ad::JetField& u, const ProblemSpec& problem, const CollocationSet& colloc);
[[nodiscard]] double residual_loss(const ad::DenseNetwork& net, const ProblemSpec& problem,
                                   const CollocationSet& colloc);
[[nodiscard]] double boundary_loss(const ad::JetField& u, const ProblemSpec& problem, const CollocationSet& colloc);
[[nodiscard]] double boundary_loss(const ad::DenseNetwork& net, const ProblemSpec& problem,
                                   const CollocationSet& colloc);
[[nodiscard]] double ritz_loss(const ad::JetField& u, const ProblemSpec& problem, const CollocationSet& colloc);
[[nodiscard]] double ritz_loss(const ad::DenseNetwork& net, const ProblemSpec& problem, const CollocationSet& colloc);
/// J_R(u) - J_R(exact_u); throws CapabilityError without exact_u.
[[nodiscard]] double shifted_ritz(const ad::JetField& u, const ProblemSpec& problem, const CollocationSet& colloc);
[[nodiscard]] double shifted_ritz(const ad::DenseNetwork& net, const ProblemSpec& problem,
                                  const CollocationSet& colloc);

/// sqrt of the integral of (u_bar - exact_u)^2 over the unit box: composite
/// 8-point Gauss-Legendre, `resolution` subintervals per axis.
[[nodiscard]] double pinn_l2_error(const ad::JetField& u, const ProblemSpec& problem, int resolution);
[[nodiscard]] double pinn_l2_error(const ad::DenseNetwork& net, const ProblemSpec& problem, int resolution);

} // namespace pinnfem::pinn
