#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pinnfem/autodiff/jet.hpp"
#include "pinnfem/common/point.hpp"

namespace pinnfem::ad {

enum class Activation { tanh };
enum class BoundaryMode { none, dirichlet_product };

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Fully connected tanh network R^d -> R.
///
/// Parameters live in one flat vector ordered layer by layer: the weight matrix
/// of layer l (n_l x n_{l-1}, row-major) followed by its bias vector. Hidden
/// layers apply the activation; the output layer is affine.
class DenseNetwork {
public:
    /// All parameters zero.
    explicit DenseNetwork(std::vector<int> layer_sizes);

    /// Glorot-uniform weights U(-r, r), r = sqrt(6 / (n_in + n_out)), zero biases,
    /// drawn from SplitMix64(seed) in flat parameter order.
    static DenseNetwork glorot(std::vector<int> layer_sizes, std::uint64_t seed);

    [[nodiscard]] const std::vector<int>& layer_sizes() const noexcept { return sizes_; }
    [[nodiscard]] int input_dim() const noexcept { return sizes_.front(); }
    /// Number of affine layers (hidden + output).
    [[nodiscard]] int depth() const noexcept { return static_cast<int>(sizes_.size()) - 1; }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return params_.size(); }

    [[nodiscard]] std::span<double> parameters() noexcept { return params_; }
    [[nodiscard]] std::span<const double> parameters() const noexcept { return params_; }

    [[nodiscard]] Eigen::Map<const RowMatrix> weights(int layer) const;
    [[nodiscard]] Eigen::Map<RowMatrix> weights(int layer);
    [[nodiscard]] Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
    [[nodiscard]] Eigen::Map<Eigen::VectorXd> bias(int layer);
    /// Offset of layer l's weights inside the flat parameter vector.
    [[nodiscard]] std::size_t weight_offset(int layer) const { return offsets_.at(static_cast<std::size_t>(layer)); }
    [[nodiscard]] std::size_t bias_offset(int layer) const;

    Activation activation = Activation::tanh;
    BoundaryMode boundary_mode = BoundaryMode::none;
    double shift = 0.0;

private:
    std::vector<int> sizes_;
    std::vector<std::size_t> offsets_;
    std::vector<double> params_;
};

/// Raw network output: no boundary operator, no shift.
[[nodiscard]] double forward(const DenseNetwork& net, std::span<const double> x);

/// Network output plus `shift`, with exact input derivatives up to `order`
/// (orders 0-4 in 1D, 0-2 for d = 2, 3). The boundary operator is applied by
/// pinn::NetworkFunction, which knows the problem's distance factor and data.
[[nodiscard]] Jet evaluate_jet(const DenseNetwork& net, std::span<const double> x, int order);

/// Work arrays of the reverse sweep, reusable across calls.
struct BackwardScratch {
    std::vector<Eigen::ArrayXXd> zbar, abar, next;
    RowMatrix gw;
    Eigen::VectorXd gb;
};

/// Network evaluated on many points at once, one Eigen array (1 x P or n_l x P)
/// per jet slot, with every intermediate kept for the reverse sweep.
class BatchTape {
public:
    [[nodiscard]] const Layout& layout() const noexcept { return layout_; }
    [[nodiscard]] Eigen::Index points() const noexcept { return points_; }
    /// Raw output slots (shift not included), each 1 x P.
    [[nodiscard]] const std::vector<Eigen::ArrayXXd>& output() const noexcept { return out_; }
    /// Output jet at point p, shift included.
    [[nodiscard]] Jet output_jet(Eigen::Index p) const;

private:
    friend void forward_batch(const DenseNetwork&, std::span<const Point>, const Layout&, BatchTape&);
    friend void backward_batch(const DenseNetwork&, const BatchTape&, std::span<const Eigen::ArrayXXd>,
                               std::span<double>, BackwardScratch&);

    Layout layout_{};
    Eigen::Index points_ = 0;
    double shift_ = 0.0;
    // Per layer: activations a[0] = input, a[l] = hidden layer l output.
    std::vector<std::vector<Eigen::ArrayXXd>> act_;
    // Per hidden layer: pre-activation slots and tanh derivatives at z0.
    std::vector<std::vector<Eigen::ArrayXXd>> pre_;
    std::vector<std::vector<Eigen::ArrayXXd>> dtanh_;
    std::vector<Eigen::ArrayXXd> out_;
};

[[nodiscard]] BatchTape forward_batch(const DenseNetwork& net, std::span<const Point> points, const Layout& layout);
/// Same, reusing the storage of an existing tape.
void forward_batch(const DenseNetwork& net, std::span<const Point> points, const Layout& layout, BatchTape& tape);


/// Accumulates d(sum_p sum_s output_bar[s](p) * output[s](p)) / d(theta) into grad.
void backward_batch(const DenseNetwork& net, const BatchTape& tape, std::span<const Eigen::ArrayXXd> output_bar,
                    std::span<double> grad);
void backward_batch(const DenseNetwork& net, const BatchTape& tape, std::span<const Eigen::ArrayXXd> output_bar,
                    std::span<double> grad, BackwardScratch& scratch);

/// Per-point loss term: receives the output jet (shift included) at point p,
/// writes d(term)/d(output slots) into `output_bar`, returns the term.
using PointLoss = std::function<double(std::size_t p, const Jet& output, Jet& output_bar)>;

/// Sum over points of `loss`, with its exact gradient with respect to every
/// network parameter written to `grad` (overwritten, flat parameter order).
/// Input-derivative slots used by the loss are differentiated through as well.
double parameter_gradient(const DenseNetwork& net, std::span<const Point> points, const Layout& layout,
                          const PointLoss& loss, std::span<double> grad);

} // namespace pinnfem::ad
