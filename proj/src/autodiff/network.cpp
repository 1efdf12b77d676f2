#include "pinnfem/autodiff/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pinnfem/autodiff/jet_kernels.hpp"
#include "pinnfem/autodiff/random.hpp"

namespace pinnfem::ad {

DenseNetwork::DenseNetwork(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes))
{
    if (sizes_.size() < 3) throw InputError("a network needs at least one hidden layer");
    if (sizes_.front() < 1 || sizes_.front() > max_dim) throw InputError("network input dimension must be 1..3");
    if (sizes_.back() != 1) throw InputError("network output dimension must be 1");
    for (int n : sizes_) {
        if (n < 1) throw InputError("layer sizes must be positive");
    }
    std::size_t total = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
        offsets_.push_back(total);
        total += static_cast<std::size_t>(sizes_[l]) * static_cast<std::size_t>(sizes_[l - 1] + 1);
    }
    params_.assign(total, 0.0);
}

DenseNetwork DenseNetwork::glorot(std::vector<int> layer_sizes, std::uint64_t seed)
{
    DenseNetwork net(std::move(layer_sizes));
    SplitMix64 rng(seed);
    for (int l = 0; l < net.depth(); ++l) {
        const int n_in = net.sizes_[static_cast<std::size_t>(l)];
        const int n_out = net.sizes_[static_cast<std::size_t>(l + 1)];
        const double r = std::sqrt(6.0 / (n_in + n_out));
        auto w = net.weights(l);
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-r, r);
        }
    }
    return net;
}

Eigen::Map<const RowMatrix> DenseNetwork::weights(int layer) const
{
    const auto l = static_cast<std::size_t>(layer);
    return {params_.data() + offsets_.at(l), sizes_[l + 1], sizes_[l]};
}

Eigen::Map<RowMatrix> DenseNetwork::weights(int layer)
{
    const auto l = static_cast<std::size_t>(layer);
    return {params_.data() + offsets_.at(l), sizes_[l + 1], sizes_[l]};
}

std::size_t DenseNetwork::bias_offset(int layer) const
{
    const auto l = static_cast<std::size_t>(layer);
    return offsets_.at(l) + static_cast<std::size_t>(sizes_[l + 1]) * static_cast<std::size_t>(sizes_[l]);
}

Eigen::Map<const Eigen::VectorXd> DenseNetwork::bias(int layer) const
{
    return {params_.data() + bias_offset(layer), sizes_[static_cast<std::size_t>(layer) + 1]};
}

Eigen::Map<Eigen::VectorXd> DenseNetwork::bias(int layer)
{
    return {params_.data() + bias_offset(layer), sizes_[static_cast<std::size_t>(layer) + 1]};
}

namespace {

// Vectorisable tanh: Cephes rational form for |z| < 0.625, 1 - 2/(e^{2z}+1) beyond.
template <class A>
Eigen::ArrayXXd tanh_array(const A& z)
{
    const Eigen::ArrayXXd x = z;
    const Eigen::ArrayXXd ax = x.abs();
    const Eigen::ArrayXXd x2 = x * x;
    const Eigen::ArrayXXd p = (-9.64399179425052238628e-1 * x2 - 9.92877231001918586564e1) * x2
                              - 1.61468768441708447952e3;
    const Eigen::ArrayXXd q = ((x2 + 1.12811678491632931402e2) * x2 + 2.23548839060100448583e3) * x2
                              + 4.84406305325125486048e3;
    const Eigen::ArrayXXd small = x + x * x2 * p / q;
    const Eigen::ArrayXXd large = 1.0 - 2.0 / ((2.0 * x).exp() + 1.0);
    return (ax < 0.625).select(small, large);
}

} // namespace

double forward(const DenseNetwork& net, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != net.input_dim()) {
        throw InputError("input has " + std::to_string(x.size()) + " coordinates, network expects "
                         + std::to_string(net.input_dim()));
    }
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    for (int l = 0; l < net.depth(); ++l) {
        Eigen::VectorXd z = net.weights(l) * a + net.bias(l);
        if (l + 1 < net.depth()) {
            a = tanh_array(z.array()).matrix();
        } else {
            a = std::move(z);
        }
    }
    return a(0);
}

namespace {

void check_layout(const DenseNetwork& net, const Layout& layout)
{
    if (layout.dim != net.input_dim()) throw InputError("jet layout dimension does not match the network input");
    if (layout.kind == JetKind::taylor && layout.order > 0 && layout.dim != 1) {
        throw CapabilityError("taylor jets beyond order 0 are one-dimensional");
    }
    if (layout.kind == JetKind::taylor && layout.order > 4) throw CapabilityError("1D jets support orders up to 4");
}

} // namespace

BatchTape forward_batch(const DenseNetwork& net, std::span<const Point> points, const Layout& layout)
{
    BatchTape tape;
    forward_batch(net, points, layout, tape);
    return tape;
}

void forward_batch(const DenseNetwork& net, std::span<const Point> points, const Layout& layout, BatchTape& tape)
{
    check_layout(net, layout);
    const auto S = static_cast<std::size_t>(layout.slots());
    const int d = net.input_dim();
    const auto P = static_cast<Eigen::Index>(points.size());
    const auto hidden = static_cast<std::size_t>(net.depth() - 1);
    const auto terms = static_cast<std::size_t>(layout.compose_terms() + 1);

    tape.layout_ = layout;
    tape.points_ = P;
    tape.shift_ = net.shift;
    tape.act_.resize(hidden + 1);
    tape.pre_.resize(hidden);
    tape.dtanh_.resize(hidden);

    // Input jets: x, unit gradients, zero higher slots.
    auto& input = tape.act_[0];
    input.resize(S);
    for (auto& a : input) a.setZero(d, P);
    for (Eigen::Index p = 0; p < P; ++p) {
        for (int i = 0; i < d; ++i) input[0](i, p) = points[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
    }
    if (layout.order >= 1) {
        if (layout.kind == JetKind::taylor) {
            input[1].setOnes();
        } else {
            for (int i = 0; i < d; ++i) input[static_cast<std::size_t>(1 + i)].row(i).setOnes();
        }
    }

    for (int l = 0; l < net.depth(); ++l) {
        const auto w = net.weights(l);
        const auto& prev = tape.act_[static_cast<std::size_t>(l)];
        const bool last = l + 1 == net.depth();
        auto& z = last ? tape.out_ : tape.pre_[static_cast<std::size_t>(l)];
        z.resize(S);
        for (std::size_t s = 0; s < S; ++s) {
            z[s].resize(w.rows(), P);
            if (l == 0 && s > 0) {
                // input derivative slots are constant: unit vectors or zero
                if (s <= static_cast<std::size_t>(d) && layout.order >= 1) {
                    const int axis = layout.kind == JetKind::taylor ? 0 : static_cast<int>(s) - 1;
                    z[s].colwise() = w.col(axis).array();
                } else {
                    z[s].setZero();
                }
                continue;
            }
            z[s].matrix().noalias() = w * prev[s].matrix();
        }
        z[0].colwise() += net.bias(l).array();
        if (last) break;

        auto& f = tape.dtanh_[static_cast<std::size_t>(l)];
        f.resize(terms);
        f[0] = tanh_array(z[0]);
        f[1] = 1.0 - f[0].square();
        for (std::size_t k = 1; k + 1 < terms; ++k) {
            auto& acc = f[k + 1];
            acc = f[0] * f[k];
            for (std::size_t j = 1; j <= k; ++j) {
                acc += kernels::binomial(static_cast<int>(k), static_cast<int>(j)) * f[j] * f[k - j];
            }
            acc = -acc;
        }
        auto& a = tape.act_[static_cast<std::size_t>(l + 1)];
        a.resize(S);
        for (auto& x : a) x.resize(w.rows(), P);
        kernels::compose<Eigen::ArrayXXd>(layout, z, f, a);
    }
}

Jet BatchTape::output_jet(Eigen::Index p) const
{
    Jet j(layout_);
    for (int s = 0; s < layout_.slots(); ++s) j[s] = out_[static_cast<std::size_t>(s)](0, p);
    j[0] += shift_;
    return j;
}

void backward_batch(const DenseNetwork& net, const BatchTape& tape, std::span<const Eigen::ArrayXXd> output_bar,
                    std::span<double> grad)
{
    BackwardScratch scratch;
    backward_batch(net, tape, output_bar, grad, scratch);
}

namespace {

void add_layer_gradient(const DenseNetwork& net, int l, const RowMatrix& gw, const Eigen::VectorXd& gb,
                        std::span<double> grad)
{
    double* w = grad.data() + net.weight_offset(l);
    for (Eigen::Index i = 0; i < gw.size(); ++i) w[i] += gw.data()[i];
    double* b = grad.data() + net.bias_offset(l);
    for (Eigen::Index i = 0; i < gb.size(); ++i) b[i] += gb[i];
}

} // namespace

void backward_batch(const DenseNetwork& net, const BatchTape& tape, std::span<const Eigen::ArrayXXd> output_bar,
                    std::span<double> grad, BackwardScratch& scratch)
{
    if (grad.size() != net.parameter_count()) throw InputError("gradient buffer has the wrong length");
    const Layout& layout = tape.layout_;
    const auto S = static_cast<std::size_t>(layout.slots());
    if (output_bar.size() != S) throw InputError("output adjoint has the wrong number of slots");
    const int d = net.input_dim();

    auto& zbar = scratch.zbar;
    auto& abar = scratch.abar;
    auto& next = scratch.next;
    zbar.resize(S);
    abar.resize(S);
    next.resize(S);
    for (std::size_t s = 0; s < S; ++s) zbar[s] = output_bar[s];
    for (int l = net.depth() - 1; l >= 0; --l) {
        const auto& prev = tape.act_[static_cast<std::size_t>(l)];
        const auto rows = net.layer_sizes()[static_cast<std::size_t>(l + 1)];
        const auto cols = net.layer_sizes()[static_cast<std::size_t>(l)];
        // accumulate in aligned storage: results of the vectorised kernels
        // must not depend on where the caller's buffer sits
        auto& gw = scratch.gw;
        auto& gb = scratch.gb;
        gb = zbar[0].rowwise().sum().matrix();
        gw.setZero(rows, cols);
        if (l == 0) {
            gw.noalias() += zbar[0].matrix() * prev[0].matrix().transpose();
            // derivative slots of the input are unit vectors (or zero)
            if (layout.order >= 1) {
                if (layout.kind == JetKind::taylor) {
                    gw.col(0) += zbar[1].rowwise().sum().matrix();
                } else {
                    for (int i = 0; i < d; ++i) {
                        gw.col(i) += zbar[static_cast<std::size_t>(1 + i)].rowwise().sum().matrix();
                    }
                }
            }
            add_layer_gradient(net, l, gw, gb, grad);
            break;
        }
        for (std::size_t s = 0; s < S; ++s) gw.noalias() += zbar[s].matrix() * prev[s].matrix().transpose();
        add_layer_gradient(net, l, gw, gb, grad);

        const auto w = net.weights(l);
        for (std::size_t s = 0; s < S; ++s) {
            abar[s].resize(w.cols(), zbar[s].cols());
            abar[s].matrix().noalias() = w.transpose() * zbar[s].matrix();
        }
        const auto h = static_cast<std::size_t>(l - 1);
        for (auto& x : next) x.resize(w.cols(), tape.points_);
        kernels::compose_adjoint<Eigen::ArrayXXd>(layout, tape.pre_[h], tape.dtanh_[h], abar, next);
        std::swap(zbar, next);
    }
}

Jet evaluate_jet(const DenseNetwork& net, std::span<const double> x, int order)
{
    if (static_cast<int>(x.size()) != net.input_dim()) throw InputError("input dimension mismatch");
    const Layout layout = Layout::for_order(net.input_dim(), order);
    Point p{};
    std::copy(x.begin(), x.end(), p.begin());
    const BatchTape tape = forward_batch(net, std::span<const Point>(&p, 1), layout);
    return tape.output_jet(0);
}

double parameter_gradient(const DenseNetwork& net, std::span<const Point> points, const Layout& layout,
                          const PointLoss& loss, std::span<double> grad)
{
    const BatchTape tape = forward_batch(net, points, layout);
    const int S = layout.slots();
    const Eigen::Index P = tape.points();
    std::vector<Eigen::ArrayXXd> bar(static_cast<std::size_t>(S), Eigen::ArrayXXd::Zero(1, P));
    double total = 0.0;
    Jet b(layout);
    for (Eigen::Index p = 0; p < P; ++p) {
        b = Jet(layout);
        total += loss(static_cast<std::size_t>(p), tape.output_jet(p), b);
        for (int s = 0; s < S; ++s) bar[static_cast<std::size_t>(s)](0, p) = b[s];
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    backward_batch(net, tape, bar, grad);
    return total;
}

} // namespace pinnfem::ad
