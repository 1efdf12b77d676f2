#include "pinnfem/autodiff/jet.hpp"

#include <cmath>
#include <string>

#include "pinnfem/autodiff/jet_kernels.hpp"

namespace pinnfem::ad {

Layout Layout::for_order(int dim, int order)
{
    if (dim < 1 || dim > 3) throw InputError("jet dimension must be 1, 2 or 3, got " + std::to_string(dim));
    if (order < 0) throw InputError("negative derivative order");
    if (dim == 1) {
        if (order > 4) throw CapabilityError("1D jets support derivative orders up to 4");
        return {JetKind::taylor, 1, order};
    }
    switch (order) {
    case 0: return {JetKind::taylor, dim, 0};
    case 1: return {JetKind::gradient, dim, 1};
    case 2: return {JetKind::grad_hess, dim, 2};
    default:
        throw CapabilityError("jets in dimension " + std::to_string(dim) + " support orders up to 2, requested "
                              + std::to_string(order));
    }
}

Layout Layout::laplacian(int dim)
{
    if (dim == 1) return {JetKind::taylor, 1, 2};
    if (dim < 1 || dim > 3) throw InputError("jet dimension must be 1, 2 or 3");
    return {JetKind::grad_lap, dim, 2};
}

Jet::Jet(Layout layout, double value) : layout_(layout)
{
    s_[0] = value;
}

Jet Jet::variable(Layout layout, int axis, double value)
{
    Jet j(layout, value);
    if (layout.order >= 1) {
        if (layout.kind == JetKind::taylor) {
            if (axis == 0) j.s_[1] = 1.0;
        } else {
            j.s_[static_cast<std::size_t>(1 + axis)] = 1.0;
        }
    }
    return j;
}

double Jet::derivative(int k) const
{
    if (layout_.kind != JetKind::taylor || k > layout_.order || k < 0) {
        throw CapabilityError("derivative(" + std::to_string(k) + ") not carried by this jet");
    }
    return s_[static_cast<std::size_t>(k)];
}

double Jet::grad(int axis) const
{
    if (layout_.order < 1 || axis < 0 || axis >= layout_.dim) throw CapabilityError("gradient not carried by this jet");
    if (layout_.kind == JetKind::taylor) return s_[1];
    return s_[static_cast<std::size_t>(1 + axis)];
}

double Jet::hessian(int i, int j) const
{
    if (i < 0 || j < 0 || i >= layout_.dim || j >= layout_.dim) throw InputError("hessian index out of range");
    if (layout_.kind == JetKind::taylor && layout_.order >= 2) return s_[2];
    if (layout_.kind == JetKind::grad_hess) return s_[static_cast<std::size_t>(layout_.hessian_slot(i, j))];
    throw CapabilityError("hessian not carried by this jet");
}

double Jet::laplacian() const
{
    switch (layout_.kind) {
    case JetKind::taylor:
        if (layout_.order >= 2) return s_[2];
        break;
    case JetKind::grad_lap: return s_[static_cast<std::size_t>(layout_.dim + 1)];
    case JetKind::grad_hess: {
        double acc = 0.0;
        for (int i = 0; i < layout_.dim; ++i) acc += s_[static_cast<std::size_t>(layout_.hessian_slot(i, i))];
        return acc;
    }
    case JetKind::gradient: break;
    }
    throw CapabilityError("laplacian not carried by this jet");
}

namespace {

void require_same(const Layout& a, const Layout& b)
{
    if (!(a == b)) throw InputError("jet layouts differ");
}

} // namespace

Jet& Jet::operator+=(const Jet& o)
{
    require_same(layout_, o.layout_);
    for (int k = 0; k < slots(); ++k) s_[static_cast<std::size_t>(k)] += o.s_[static_cast<std::size_t>(k)];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    require_same(layout_, o.layout_);
    for (int k = 0; k < slots(); ++k) s_[static_cast<std::size_t>(k)] -= o.s_[static_cast<std::size_t>(k)];
    return *this;
}

Jet& Jet::operator*=(double s)
{
    for (int k = 0; k < slots(); ++k) s_[static_cast<std::size_t>(k)] *= s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

Jet operator*(const Jet& a, const Jet& b)
{
    require_same(a.layout(), b.layout());
    Jet out(a.layout());
    kernels::multiply<double>(a.layout(), a.data(), b.data(), out.data());
    return out;
}

Jet compose(const Jet& x, std::span<const double> f)
{
    Jet out(x.layout());
    kernels::compose<double>(x.layout(), x.data(), f, out.data());
    return out;
}

Jet sin(const Jet& x)
{
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double f[] = {s, c, -s, -c, s};
    return compose(x, f);
}

Jet cos(const Jet& x)
{
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double f[] = {c, -s, -c, s, c};
    return compose(x, f);
}

Jet exp(const Jet& x)
{
    const double e = std::exp(x.value());
    const double f[] = {e, e, e, e, e};
    return compose(x, f);
}

void tanh_derivatives(double z, std::span<double> out)
{
    // t_{k+1} = -sum_j C(k, j) t_j t_{k-j} for k >= 1, from t' = 1 - t^2.
    const auto n = static_cast<int>(out.size());
    out[0] = std::tanh(z);
    if (n > 1) out[1] = 1.0 - out[0] * out[0];
    for (int k = 1; k + 1 < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) acc += kernels::binomial(k, j) * out[static_cast<std::size_t>(j)] * out[static_cast<std::size_t>(k - j)];
        out[static_cast<std::size_t>(k + 1)] = -acc;
    }
}

Jet tanh(const Jet& x)
{
    double f[5];
    tanh_derivatives(x.value(), f);
    return compose(x, f);
}

Jet inverse(const Jet& x)
{
    const double v = x.value();
    if (v == 0.0) throw EvaluationError("inverse of a jet with zero value");
    // d^k/dv^k (1/v) = (-1)^k k! v^{-(k+1)}
    double f[5];
    double p = 1.0 / v;
    double fact = 1.0;
    for (int k = 0; k < 5; ++k) {
        f[k] = ((k % 2) ? -1.0 : 1.0) * fact * p;
        p /= v;
        fact *= (k + 1);
    }
    return compose(x, f);
}

Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
Jet operator/(double s, const Jet& a) { return inverse(a) * s; }

} // namespace pinnfem::ad
