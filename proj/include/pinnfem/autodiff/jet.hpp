#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::ad {

/// How the derivative slots of a jet are laid out.
///
/// - taylor: 1D derivatives u, u', ..., u^(order) (order 0 is allowed in any dimension).
/// - gradient: u, du/dx_0 .. du/dx_{d-1}.
/// - grad_lap: gradient slots followed by the Laplacian.
/// - grad_hess: gradient slots followed by the upper triangle of the Hessian, row-major.
enum class JetKind { taylor, gradient, grad_lap, grad_hess };

struct Layout {
    JetKind kind = JetKind::taylor;
    int dim = 1;
    int order = 0;

    /// Value + derivatives of every order up to `order` (gradient/Hessian in d > 1).
    static Layout for_order(int dim, int order);
    /// The cheapest layout that carries the gradient and the Laplacian.
    static Layout laplacian(int dim);

    [[nodiscard]] constexpr int slots() const noexcept
    {
        switch (kind) {
        case JetKind::taylor: return order + 1;
        case JetKind::gradient: return 1 + dim;
        case JetKind::grad_lap: return 2 + dim;
        case JetKind::grad_hess: return 1 + dim + dim * (dim + 1) / 2;
        }
        return 0;
    }

    /// Number of derivatives of a unary function needed to push a jet through it.
    [[nodiscard]] constexpr int compose_terms() const noexcept
    {
        switch (kind) {
        case JetKind::taylor: return order + 1;
        case JetKind::gradient: return 2;
        case JetKind::grad_lap:
        case JetKind::grad_hess: return 3;
        }
        return 0;
    }

    [[nodiscard]] constexpr int hessian_slot(int i, int j) const noexcept
    {
        if (i > j) {
            const int t = i;
            i = j;
            j = t;
        }
        return 1 + dim + i * dim - i * (i - 1) / 2 + (j - i);
    }

    friend constexpr bool operator==(const Layout&, const Layout&) = default;
};

inline constexpr int max_slots = 10;
inline constexpr int max_compose_terms = 6;

/// A value together with exact derivatives with respect to the inputs.
class Jet {
public:
    Jet() = default;
    explicit Jet(Layout layout, double value = 0.0);

    /// Coordinate function x_i evaluated at `value`.
    static Jet variable(Layout layout, int axis, double value);

    [[nodiscard]] const Layout& layout() const noexcept { return layout_; }
    [[nodiscard]] int slots() const noexcept { return layout_.slots(); }

    [[nodiscard]] double value() const noexcept { return s_[0]; }
    [[nodiscard]] double& operator[](int slot) noexcept { return s_[static_cast<std::size_t>(slot)]; }
    [[nodiscard]] double operator[](int slot) const noexcept { return s_[static_cast<std::size_t>(slot)]; }
    [[nodiscard]] std::span<double> data() noexcept { return {s_.data(), static_cast<std::size_t>(slots())}; }
    [[nodiscard]] std::span<const double> data() const noexcept
    {
        return {s_.data(), static_cast<std::size_t>(slots())};
    }

    /// k-th derivative of a 1D taylor jet.
    [[nodiscard]] double derivative(int k) const;
    [[nodiscard]] double grad(int axis) const;
    [[nodiscard]] double hessian(int i, int j) const;
    [[nodiscard]] double laplacian() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);
    Jet& operator+=(double s)
    {
        s_[0] += s;
        return *this;
    }
    Jet& operator-=(double s)
    {
        s_[0] -= s;
        return *this;
    }

private:
    Layout layout_{};
    std::array<double, max_slots> s_{};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(Jet a);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet tanh(const Jet& x);
Jet inverse(const Jet& x);

/// Applies the unary function whose derivatives at x.value() are f[0..]; f needs
/// x.layout().compose_terms() entries.
Jet compose(const Jet& x, std::span<const double> f);

/// Derivatives tanh^(k)(z), k = 0..count-1.
void tanh_derivatives(double z, std::span<double> out);

} // namespace pinnfem::ad
