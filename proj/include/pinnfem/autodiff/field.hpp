#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <type_traits>
#include <vector>

#include "pinnfem/autodiff/jet.hpp"
#include "pinnfem/common/point.hpp"

namespace pinnfem::ad {

/// A closed-form function of x that can be evaluated plainly or on jets.
struct ScalarField {
    std::function<double(const Point&)> value;
    std::function<Jet(const Point&, const Layout&)> jet;

    double operator()(const Point& x) const { return value(x); }
    explicit operator bool() const noexcept { return static_cast<bool>(value); }
};

/// Builds a ScalarField from a generic callable f(const std::array<T, 3>&) -> T
/// that works for T = double and T = Jet. Coordinates beyond `dim` are passed
/// as constants.
template <class F>
ScalarField make_field(int dim, F f)
{
    ScalarField s;
    s.value = [f](const Point& x) { return static_cast<double>(f(x)); };
    s.jet = [f, dim](const Point& x, const Layout& layout) {
        std::array<Jet, 3> v;
        for (int a = 0; a < 3; ++a) {
            const auto i = static_cast<std::size_t>(a);
            v[i] = a < dim ? Jet::variable(layout, a, x[i]) : Jet(layout, x[i]);
        }
        auto r = f(v);
        if constexpr (std::is_arithmetic_v<decltype(r)>) {
            return Jet(layout, static_cast<double>(r));
        } else {
            return Jet(r);
        }
    };
    return s;
}

[[nodiscard]] ScalarField constant_field(double c);

/// Batched jet evaluation of some function on [0,1]^d: networks, closed forms.
class JetField {
public:
    virtual ~JetField() = default;
    [[nodiscard]] virtual int dim() const = 0;
    /// Jets (value and derivatives per `layout`) at every point.
    [[nodiscard]] virtual std::vector<Jet> evaluate(std::span<const Point> points, const Layout& layout) const = 0;

    [[nodiscard]] Jet evaluate(const Point& x, const Layout& layout) const
    {
        return evaluate(std::span<const Point>(&x, 1), layout).front();
    }
    [[nodiscard]] double value(const Point& x) const;
};

/// JetField backed by a closed form.
class ClosedFormField final : public JetField {
public:
    ClosedFormField(int dim, ScalarField f) : dim_(dim), f_(std::move(f)) {}
    [[nodiscard]] int dim() const override { return dim_; }
    using JetField::evaluate;
    [[nodiscard]] std::vector<Jet> evaluate(std::span<const Point> points, const Layout& layout) const override;

private:
    int dim_;
    ScalarField f_;
};

/// base + c.
class OffsetField final : public JetField {
public:
    OffsetField(std::shared_ptr<const JetField> base, double c) : base_(std::move(base)), c_(c) {}
    [[nodiscard]] int dim() const override { return base_->dim(); }
    using JetField::evaluate;
    [[nodiscard]] std::vector<Jet> evaluate(std::span<const Point> points, const Layout& layout) const override;

private:
    std::shared_ptr<const JetField> base_;
    double c_;
};

} // namespace pinnfem::ad
