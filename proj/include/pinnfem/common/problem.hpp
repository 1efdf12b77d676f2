#pragma once

#include <optional>
#include <string>

#include "pinnfem/autodiff/field.hpp"

namespace pinnfem {

enum class Operator { second_order_elliptic, biharmonic_1d };

/// Boundary value problem on the unit box [0,1]^dim.
///
/// second_order_elliptic: -div(a grad u) + c u = f, u = g on the boundary.
/// biharmonic_1d: u'''' = f, with u and u' clamped to g and g' at both ends.
struct ProblemSpec {
    std::string id;
    int dim = 1;
    Operator op = Operator::second_order_elliptic;
    ad::ScalarField coeff_a;
    ad::ScalarField coeff_c;
    ad::ScalarField source_f;
    ad::ScalarField boundary_g;
    std::optional<ad::ScalarField> exact_u;
    /// True when coeff_a is the constant 1 (lets residuals use the Laplacian layout).
    bool unit_diffusion = false;
};

/// The problem satisfied by u + C: source f + C c, boundary data g + C.
[[nodiscard]] ProblemSpec shifted(const ProblemSpec& p, double C);

/// Strong-form operator applied to a jet of u carrying enough derivatives:
/// -div(a grad u) + c u, or u''''. `x` is the point the jet was taken at.
[[nodiscard]] double apply_operator(const ProblemSpec& p, const Point& x, const ad::Jet& u);

/// Jet order the strong form needs (2, or 4 for biharmonic_1d).
[[nodiscard]] int operator_order(const ProblemSpec& p) noexcept;

} // namespace pinnfem
