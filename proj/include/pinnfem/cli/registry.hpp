#pragma once

#include <string>
#include <vector>

#include "pinnfem/common/problem.hpp"

namespace pinnfem::cli {

/// Ids of the built-in manufactured problems, in registry order.
[[nodiscard]] const std::vector<std::string>& problem_ids();

/// Looks up a built-in problem; throws ConfigError naming an unknown id.
///
/// p1d_poisson      u = (1-x) sin(5x) + 2
/// p1d_biharmonic   u = 3x^2 + (x+1) sin(4x) + 1, clamped
/// p2d_c0/cm5/eig   u = sin(pi x) sin(pi y) + 2 with c = 0, -5, -2 pi^2 + 0.01
/// p3d_poisson      u = e^(x+y+z) sin(pi x) sin(pi y) sin(pi z) + 1
[[nodiscard]] ProblemSpec make_problem(const std::string& id);

/// Largest |f - L u| over `samples` points of a deterministic interior grid,
/// with L u from jets of exact_u.
[[nodiscard]] double source_mismatch(const ProblemSpec& problem, int samples = 1000);

/// Checks every registry entry; throws Error when a source disagrees with its
/// exact solution beyond 1e-8.
void verify_registry();

} // namespace pinnfem::cli
