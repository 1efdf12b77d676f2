#pragma once

#include <array>
#include <cstddef>

namespace pinnfem {

/// Spatial point; only the first `dim` coordinates are meaningful.
using Point = std::array<double, 3>;

inline constexpr int max_dim = 3;

} // namespace pinnfem
