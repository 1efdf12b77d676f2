#pragma once

#include <filesystem>
#include <iosfwd>

#include "pinnfem/autodiff/network.hpp"

namespace pinnfem::pinn {

/// Text format, one item per line:
///
///     PINNFEM-NET v1
///     dim <d>
///     layers n0 n1 ... nk
///     activation tanh
///     boundary <none|dirichlet_product>
///     shift <decimal>
///     W1            followed by n1 rows of n0 floats
///     b1            followed by one row of n1 floats
///     ...
///
/// Floats use the shortest decimal that reads back to the same double.
void write_checkpoint(const ad::DenseNetwork& net, std::ostream& out);
/// Throws FormatError naming the offending line.
[[nodiscard]] ad::DenseNetwork read_checkpoint(std::istream& in);

/// File versions; IoError when the file cannot be opened or written.
void save_checkpoint(const ad::DenseNetwork& net, const std::filesystem::path& path);
[[nodiscard]] ad::DenseNetwork load_checkpoint(const std::filesystem::path& path);

} // namespace pinnfem::pinn
