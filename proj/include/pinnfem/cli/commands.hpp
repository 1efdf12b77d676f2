#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "pinnfem/cli/config.hpp"

namespace pinnfem::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_divergence = 3, exit_solver = 4, exit_io = 5 };

/// Command-line overrides applied on top of the config.
struct CommandOptions {
    std::optional<std::uint64_t> seed;
    bool train_first = false;
    std::optional<std::filesystem::path> out_dir;
};

/// Trains one network per seed. Writes <problem>_seed<s>.ckpt and
/// <problem>_seed<s>_log.csv, prints final J_r, J_b and the PINN L2 error.
void cmd_train(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// Report CSV + metadata per (space, degree, seed), the table-shaped CSV per
/// seed, a min/median summary over seeds, and summary lines on `out`.
/// Returns false when any study row failed.
[[nodiscard]] bool cmd_study(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// Single mesh size: solves every requested space and writes
/// <problem>_<space>_<element>_field.csv (and the mesh when asked).
void cmd_solve(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// Exit code for an exception escaping a command.
[[nodiscard]] int exit_code_for(const std::exception& e) noexcept;

/// "p1", "p2", "p3" or "hermite".
[[nodiscard]] std::string element_tag(fem::Family family, int degree);

} // namespace pinnfem::cli
