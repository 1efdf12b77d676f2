#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pinnfem/autodiff/network.hpp"
#include "pinnfem/common/problem.hpp"

namespace pinnfem::pinn {

/// penalty: phase losses get + lambda * J_b. operator: u_bar = D u + G, no J_b term.
enum class BoundaryHandling { penalty, boundary_operator };

struct TrainingConfig {
    std::vector<int> layer_sizes{1, 20, 1};
    double learning_rate = 2e-3;
    long epochs_ritz = 0;
    long epochs_residual = 10000;
    int collocation_count = 1000;
    BoundaryHandling boundary_mode = BoundaryHandling::boundary_operator;
    double penalty_lambda = 1000.0;
    std::uint64_t seed = 0;
    /// Full loss set (J_r, J_b, J_R^-) is evaluated every log_every epochs.
    long log_every = 100;
};

/// One row per epoch, losses at the parameters before that epoch's update.
/// Entries not evaluated in a row are NaN.
struct LogRow {
    long epoch = 0;
    /// 1 = Ritz phase, 2 = residual phase.
    int phase = 2;
    /// The minimised objective.
    double objective = 0.0;
    double residual = 0.0;
    double boundary = 0.0;
    double shifted_ritz = 0.0;
};

struct TrainingResult {
    ad::DenseNetwork net;
    std::vector<LogRow> log;
    /// First epoch of phase 2 (= epochs_ritz).
    long switch_epoch = 0;
    /// J_r of the network entering phase 2.
    double residual_at_switch = 0.0;
    /// Losses of the returned network.
    double final_residual = 0.0;
    double final_boundary = 0.0;
    /// NaN when the problem has no exact solution or is biharmonic.
    double final_shifted_ritz = 0.0;
};

/// Throws InputError for an invalid config (including Ritz epochs on a
/// biharmonic problem) and TrainingDivergence on a non-finite loss. The
/// returned network has shift 0 and boundary_mode dirichlet_product in
/// operator mode.
[[nodiscard]] TrainingResult train(const ProblemSpec& problem, const TrainingConfig& config);

/// CSV `epoch,phase,objective,J_r,J_b,J_R_shifted`.
void write_log(const std::vector<LogRow>& log, std::ostream& out);

} // namespace pinnfem::pinn
