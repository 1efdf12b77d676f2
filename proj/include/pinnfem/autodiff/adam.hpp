#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pinnfem::ad {

struct AdamState {
    AdamState(std::size_t parameter_count, double learning_rate);

    std::uint64_t step_count = 0;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    double learning_rate;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

} // namespace pinnfem::ad
