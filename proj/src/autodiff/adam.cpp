#include "pinnfem/autodiff/adam.hpp"

#include <cmath>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::ad {

AdamState::AdamState(std::size_t parameter_count, double lr)
    : first_moment(parameter_count, 0.0), second_moment(parameter_count, 0.0), learning_rate(lr)
{
    if (!(lr > 0.0)) throw InputError("learning rate must be positive");
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads)
{
    const std::size_t n = params.size();
    if (grads.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
        throw InputError("adam_step: parameter, gradient and moment lengths differ");
    }
    ++state.step_count;
    const auto t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        params[i] -= state.learning_rate * (m / c1) / (std::sqrt(v / c2) + state.epsilon);
    }
}

} // namespace pinnfem::ad
