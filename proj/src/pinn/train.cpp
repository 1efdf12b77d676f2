#include "pinnfem/pinn/train.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "pinnfem/autodiff/adam.hpp"
#include "pinnfem/common/errors.hpp"
#include "pinnfem/pinn/loss.hpp"

namespace pinnfem::pinn {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void validate(const ProblemSpec& problem, const TrainingConfig& c)
{
    if (c.layer_sizes.size() < 2 || c.layer_sizes.front() != problem.dim || c.layer_sizes.back() != 1) {
        throw InputError("layer sizes must start with the problem dimension and end with 1");
    }
    if (c.epochs_ritz < 0 || c.epochs_residual < 0) throw InputError("epoch counts must be non-negative");
    if (c.epochs_ritz + c.epochs_residual <= 0) throw InputError("training needs at least one epoch");
    if (!(c.learning_rate > 0.0)) throw InputError("learning rate must be positive");
    if (c.log_every < 1) throw InputError("log_every must be positive");
    if (c.epochs_ritz > 0 && problem.op != Operator::second_order_elliptic) {
        throw InputError("the Ritz phase needs a second-order elliptic problem");
    }
}

} // namespace

TrainingResult train(const ProblemSpec& problem, const TrainingConfig& config)
{
    validate(problem, config);
    const LossFunctional J(problem, make_collocation(problem.dim, config.collocation_count));
    const bool penalty = config.boundary_mode == BoundaryHandling::penalty;
    const double lambda = config.penalty_lambda;
    const auto exact_ritz = J.exact_ritz();

    TrainingResult res{ad::DenseNetwork::glorot(config.layer_sizes, config.seed), {}, config.epochs_ritz, 0.0, 0.0, 0.0, nan};
    ad::DenseNetwork& net = res.net;
    net.boundary_mode = penalty ? ad::BoundaryMode::none : ad::BoundaryMode::dirichlet_product;
    net.shift = 0.0;

    const std::size_t n = net.parameter_count();
    ad::AdamState adam(n, config.learning_rate);
    std::vector<double> grad(n), extra(n);
    const long total = config.epochs_ritz + config.epochs_residual;
    res.log.reserve(static_cast<std::size_t>(total));

    const auto shifted = [&](double ritz) { return exact_ritz ? ritz - *exact_ritz : nan; };

    for (long epoch = 0; epoch < total; ++epoch) {
        LogRow row{epoch, epoch < config.epochs_ritz ? 1 : 2, 0.0, nan, nan, nan};
        const bool full = epoch % config.log_every == 0;
        if (row.phase == 1) {
            const double ritz = J.gradient(LossKind::ritz, net, grad);
            row.objective = ritz;
            row.shifted_ritz = shifted(ritz);
            if (full) row.residual = J.value(LossKind::residual, net);
        } else {
            row.residual = J.gradient(LossKind::residual, net, grad);
            row.objective = row.residual;
            if (epoch == config.epochs_ritz) res.residual_at_switch = row.residual;
            if (full && exact_ritz) row.shifted_ritz = shifted(J.value(LossKind::ritz, net));
        }
        if (penalty) {
            row.boundary = J.gradient(LossKind::boundary, net, extra);
            row.objective += lambda * row.boundary;
            for (std::size_t i = 0; i < n; ++i) grad[i] += lambda * extra[i];
        } else if (full) {
            row.boundary = J.value(LossKind::boundary, net);
        }
        if (!std::isfinite(row.objective)) {
            throw TrainingDivergence("training loss became non-finite at epoch " + std::to_string(epoch), epoch,
                                     row.residual, row.boundary, row.shifted_ritz);
        }
        res.log.push_back(row);
        ad::adam_step(adam, net.parameters(), grad);
    }
    if (config.epochs_residual == 0) res.residual_at_switch = J.value(LossKind::residual, net);

    res.final_residual = J.value(LossKind::residual, net);
    res.final_boundary = J.value(LossKind::boundary, net);
    if (exact_ritz) res.final_shifted_ritz = shifted(J.value(LossKind::ritz, net));
    if (!std::isfinite(res.final_residual)) {
        throw TrainingDivergence("final residual loss is non-finite", total, res.final_residual, res.final_boundary,
                                 res.final_shifted_ritz);
    }
    return res;
}

namespace {

void put(std::ostream& out, double v)
{
    if (std::isnan(v)) return;
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, r.ptr - buf);
}

} // namespace

void write_log(const std::vector<LogRow>& log, std::ostream& out)
{
    out << "epoch,phase,objective,J_r,J_b,J_R_shifted\n";
    for (const LogRow& r : log) {
        out << r.epoch << ',' << r.phase << ',';
        put(out, r.objective);
        out << ',';
        put(out, r.residual);
        out << ',';
        put(out, r.boundary);
        out << ',';
        put(out, r.shifted_ritz);
        out << '\n';
    }
}

} // namespace pinnfem::pinn
