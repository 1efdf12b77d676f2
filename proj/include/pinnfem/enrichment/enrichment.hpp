#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pinnfem/autodiff/field.hpp"
#include "pinnfem/autodiff/network.hpp"
#include "pinnfem/common/problem.hpp"
#include "pinnfem/fem/assembly.hpp"
#include "pinnfem/fem/space.hpp"

namespace pinnfem::enrichment {

enum class Mode { additive, multiplicative };

struct EnrichmentPlan {
    Mode mode = Mode::additive;
    /// u_bar without the shift.
    std::shared_ptr<const ad::JetField> field;
    /// Set when the plan was built from a network; its shift field holds C.
    std::optional<ad::DenseNetwork> net;
    double shift = 0.0;
    double shift_margin = 0.5;
    int sample_resolution = 64;
};

struct EnrichmentOptions {
    double shift_margin = 0.5;
    /// Samples per axis, endpoints included, at most 1e5 in total.
    int sample_resolution = 64;
    /// Fixed C for the multiplicative space; computed from the margin otherwise.
    std::optional<double> shift;
    fem::AssemblyOptions assembly;
    fem::SolverOptions solver;
};

struct EnrichedSolution {
    /// Enriched space; its field is u_bar (additive) or u_bar + C (multiplicative).
    fem::FunctionSpace space;
    /// DoFs of the auxiliary unknown w_h.
    Eigen::VectorXd aux_dofs;
    EnrichmentPlan plan;
    fem::SolveResult solve;
};

/// Uniform sample grid of [0,1]^dim with endpoints: min(resolution, floor(1e5^(1/dim)))
/// points per axis.
[[nodiscard]] std::vector<Point> sample_grid(int dim, int resolution);

/// C = max(0, margin - min u_bar) over the sample grid. EvaluationError on
/// non-finite samples.
[[nodiscard]] double compute_shift(const ad::JetField& u, double margin = 0.5, int resolution = 64);
[[nodiscard]] double compute_shift(const ad::DenseNetwork& net, const ProblemSpec& problem, double margin = 0.5,
                                   int resolution = 64);

/// u_h = w_h + u_bar, w_h from B[w, v] = F(v) - B[u_bar, v] over V_h.
[[nodiscard]] EnrichedSolution solve_additive(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                              std::shared_ptr<const ad::JetField> u,
                                              const EnrichmentOptions& options = {});
[[nodiscard]] EnrichedSolution solve_additive(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                              const ad::DenseNetwork& net, const EnrichmentOptions& options = {});

/// u_h = w_h (u_bar + C) - C, Galerkin in V_h * (u_bar + C) on the problem
/// shifted by C. ShiftError when the sampled min of u_bar + C is below the margin.
[[nodiscard]] EnrichedSolution solve_multiplicative(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                                    std::shared_ptr<const ad::JetField> u,
                                                    const EnrichmentOptions& options = {});
[[nodiscard]] EnrichedSolution solve_multiplicative(const ProblemSpec& problem, const fem::FunctionSpace& base,
                                                    const ad::DenseNetwork& net,
                                                    const EnrichmentOptions& options = {});

/// u_h at x with derivatives up to `order`, layout Layout::for_order(dim, order).
[[nodiscard]] ad::Jet evaluate_enriched(const EnrichedSolution& sol, const Point& x, int order = 0);

struct ZeroPointReport {
    double min_abs = 0.0;
    /// Sample attaining min_abs.
    Point argmin{};
    double value_at_argmin = 0.0;
    /// min_abs < margin: the unshifted multiplicative space would be obstructed.
    bool flagged = false;
    /// |u(argmin)|, a lower bound on the L-infinity error of every w * u_bar
    /// with u_bar(argmin) = 0. Needs exact_u.
    std::optional<double> error_bound;
    /// Midpoints of sample-grid edges across which u_bar changes sign, plus exact zeros.
    std::vector<Point> zero_points;
};

[[nodiscard]] ZeroPointReport zero_point_certificate(const ad::JetField& u, const ProblemSpec& problem,
                                                     int resolution = 64, double margin = 0.5);
[[nodiscard]] ZeroPointReport zero_point_certificate(const ad::DenseNetwork& net, const ProblemSpec& problem,
                                                     int resolution = 64, double margin = 0.5);

} // namespace pinnfem::enrichment
