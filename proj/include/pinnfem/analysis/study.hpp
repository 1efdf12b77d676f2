#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pinnfem/analysis/error_norms.hpp"
#include "pinnfem/autodiff/network.hpp"
#include "pinnfem/common/problem.hpp"
#include "pinnfem/enrichment/enrichment.hpp"
#include "pinnfem/fem/element.hpp"

namespace pinnfem::analysis {

enum class SpaceKind { classical, additive, multiplicative };

[[nodiscard]] std::string space_name(SpaceKind kind);

/// Training facts carried into the report metadata.
struct PinnMetadata {
    std::uint64_t seed = 0;
    long epochs_ritz = 0;
    long epochs_residual = 0;
    double final_residual = 0.0;
    double final_boundary = 0.0;
    double final_shifted_ritz = 0.0;
};

struct StudyConfig {
    fem::Family family = fem::Family::lagrange;
    int degree = 1;
    SpaceKind space = SpaceKind::classical;
    /// Intervals (1D) or cells per axis (2D / 3D, h = 1 / size), each twice the previous.
    std::vector<int> mesh_sizes;
    /// Required for enriched spaces.
    std::optional<ad::DenseNetwork> net;
    std::optional<PinnMetadata> pinn;
    enrichment::EnrichmentOptions enrichment;
    ErrorOptions errors;
    /// Quadrature subintervals per axis of the PINN L2 error; <= 0 picks 64 / 32 / 8 by dimension.
    int pinn_resolution = 0;
};

struct StudyRow {
    int size = 0;
    double h = 0.0;
    int n_dofs = 0;
    /// "ok", or the failure message of the row.
    std::string status = "ok";
    ErrorTriple errors;
    /// NaN on the first row and next to failed rows.
    double l2_order = 0.0;
    double h1_order = 0.0;
    double h1_semi_order = 0.0;
    double h2_order = 0.0;
    double relative_residual = 0.0;
    double condition_estimate = 0.0;
    double shift = 0.0;
    std::string solver;

    [[nodiscard]] bool ok() const noexcept { return status == "ok"; }
};

struct ConvergenceReport {
    std::string problem;
    int dim = 1;
    SpaceKind space = SpaceKind::classical;
    fem::Family family = fem::Family::lagrange;
    int degree = 1;
    bool with_h2 = false;
    std::vector<StudyRow> rows;
    std::optional<PinnMetadata> pinn;
    /// L2 error of u_bar against exact_u, when a network was used.
    std::optional<double> pinn_l2;
};

/// Assemble, solve and measure per mesh size. Row failures (solver, shift,
/// evaluation) are recorded in the row; InputError for an invalid config.
[[nodiscard]] ConvergenceReport convergence_study(const ProblemSpec& problem, const StudyConfig& config);

/// `n_or_h,l2,l2_order,h1,h1_order,h1_semi,h1_semi_order[,h2,h2_order]`,
/// 6 significant digits, empty cells for missing values.
void write_report_csv(const ConvergenceReport& report, std::ostream& out);
/// key=value lines.
void write_metadata(const ConvergenceReport& report, std::ostream& out);

/// CSV `x[,y[,z]],u_h,u,abs_error` on the uniform grid with `resolution`
/// points per axis, endpoints included. u and abs_error are empty without exact_u.
void field_dump(const fem::FunctionSpace& space, const Eigen::VectorXd& dofs, const ProblemSpec& problem,
                int resolution, std::ostream& out);
/// IoError when the file cannot be written.
void field_dump(const fem::FunctionSpace& space, const Eigen::VectorXd& dofs, const ProblemSpec& problem,
                int resolution, const std::filesystem::path& path);

/// Shortest %.6g rendering; empty for NaN.
[[nodiscard]] std::string format6(double v);

} // namespace pinnfem::analysis
