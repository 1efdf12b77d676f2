#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pinnfem/common/problem.hpp"
#include "pinnfem/fem/space.hpp"

namespace pinnfem::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct AssembledSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    /// DoF -> prescribed value.
    std::map<int, double> dirichlet;
    bool constrained = false;
};

struct AssemblyOptions {
    /// Quadrature exactness degree; <= 0 picks assembly_degree(space).
    int quadrature_degree = 0;
};

/// Galerkin system A_ij = B[psi_j, psi_i], F_i = F(psi_i) over the space's
/// (possibly enriched) basis, with Dirichlet data from the space's trace:
/// g for classical, g - field for additive, g / field for multiplicative
/// (slope DoFs take the derivative of the same expression).
///
/// Multiplicative spaces expect the shifted problem, since the field already
/// carries the shift.
[[nodiscard]] AssembledSystem assemble(const FunctionSpace& space, const ProblemSpec& problem,
                                       const AssemblyOptions& options = {});

/// Symmetric elimination of the Dirichlet DoFs.
void apply_dirichlet(AssembledSystem& system);

enum class SolverKind { automatic, direct, conjugate_gradient };

struct SolverOptions {
    SolverKind kind = SolverKind::automatic;
    /// automatic switches to CG above this many DoFs.
    int direct_limit = 200000;
    double tolerance = 1e-12;
    bool estimate_condition = false;
};

struct SolveResult {
    Eigen::VectorXd solution;
    double relative_residual = 0.0;
    /// 2-norm condition estimate (power and inverse iteration); NaN when not requested.
    double condition_estimate = 0.0;
    std::string method;
    int iterations = 0;
};

/// Solves a constrained system. Throws SolverError when the relative residual
/// stays above the tolerance.
[[nodiscard]] SolveResult solve(const AssembledSystem& system, const SolverOptions& options = {});

/// Coordinate text dump: one `i j value` line per stored entry.
void write_matrix(const SparseMatrix& matrix, std::ostream& out);

} // namespace pinnfem::fem
