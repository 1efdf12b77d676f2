#include "pinnfem/fem/assembly.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "pinnfem/common/errors.hpp"
#include "pinnfem/common/parallel.hpp"
#include "pinnfem/fem/cell_values.hpp"

namespace pinnfem::fem {

namespace {

constexpr int cells_per_chunk = 1024;

struct ChunkOutput {
    std::vector<Eigen::Triplet<double>> entries;
    std::vector<std::pair<int, double>> loads;
};

void assemble_cell(const FunctionSpace& space, const ProblemSpec& problem, const CellValues& cv, ChunkOutput& out)
{
    const int d = space.dim();
    const auto nb = cv.value.rows();
    const int nq = cv.quadrature_points();
    const bool biharmonic = problem.op == Operator::biharmonic_1d;
    const bool additive = space.enrichment == Enrichment::additive;

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd wa(nq), wc(nq), s0(nq);
    std::array<Eigen::VectorXd, 3> s1;
    Eigen::VectorXd s2;
    if (additive) {
        for (int a = 0; a < d; ++a) s1[static_cast<std::size_t>(a)] = Eigen::VectorXd::Zero(nq);
        s2 = Eigen::VectorXd::Zero(nq);
    }
    for (int q = 0; q < nq; ++q) {
        const Point& x = cv.points[static_cast<std::size_t>(q)];
        const double w = cv.weights(q);
        const double f = problem.source_f.value(x);
        if (biharmonic) {
            wa(q) = w;
            wc(q) = 0.0;
        } else {
            wa(q) = w * problem.coeff_a.value(x);
            wc(q) = w * problem.coeff_c.value(x);
        }
        s0(q) = w * f;
        if (additive) {
            // F(v) - B[u_theta, v]
            const ad::Jet& u = cv.field[static_cast<std::size_t>(q)];
            if (biharmonic) {
                s2(q) = -w * u[2];
            } else {
                s0(q) -= wc(q) * u[0];
                for (int a = 0; a < d; ++a) s1[static_cast<std::size_t>(a)](q) = -wa(q) * u[1 + a];
            }
        }
    }
    if (biharmonic) {
        K.noalias() = cv.second * wa.asDiagonal() * cv.second.transpose();
    } else {
        for (int a = 0; a < d; ++a) {
            const auto& G = cv.grad[static_cast<std::size_t>(a)];
            K.noalias() += G * wa.asDiagonal() * G.transpose();
        }
        K.noalias() += cv.value * wc.asDiagonal() * cv.value.transpose();
    }
    F.noalias() = cv.value * s0;
    if (additive) {
        if (biharmonic) {
            F.noalias() += cv.second * s2;
        } else {
            for (int a = 0; a < d; ++a) F.noalias() += cv.grad[static_cast<std::size_t>(a)] * s1[static_cast<std::size_t>(a)];
        }
    }
    const auto dofs = space.cell_dofs(cv.cell);
    for (Eigen::Index i = 0; i < nb; ++i) {
        const int gi = dofs[static_cast<std::size_t>(i)];
        out.loads.emplace_back(gi, F(i));
        for (Eigen::Index j = 0; j < nb; ++j) out.entries.emplace_back(gi, dofs[static_cast<std::size_t>(j)], K(i, j));
    }
}

std::map<int, double> dirichlet_trace(const FunctionSpace& space, const ProblemSpec& problem)
{
    std::map<int, double> out;
    const auto& bd = space.boundary_dofs;
    std::vector<Point> pts;
    pts.reserve(bd.size());
    for (int i : bd) pts.push_back(space.dof_points[static_cast<std::size_t>(i)]);
    const ad::Layout layout = ad::Layout::for_order(space.dim(), 1);
    std::vector<ad::Jet> phi;
    if (space.enrichment != Enrichment::classical) phi = space.field->evaluate(pts, layout);
    for (std::size_t k = 0; k < bd.size(); ++k) {
        const int i = bd[k];
        const bool slope = space.dof_kinds[static_cast<std::size_t>(i)] == DofKind::vertex_derivative;
        const ad::Jet g = problem.boundary_g.jet(pts[k], layout);
        double v = 0.0;
        switch (space.enrichment) {
        case Enrichment::classical: v = slope ? g[1] : g[0]; break;
        case Enrichment::additive: v = slope ? g[1] - phi[k][1] : g[0] - phi[k][0]; break;
        case Enrichment::multiplicative: {
            const ad::Jet& p = phi[k];
            v = slope ? (g[1] * p[0] - g[0] * p[1]) / (p[0] * p[0]) : g[0] / p[0];
            break;
        }
        }
        if (!std::isfinite(v)) throw EvaluationError("Dirichlet trace is not finite");
        out.emplace(i, v);
    }
    return out;
}

} // namespace

AssembledSystem assemble(const FunctionSpace& space, const ProblemSpec& problem, const AssemblyOptions& options)
{
    if (problem.dim != space.dim()) throw InputError("problem dimension does not match the space");
    const bool biharmonic = problem.op == Operator::biharmonic_1d;
    if (biharmonic != (space.element.family() == Family::hermite)) {
        throw CapabilityError("the biharmonic problem is discretized with Hermite elements, elliptic ones with Lagrange");
    }
    const int degree = options.quadrature_degree > 0 ? options.quadrature_degree : assembly_degree(space);
    const CellIntegrator integrator(space, degree, biharmonic ? 2 : 1);

    const int nc = space.mesh->cell_count();
    const std::size_t chunks = (static_cast<std::size_t>(nc) + cells_per_chunk - 1) / cells_per_chunk;
    std::vector<ChunkOutput> parts(chunks);
    for_chunks(static_cast<std::size_t>(nc), chunks, [&](std::size_t chunk, std::size_t b, std::size_t e) {
        ChunkOutput& out = parts[chunk];
        integrator.visit(static_cast<int>(b), static_cast<int>(e),
                         [&](const CellValues& cv) { assemble_cell(space, problem, cv, out); });
    });

    AssembledSystem sys;
    sys.rhs = Eigen::VectorXd::Zero(space.n_dofs);
    std::size_t total = 0;
    for (const auto& p : parts) total += p.entries.size();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(total);
    for (auto& p : parts) {
        entries.insert(entries.end(), p.entries.begin(), p.entries.end());
        for (const auto& [i, v] : p.loads) sys.rhs(i) += v;
        p = ChunkOutput{};
    }
    sys.matrix.resize(space.n_dofs, space.n_dofs);
    sys.matrix.setFromTriplets(entries.begin(), entries.end());
    sys.matrix.makeCompressed();
    sys.dirichlet = dirichlet_trace(space, problem);
    return sys;
}

void apply_dirichlet(AssembledSystem& system)
{
    SparseMatrix& A = system.matrix;
    const auto n = A.rows();
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd lift = Eigen::VectorXd::Zero(n);
    for (const auto& [i, v] : system.dirichlet) {
        fixed[static_cast<std::size_t>(i)] = 1;
        lift(i) = v;
    }
    for (Eigen::Index j = 0; j < A.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(A, j); it; ++it) {
            const auto i = it.row();
            const bool ri = fixed[static_cast<std::size_t>(i)] != 0;
            const bool cj = fixed[static_cast<std::size_t>(j)] != 0;
            if (cj && !ri) system.rhs(i) -= it.value() * lift(j);
            if (ri || cj) it.valueRef() = 0.0;
        }
    }
    A.prune(0.0);
    std::vector<Eigen::Triplet<double>> diag;
    for (const auto& [i, v] : system.dirichlet) {
        diag.emplace_back(i, i, 1.0);
        system.rhs(i) = v;
    }
    SparseMatrix I(n, n);
    I.setFromTriplets(diag.begin(), diag.end());
    A += I;
    A.makeCompressed();
    system.constrained = true;
}

namespace {

// b - A x accumulated in long double so refinement is not limited by the
// rounding of the residual itself.
Eigen::VectorXd residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b)
{
    std::vector<long double> r(b.data(), b.data() + b.size());
    for (Eigen::Index j = 0; j < A.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(A, j); it; ++it) {
            r[static_cast<std::size_t>(it.row())] -= static_cast<long double>(it.value()) * x[j];
        }
    }
    Eigen::VectorXd out(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) out[i] = static_cast<double>(r[static_cast<std::size_t>(i)]);
    return out;
}

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b)
{
    const double nb = b.norm();
    const double nr = residual(A, x, b).norm();
    return nb > 0.0 ? nr / nb : nr;
}

// Largest eigenvalue by power iteration.
double largest_eigenvalue(const SparseMatrix& A)
{
    Eigen::VectorXd v = Eigen::VectorXd::Ones(A.rows()).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Eigen::VectorXd w = A * v;
        const double next = v.dot(w);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        if (std::abs(next - lambda) <= 1e-13 * std::abs(next)) return next;
        lambda = next;
    }
    return lambda;
}

} // namespace

SolveResult solve(const AssembledSystem& system, const SolverOptions& options)
{
    const SparseMatrix& A = system.matrix;
    const Eigen::VectorXd& b = system.rhs;
    const auto n = A.rows();
    SolveResult res;
    res.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    const bool direct = options.kind == SolverKind::direct
                        || (options.kind == SolverKind::automatic && n <= options.direct_limit);
    if (direct) {
        res.method = "sparse LDLT";
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
        if (ldlt.info() != Eigen::Success) throw SolverError("sparse factorization failed", 1.0);
        res.solution = ldlt.solve(b);
        res.relative_residual = relative_residual(A, res.solution, b);
        // iterative refinement
        for (int it = 0; it < 4 && res.relative_residual > 1e-15; ++it) {
            const Eigen::VectorXd next = res.solution + ldlt.solve(residual(A, res.solution, b));
            const double r = relative_residual(A, next, b);
            if (!(r < res.relative_residual)) break;
            res.solution = next;
            res.relative_residual = r;
            ++res.iterations;
        }
        if (options.estimate_condition) {
            const double lmax = largest_eigenvalue(A);
            Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
            double mu = 0.0;
            for (int it = 0; it < 1000; ++it) {
                Eigen::VectorXd w = ldlt.solve(v);
                const double next = v.dot(w);
                v = w.normalized();
                if (std::abs(next - mu) <= 1e-13 * std::abs(next)) {
                    mu = next;
                    break;
                }
                mu = next;
            }
            res.condition_estimate = std::abs(lmax * mu);
        }
    } else {
        res.method = "diagonal-preconditioned CG";
        Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
        cg.setMaxIterations(static_cast<Eigen::Index>(50 * n));
        cg.setTolerance(0.1 * options.tolerance);
        cg.compute(A);
        res.solution = cg.solve(b);
        res.iterations = static_cast<int>(cg.iterations());
        res.relative_residual = relative_residual(A, res.solution, b);
    }
    if (!(res.relative_residual <= options.tolerance) || !res.solution.allFinite()) {
        throw SolverError(res.method + " did not reach the residual tolerance", res.relative_residual);
    }
    return res;
}

void write_matrix(const SparseMatrix& matrix, std::ostream& out)
{
    const auto old = out.precision(17);
    for (Eigen::Index j = 0; j < matrix.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(matrix, j); it; ++it) {
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
        }
    }
    out.precision(old);
}

} // namespace pinnfem::fem
