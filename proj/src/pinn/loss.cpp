#include "pinnfem/pinn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "pinnfem/common/errors.hpp"
#include "pinnfem/fem/quadrature.hpp"

namespace pinnfem::pinn {

namespace {

constexpr std::size_t block_points = 32;

bool biharmonic(const ProblemSpec& p)
{
    return p.op == Operator::biharmonic_1d;
}

ad::Layout residual_layout(const ProblemSpec& p)
{
    if (biharmonic(p)) return {ad::JetKind::taylor, 1, 4};
    return p.unit_diffusion ? ad::Layout::laplacian(p.dim) : ad::Layout::for_order(p.dim, 2);
}

ad::Layout boundary_layout(const ProblemSpec& p)
{
    return biharmonic(p) ? ad::Layout{ad::JetKind::taylor, 1, 1} : ad::Layout{ad::JetKind::taylor, p.dim, 0};
}

} // namespace

LossFunctional::LossFunctional(const ProblemSpec& problem, const CollocationSet& colloc)
    : problem_(problem), colloc_(colloc)
{
    if (colloc.dim != problem.dim) throw InputError("collocation dimension does not match the problem");
    residual_.layout = residual_layout(problem);
    boundary_.layout = boundary_layout(problem);
    ritz_.layout = ad::Layout::for_order(problem.dim, 1);

    const BoundaryOperator op(problem);
    const auto fill = [&](Batch& b, const std::vector<Point>& pts) {
        const int S = b.slots = b.layout.slots();
        double m[ad::max_slots][ad::max_slots];
        for (const Point& x : pts) {
            const BoundaryTerms t = op.at(x, b.layout);
            product_matrix(t.distance, m);
            for (int r = 0; r < S; ++r) {
                for (int c = 0; c < S; ++c) b.product.push_back(m[r][c]);
                b.extension.push_back(t.extension[r]);
            }
        }
    };
    fill(residual_, colloc.interior_points);
    fill(boundary_, colloc.boundary_points);
    fill(ritz_, colloc.interior_points);

    const int S = residual_.layout.slots();
    for (const Point& x : colloc.interior_points) {
        std::array<double, ad::max_slots> row{};
        for (int t = 0; t < S; ++t) {
            ad::Jet e(residual_.layout);
            e[t] = 1.0;
            row[static_cast<std::size_t>(t)] = apply_operator(problem, x, e);
        }
        op_.push_back(row);
        f_.push_back(problem.source_f.value(x));
        a_.push_back(problem.coeff_a.value(x));
        c_.push_back(problem.coeff_c.value(x));
    }
    for (const Point& x : colloc.boundary_points) g_.push_back(problem.boundary_g.jet(x, boundary_.layout));

    if (problem.exact_u && !biharmonic(problem)) {
        exact_ritz_ = value(LossKind::ritz, ad::ClosedFormField(problem.dim, *problem.exact_u));
    }
}

ad::Layout LossFunctional::layout(LossKind kind) const
{
    return batch(kind).layout;
}

const std::vector<Point>& LossFunctional::points(LossKind kind) const
{
    return kind == LossKind::boundary ? colloc_.boundary_points : colloc_.interior_points;
}

const LossFunctional::Batch& LossFunctional::batch(LossKind kind) const
{
    switch (kind) {
    case LossKind::residual: return residual_;
    case LossKind::boundary: return boundary_;
    case LossKind::ritz: break;
    }
    return ritz_;
}

void LossFunctional::check(LossKind kind) const
{
    if (kind == LossKind::ritz && biharmonic(problem_)) {
        throw CapabilityError("the Ritz functional is defined for second-order problems only");
    }
}

void LossFunctional::operated(const Batch& b, std::size_t p, const double* out, double shift, double* u) const
{
    const int S = b.slots;
    const double* m = b.product.data() + p * static_cast<std::size_t>(S * S);
    const double* g = b.extension.data() + p * static_cast<std::size_t>(S);
    for (int r = 0; r < S; ++r) {
        double acc = g[r];
        for (int c = 0; c < S; ++c) acc += m[r * S + c] * out[c];
        u[r] = acc;
    }
    u[0] += shift;
}

double LossFunctional::term(LossKind kind, std::size_t p, const double* u, double* bar) const
{
    const int d = problem_.dim;
    switch (kind) {
    case LossKind::residual: {
        const double w = colloc_.interior_weight;
        const auto& L = op_[p];
        double r = -f_[p];
        const int S = residual_.slots;
        for (int t = 0; t < S; ++t) r += L[static_cast<std::size_t>(t)] * u[t];
        if (bar) {
            for (int t = 0; t < S; ++t) bar[t] = 2.0 * w * r * L[static_cast<std::size_t>(t)];
        }
        return w * r * r;
    }
    case LossKind::boundary: {
        const double w = colloc_.boundary_weight;
        double sum = 0.0;
        const int n = biharmonic(problem_) ? 2 : 1;
        for (int s = 0; s < n; ++s) {
            const double e = u[s] - g_[p][s];
            sum += e * e;
            if (bar) bar[s] = 2.0 * w * e;
        }
        return w * sum;
    }
    case LossKind::ritz: {
        const double w = colloc_.interior_weight;
        double grad2 = 0.0;
        for (int a = 0; a < d; ++a) grad2 += u[1 + a] * u[1 + a];
        if (bar) {
            bar[0] = w * (2.0 * c_[p] * u[0] - f_[p]);
            for (int a = 0; a < d; ++a) bar[1 + a] = w * a_[p] * u[1 + a];
        }
        return w * (0.5 * a_[p] * grad2 + c_[p] * u[0] * u[0] - u[0] * f_[p]);
    }
    }
    return 0.0;
}

double LossFunctional::value(LossKind kind, const ad::JetField& u) const
{
    check(kind);
    const auto& pts = points(kind);
    const std::vector<ad::Jet> jets = u.evaluate(pts, batch(kind).layout);
    double total = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) total += term(kind, p, jets[p].data().data(), nullptr);
    return total;
}

double LossFunctional::value(LossKind kind, const ad::DenseNetwork& net) const
{
    return evaluate(kind, net, nullptr);
}

double LossFunctional::gradient(LossKind kind, const ad::DenseNetwork& net, std::span<double> grad) const
{
    return evaluate(kind, net, &grad);
}

double LossFunctional::evaluate(LossKind kind, const ad::DenseNetwork& net, std::span<double>* grad) const
{
    check(kind);
    const auto& pts = points(kind);
    const Batch& b = batch(kind);
    const int S = b.slots;
    const bool product = net.boundary_mode == ad::BoundaryMode::dirichlet_product;
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);

    ad::BatchTape tape;
    ad::BackwardScratch scratch;
    std::vector<Eigen::ArrayXXd> bar(static_cast<std::size_t>(S));
    double total = 0.0;
    double o[ad::max_slots], u[ad::max_slots], ub[ad::max_slots];
    // fixed-size point blocks keep the tape cache-resident
    for (std::size_t begin = 0; begin < pts.size(); begin += block_points) {
        const std::size_t count = std::min(block_points, pts.size() - begin);
        ad::forward_batch(net, std::span<const Point>(pts).subspan(begin, count), b.layout, tape);
        const auto& out = tape.output();
        if (grad) {
            for (auto& x : bar) x.resize(1, static_cast<Eigen::Index>(count));
        }
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t p = begin + k;
            const auto ik = static_cast<Eigen::Index>(k);
            for (int s = 0; s < S; ++s) o[s] = out[static_cast<std::size_t>(s)](0, ik);
            if (product) {
                operated(b, p, o, net.shift, u);
            } else {
                for (int s = 0; s < S; ++s) u[s] = o[s];
                u[0] += net.shift;
            }
            std::fill(ub, ub + S, 0.0);
            total += term(kind, p, u, grad ? ub : nullptr);
            if (!grad) continue;
            if (product) {
                const double* m = b.product.data() + p * static_cast<std::size_t>(S * S);
                for (int c = 0; c < S; ++c) {
                    double acc = 0.0;
                    for (int r = 0; r < S; ++r) acc += ub[r] * m[r * S + c];
                    bar[static_cast<std::size_t>(c)](0, ik) = acc;
                }
            } else {
                for (int s = 0; s < S; ++s) bar[static_cast<std::size_t>(s)](0, ik) = ub[s];
            }
        }
        if (grad) ad::backward_batch(net, tape, bar, *grad, scratch);
    }
    return total;
}

namespace {

double loss_of(LossKind kind, const ad::JetField& u, const ProblemSpec& p, const CollocationSet& c)
{
    return LossFunctional(p, c).value(kind, u);
}

double loss_of(LossKind kind, const ad::DenseNetwork& net, const ProblemSpec& p, const CollocationSet& c)
{
    return LossFunctional(p, c).value(kind, net);
}

} // namespace

double residual_loss(const ad::JetField& u, const ProblemSpec& p, const CollocationSet& c)
{
    return loss_of(LossKind::residual, u, p, c);
}

double residual_loss(const ad::DenseNetwork& net, const ProblemSpec& p, const CollocationSet& c)
{
    return loss_of(LossKind::residual, net, p, c);
}

double boundary_loss(const ad::JetField& u, const ProblemSpec& p, const CollocationSet& c)
{
    return loss_of(LossKind::boundary, u, p, c);
}

double boundary_loss(const ad::DenseNetwork& net, const ProblemSpec& p, const CollocationSet& c)
{
    return loss_of(LossKind::boundary, net, p, c);
}

double ritz_loss(const ad::JetField& u, const ProblemSpec& p, const CollocationSet& c)
{
    return loss_of(LossKind::ritz, u, p, c);
}

double ritz_loss(const ad::DenseNetwork& net, const ProblemSpec& p, const CollocationSet& c)
{
    return loss_of(LossKind::ritz, net, p, c);
}

double shifted_ritz(const ad::JetField& u, const ProblemSpec& p, const CollocationSet& c)
{
    if (!p.exact_u) throw CapabilityError("the shifted Ritz functional needs the exact solution of " + p.id);
    const LossFunctional j(p, c);
    return j.value(LossKind::ritz, u) - *j.exact_ritz();
}

double shifted_ritz(const ad::DenseNetwork& net, const ProblemSpec& p, const CollocationSet& c)
{
    if (!p.exact_u) throw CapabilityError("the shifted Ritz functional needs the exact solution of " + p.id);
    const LossFunctional j(p, c);
    return j.value(LossKind::ritz, net) - *j.exact_ritz();
}

double pinn_l2_error(const ad::JetField& u, const ProblemSpec& p, int resolution)
{
    if (!p.exact_u) throw CapabilityError("the PINN L2 error needs the exact solution of " + p.id);
    if (resolution < 1) throw InputError("quadrature resolution must be positive");
    const fem::QuadratureRule g = fem::gauss_legendre(8);
    std::vector<double> x1, w1;
    for (int c = 0; c < resolution; ++c) {
        for (int q = 0; q < g.size(); ++q) {
            x1.push_back((c + g.points[static_cast<std::size_t>(q)][0]) / resolution);
            w1.push_back(g.weights[static_cast<std::size_t>(q)] / resolution);
        }
    }
    const std::size_t n = x1.size();
    const int d = p.dim;
    const ad::Layout layout{ad::JetKind::taylor, d, 0};
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= n;
    double sum = 0.0;
    std::vector<Point> pts;
    std::vector<double> wts;
    const std::size_t batch = 1 << 16;
    for (std::size_t b = 0; b < total; b += batch) {
        pts.clear();
        wts.clear();
        for (std::size_t k = b; k < std::min(total, b + batch); ++k) {
            Point x{0.0, 0.0, 0.0};
            double w = 1.0;
            std::size_t r = k;
            for (int a = 0; a < d; ++a) {
                x[static_cast<std::size_t>(a)] = x1[r % n];
                w *= w1[r % n];
                r /= n;
            }
            pts.push_back(x);
            wts.push_back(w);
        }
        const std::vector<ad::Jet> v = u.evaluate(pts, layout);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double e = v[k][0] - p.exact_u->value(pts[k]);
            sum += wts[k] * e * e;
        }
    }
    return std::sqrt(sum);
}

double pinn_l2_error(const ad::DenseNetwork& net, const ProblemSpec& p, int resolution)
{
    return pinn_l2_error(NetworkFunction(net, p), p, resolution);
}

} // namespace pinnfem::pinn
