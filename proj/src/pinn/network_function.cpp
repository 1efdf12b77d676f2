#include "pinnfem/pinn/network_function.hpp"

#include <algorithm>
#include <cmath>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::pinn {

namespace {

constexpr std::size_t sub_batch = 4096;

} // namespace

BoundaryOperator::BoundaryOperator(const ProblemSpec& problem)
    : dim_(problem.dim), biharmonic_(problem.op == Operator::biharmonic_1d), g_(problem.boundary_g)
{
    if (biharmonic_) {
        const ad::Layout l{ad::JetKind::taylor, 1, 1};
        const ad::Jet a = g_.jet(Point{0.0, 0.0, 0.0}, l);
        const ad::Jet b = g_.jet(Point{1.0, 0.0, 0.0}, l);
        g0_ = a[0];
        s0_ = a[1];
        g1_ = b[0];
        s1_ = b[1];
    }
}

BoundaryTerms BoundaryOperator::at(const Point& x, const ad::Layout& layout) const
{
    BoundaryTerms t{ad::Jet(layout, 1.0), ad::Jet(layout)};
    if (biharmonic_) {
        const ad::Jet s = ad::Jet::variable(layout, 0, x[0]);
        const ad::Jet r = 1.0 - s;
        t.distance = s * s * r * r;
        // Hermite cubic on [0, 1]
        const ad::Jet h00 = (1.0 + 2.0 * s) * r * r;
        const ad::Jet h10 = s * r * r;
        const ad::Jet h01 = s * s * (3.0 - 2.0 * s);
        const ad::Jet h11 = -1.0 * s * s * r;
        t.extension = g0_ * h00 + s0_ * h10 + g1_ * h01 + s1_ * h11;
        return t;
    }
    for (int a = 0; a < dim_; ++a) {
        const ad::Jet s = ad::Jet::variable(layout, a, x[static_cast<std::size_t>(a)]);
        t.distance = t.distance * (s * (1.0 - s));
    }
    t.extension = g_.jet(x, layout);
    return t;
}

NetworkFunction::NetworkFunction(ad::DenseNetwork net, const ProblemSpec& problem)
    : net_(std::move(net)), op_(problem)
{
    if (net_.input_dim() != problem.dim) throw InputError("network input dimension does not match the problem");
}

std::vector<ad::Jet> NetworkFunction::evaluate(std::span<const Point> points, const ad::Layout& layout) const
{
    std::vector<ad::Jet> out;
    out.reserve(points.size());
    const bool product = net_.boundary_mode == ad::BoundaryMode::dirichlet_product;
    for (std::size_t b = 0; b < points.size(); b += sub_batch) {
        const auto chunk = points.subspan(b, std::min(sub_batch, points.size() - b));
        const ad::BatchTape tape = ad::forward_batch(net_, chunk, layout);
        for (std::size_t p = 0; p < chunk.size(); ++p) {
            ad::Jet u = tape.output_jet(static_cast<Eigen::Index>(p));
            if (product) {
                const BoundaryTerms t = op_.at(chunk[p], layout);
                u -= net_.shift;
                u = t.distance * u + t.extension;
                u += net_.shift;
            }
            out.push_back(u);
        }
    }
    for (const ad::Jet& j : out) {
        for (int s = 0; s < j.slots(); ++s) {
            if (!std::isfinite(j[s])) throw EvaluationError("network produced a non-finite value");
        }
    }
    return out;
}

std::shared_ptr<const NetworkFunction> apply_boundary_operator(const ad::DenseNetwork& net, const ProblemSpec& problem)
{
    ad::DenseNetwork copy = net;
    copy.boundary_mode = ad::BoundaryMode::dirichlet_product;
    return std::make_shared<const NetworkFunction>(std::move(copy), problem);
}

void product_matrix(const ad::Jet& distance, double (&m)[ad::max_slots][ad::max_slots])
{
    const ad::Layout& layout = distance.layout();
    const int S = layout.slots();
    for (int t = 0; t < S; ++t) {
        ad::Jet e(layout);
        e[t] = 1.0;
        const ad::Jet col = distance * e;
        for (int s = 0; s < S; ++s) m[s][t] = col[s];
    }
}

} // namespace pinnfem::pinn
