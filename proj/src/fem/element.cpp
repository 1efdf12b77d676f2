#include "pinnfem/fem/element.hpp"

#include <Eigen/LU>
#include <string>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::fem {

namespace {

Point vertex(int dim, int v)
{
    Point p{};
    if (v > 0 && v <= dim) p[static_cast<std::size_t>(v - 1)] = 1.0;
    return p;
}

// d^alpha x^e, one coordinate.
double falling_power(int e, double x, int alpha)
{
    if (alpha > e) return 0.0;
    double c = 1.0;
    for (int k = 0; k < alpha; ++k) c *= e - k;
    double p = 1.0;
    for (int k = 0; k < e - alpha; ++k) p *= x;
    return c * p;
}

double monomial_derivative(const std::array<int, 3>& e, const Point& x, const std::array<int, 3>& alpha)
{
    double v = 1.0;
    for (std::size_t a = 0; a < 3; ++a) v *= falling_power(e[a], x[a], alpha[a]);
    return v;
}

} // namespace

mesh::CellShape Element::shape() const noexcept
{
    switch (dim_) {
    case 1: return mesh::CellShape::interval;
    case 2: return mesh::CellShape::triangle;
    default: return mesh::CellShape::tetrahedron;
    }
}

Element Element::lagrange(int dim, int degree)
{
    const int max_degree = dim == 1 ? 3 : dim == 2 ? 2 : dim == 3 ? 1 : 0;
    if (dim < 1 || dim > 3 || degree < 1 || degree > max_degree) {
        throw CapabilityError("no Lagrange element of degree " + std::to_string(degree) + " in dimension "
                              + std::to_string(dim));
    }
    Element e;
    e.family_ = Family::lagrange;
    e.dim_ = dim;
    e.degree_ = degree;
    for (int v = 0; v <= dim; ++v) e.dofs_.push_back({DofKind::vertex_value, v, vertex(dim, v)});
    if (dim == 1) {
        for (int i = 1; i < degree; ++i) {
            e.dofs_.push_back({DofKind::interior, i - 1, {static_cast<double>(i) / degree, 0.0, 0.0}});
        }
    } else if (degree == 2) {
        const int edges[3][2] = {{0, 1}, {1, 2}, {0, 2}};
        for (int k = 0; k < 3; ++k) {
            const Point a = vertex(dim, edges[k][0]), b = vertex(dim, edges[k][1]);
            e.dofs_.push_back({DofKind::edge, k, {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.0}});
        }
    }
    for (int i = 0; i <= degree; ++i) {
        for (int j = 0; j <= (dim >= 2 ? degree - i : 0); ++j) {
            for (int k = 0; k <= (dim >= 3 ? degree - i - j : 0); ++k) e.monomials_.push_back({i, j, k});
        }
    }
    e.build_coefficients();
    return e;
}

Element Element::hermite()
{
    Element e;
    e.family_ = Family::hermite;
    e.dim_ = 1;
    e.degree_ = 3;
    e.dofs_ = {{DofKind::vertex_value, 0, {0.0, 0.0, 0.0}},
               {DofKind::vertex_derivative, 0, {0.0, 0.0, 0.0}},
               {DofKind::vertex_value, 1, {1.0, 0.0, 0.0}},
               {DofKind::vertex_derivative, 1, {1.0, 0.0, 0.0}}};
    for (int i = 0; i <= 3; ++i) e.monomials_.push_back({i, 0, 0});
    e.build_coefficients();
    return e;
}

void Element::build_coefficients()
{
    const auto n = static_cast<Eigen::Index>(dofs_.size());
    if (static_cast<Eigen::Index>(monomials_.size()) != n) throw InputError("element is not unisolvent");
    // V(i, m) = DoF functional i applied to monomial m
    Eigen::MatrixXd V(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const DofDescriptor& d = dofs_[static_cast<std::size_t>(i)];
        const std::array<int, 3> alpha = d.kind == DofKind::vertex_derivative ? std::array<int, 3>{1, 0, 0}
                                                                               : std::array<int, 3>{0, 0, 0};
        for (Eigen::Index m = 0; m < n; ++m) {
            V(i, m) = monomial_derivative(monomials_[static_cast<std::size_t>(m)], d.node, alpha);
        }
    }
    coeffs_ = V.inverse();
}

std::vector<ad::Jet> Element::basis(const Point& xhat, int order) const
{
    const ad::Layout layout = ad::Layout::for_order(dim_, order);
    const auto n = static_cast<Eigen::Index>(dofs_.size());
    const int S = layout.slots();
    // monomial derivatives per slot
    std::vector<std::array<int, 3>> alpha(static_cast<std::size_t>(S), {0, 0, 0});
    if (layout.kind == ad::JetKind::taylor) {
        for (int k = 0; k < S; ++k) alpha[static_cast<std::size_t>(k)] = {k, 0, 0};
    } else {
        for (int a = 0; a < dim_; ++a) alpha[static_cast<std::size_t>(1 + a)][static_cast<std::size_t>(a)] = 1;
        if (layout.kind == ad::JetKind::grad_hess) {
            for (int i = 0; i < dim_; ++i) {
                for (int j = i; j < dim_; ++j) {
                    auto& al = alpha[static_cast<std::size_t>(layout.hessian_slot(i, j))];
                    ++al[static_cast<std::size_t>(i)];
                    ++al[static_cast<std::size_t>(j)];
                }
            }
        }
    }
    Eigen::MatrixXd M(S, n);
    for (int s = 0; s < S; ++s) {
        for (Eigen::Index m = 0; m < n; ++m) {
            M(s, m) = monomial_derivative(monomials_[static_cast<std::size_t>(m)], xhat,
                                          alpha[static_cast<std::size_t>(s)]);
        }
    }
    const Eigen::MatrixXd B = M * coeffs_;
    std::vector<ad::Jet> out(static_cast<std::size_t>(n), ad::Jet(layout));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int s = 0; s < S; ++s) out[static_cast<std::size_t>(i)][s] = B(s, i);
    }
    return out;
}

bool in_reference_cell(mesh::CellShape shape, const Point& x, double tol) noexcept
{
    const int d = shape == mesh::CellShape::interval ? 1 : shape == mesh::CellShape::triangle ? 2 : 3;
    double sum = 0.0;
    for (int a = 0; a < d; ++a) {
        if (!(x[static_cast<std::size_t>(a)] >= -tol)) return false;
        sum += x[static_cast<std::size_t>(a)];
    }
    return sum <= 1.0 + tol;
}

std::vector<ad::Jet> reference_basis(const Element& element, const Point& xhat, int order)
{
    if (!in_reference_cell(element.shape(), xhat)) throw InputError("point lies outside the reference cell");
    return element.basis(xhat, order);
}

} // namespace pinnfem::fem
