#include "pinnfem/fem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::fem {

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence.
std::pair<double, double> legendre(int n, double z)
{
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 1) {
        w[0] = 2.0;
        return;
    }
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double dp = legendre(n, z).second;
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
    if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

int points_for(int degree) { return degree / 2 + 1; }

} // namespace

int max_quadrature_degree(mesh::CellShape shape) noexcept
{
    switch (shape) {
    case mesh::CellShape::interval: return 63;
    case mesh::CellShape::triangle: return 30;
    case mesh::CellShape::tetrahedron: return 20;
    }
    return 0;
}

QuadratureRule gauss_legendre(int n)
{
    if (n < 1) throw InputError("Gauss-Legendre needs at least one point");
    std::vector<double> x, w;
    legendre_nodes(n, x, w);
    QuadratureRule rule;
    rule.shape = mesh::CellShape::interval;
    rule.exactness = 2 * n - 1;
    for (int i = 0; i < n; ++i) {
        rule.points.push_back({0.5 * (x[static_cast<std::size_t>(i)] + 1.0), 0.0, 0.0});
        rule.weights.push_back(0.5 * w[static_cast<std::size_t>(i)]);
    }
    return rule;
}

QuadratureRule quadrature_for(mesh::CellShape shape, int degree)
{
    if (degree < 0) throw InputError("quadrature degree must be non-negative");
    if (degree > max_quadrature_degree(shape)) {
        throw CapabilityError("no quadrature rule of degree " + std::to_string(degree) + " for this cell shape");
    }
    switch (shape) {
    case mesh::CellShape::interval: {
        QuadratureRule r = gauss_legendre(points_for(degree));
        r.exactness = degree;
        return r;
    }
    case mesh::CellShape::triangle: {
        // x = s, y = t (1 - s); Jacobian (1 - s)
        const QuadratureRule a = gauss_legendre(points_for(degree + 1));
        const QuadratureRule b = gauss_legendre(points_for(degree));
        QuadratureRule r;
        r.shape = shape;
        r.exactness = degree;
        for (int i = 0; i < a.size(); ++i) {
            const double s = a.points[static_cast<std::size_t>(i)][0];
            for (int j = 0; j < b.size(); ++j) {
                const double t = b.points[static_cast<std::size_t>(j)][0];
                r.points.push_back({s, t * (1.0 - s), 0.0});
                r.weights.push_back(a.weights[static_cast<std::size_t>(i)] * b.weights[static_cast<std::size_t>(j)]
                                    * (1.0 - s));
            }
        }
        return r;
    }
    case mesh::CellShape::tetrahedron: {
        // x = s, y = t (1 - s), z = u (1 - s)(1 - t); Jacobian (1 - s)^2 (1 - t)
        const QuadratureRule a = gauss_legendre(points_for(degree + 2));
        const QuadratureRule b = gauss_legendre(points_for(degree + 1));
        const QuadratureRule c = gauss_legendre(points_for(degree));
        QuadratureRule r;
        r.shape = shape;
        r.exactness = degree;
        for (int i = 0; i < a.size(); ++i) {
            const double s = a.points[static_cast<std::size_t>(i)][0];
            for (int j = 0; j < b.size(); ++j) {
                const double t = b.points[static_cast<std::size_t>(j)][0];
                for (int k = 0; k < c.size(); ++k) {
                    const double u = c.points[static_cast<std::size_t>(k)][0];
                    r.points.push_back({s, t * (1.0 - s), u * (1.0 - s) * (1.0 - t)});
                    r.weights.push_back(a.weights[static_cast<std::size_t>(i)]
                                        * b.weights[static_cast<std::size_t>(j)]
                                        * c.weights[static_cast<std::size_t>(k)] * (1.0 - s) * (1.0 - s)
                                        * (1.0 - t));
                }
            }
        }
        return r;
    }
    }
    throw InputError("unknown cell shape");
}

} // namespace pinnfem::fem
