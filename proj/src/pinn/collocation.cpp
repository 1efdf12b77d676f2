#include "pinnfem/pinn/collocation.hpp"

#include <cmath>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::pinn {

CollocationSet make_collocation(int dim, int count)
{
    if (dim < 1 || dim > 3) throw InputError("collocation dimension must be 1, 2 or 3");
    if (count < (1 << dim)) throw InputError("collocation count must be at least 2^dim");
    int m = static_cast<int>(std::floor(std::pow(static_cast<double>(count), 1.0 / dim)));
    // guard against pow rounding on exact powers
    while (std::pow(m + 1, dim) <= count) ++m;
    while (std::pow(m, dim) > count) --m;

    CollocationSet s;
    s.dim = dim;
    s.resolution = m;
    const auto centre = [m](int i) { return (i + 0.5) / m; };
    if (dim == 1) {
        for (int i = 0; i < m; ++i) s.interior_points.push_back({centre(i), 0.0, 0.0});
        s.boundary_points = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
        s.boundary_weight = 0.5;
    } else if (dim == 2) {
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) s.interior_points.push_back({centre(i), centre(j), 0.0});
        }
        for (int axis = 0; axis < 2; ++axis) {
            for (double side : {0.0, 1.0}) {
                for (int i = 0; i < m; ++i) {
                    Point p{0.0, 0.0, 0.0};
                    p[static_cast<std::size_t>(axis)] = side;
                    p[static_cast<std::size_t>(1 - axis)] = centre(i);
                    s.boundary_points.push_back(p);
                }
            }
        }
        s.boundary_weight = 4.0 / static_cast<double>(s.boundary_points.size());
    } else {
        for (int k = 0; k < m; ++k) {
            for (int j = 0; j < m; ++j) {
                for (int i = 0; i < m; ++i) s.interior_points.push_back({centre(i), centre(j), centre(k)});
            }
        }
        for (int axis = 0; axis < 3; ++axis) {
            const int u = (axis + 1) % 3, v = (axis + 2) % 3;
            for (double side : {0.0, 1.0}) {
                for (int j = 0; j < m; ++j) {
                    for (int i = 0; i < m; ++i) {
                        Point p{0.0, 0.0, 0.0};
                        p[static_cast<std::size_t>(axis)] = side;
                        p[static_cast<std::size_t>(u)] = centre(i);
                        p[static_cast<std::size_t>(v)] = centre(j);
                        s.boundary_points.push_back(p);
                    }
                }
            }
        }
        s.boundary_weight = 6.0 / static_cast<double>(s.boundary_points.size());
    }
    s.interior_weight = 1.0 / static_cast<double>(s.interior_points.size());
    return s;
}

} // namespace pinnfem::pinn
