#include "pinnfem/fem/space.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <unordered_map>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::fem {

namespace {

std::uint64_t edge_key(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

} // namespace

Point map_point(const CellGeometry& g, const Point& xhat)
{
    Point x{};
    for (int a = 0; a < 3; ++a) {
        double v = g.origin[static_cast<std::size_t>(a)];
        for (int b = 0; b < 3; ++b) v += g.jacobian(a, b) * xhat[static_cast<std::size_t>(b)];
        x[static_cast<std::size_t>(a)] = v;
    }
    return x;
}

Point reference_point(const CellGeometry& g, const Point& x)
{
    Point xhat{};
    for (int a = 0; a < 3; ++a) {
        double v = 0.0;
        for (int b = 0; b < 3; ++b) {
            v += g.inverse(a, b) * (x[static_cast<std::size_t>(b)] - g.origin[static_cast<std::size_t>(b)]);
        }
        xhat[static_cast<std::size_t>(a)] = v;
    }
    return xhat;
}

CellGeometry cell_geometry(const mesh::Mesh& mesh, int cell)
{
    const auto v = mesh.cell(cell);
    CellGeometry g;
    g.origin = mesh.nodes[static_cast<std::size_t>(v[0])];
    g.jacobian.setIdentity();
    for (int k = 0; k < mesh.dim; ++k) {
        const Point& p = mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(k + 1)])];
        for (int a = 0; a < mesh.dim; ++a) {
            g.jacobian(a, k) = p[static_cast<std::size_t>(a)] - g.origin[static_cast<std::size_t>(a)];
        }
    }
    g.det = g.jacobian.determinant();
    if (!(std::abs(g.det) > 0.0)) throw MeshError("cell " + std::to_string(cell) + " has zero measure");
    g.inverse = g.jacobian.inverse();
    return g;
}

FunctionSpace make_space(std::shared_ptr<const mesh::Mesh> mesh, const Element& element)
{
    if (!mesh) throw InputError("function space needs a mesh");
    if (mesh->dim != element.dim()) throw InputError("element dimension does not match the mesh");
    FunctionSpace s;
    s.element = element;
    const int nc = mesh->cell_count();
    const int nd = element.dofs_per_cell();
    const auto& dofs = element.dofs();
    s.dof_map.assign(static_cast<std::size_t>(nc) * static_cast<std::size_t>(nd), -1);

    std::vector<int> vertex_dof(static_cast<std::size_t>(mesh->node_count()), -1);
    std::unordered_map<std::uint64_t, int> edge_dof;

    if (mesh->dim == 1) {
        const int per_cell = element.family() == Family::hermite ? 2 : element.degree();
        s.n_dofs = per_cell * mesh->cell_count() + (element.family() == Family::hermite ? 2 : 1);
        s.dof_points.resize(static_cast<std::size_t>(s.n_dofs));
        s.dof_kinds.resize(static_cast<std::size_t>(s.n_dofs));
        for (int c = 0; c < nc; ++c) {
            const auto v = mesh->cell(c);
            const double x0 = mesh->nodes[static_cast<std::size_t>(v[0])][0];
            const double h = mesh->nodes[static_cast<std::size_t>(v[1])][0] - x0;
            for (int k = 0; k < nd; ++k) {
                const DofDescriptor& d = dofs[static_cast<std::size_t>(k)];
                int g = 0;
                switch (d.kind) {
                case DofKind::vertex_value: g = per_cell * v[static_cast<std::size_t>(d.entity)]; break;
                case DofKind::vertex_derivative: g = per_cell * v[static_cast<std::size_t>(d.entity)] + 1; break;
                default: g = per_cell * v[0] + 1 + d.entity; break;
                }
                s.dof_map[static_cast<std::size_t>(c * nd + k)] = g;
                s.dof_points[static_cast<std::size_t>(g)] = {x0 + h * d.node[0], 0.0, 0.0};
                s.dof_kinds[static_cast<std::size_t>(g)] = d.kind;
            }
        }
        for (int b : mesh->boundary_nodes) {
            s.boundary_dofs.push_back(per_cell * b);
            if (element.family() == Family::hermite) s.boundary_dofs.push_back(per_cell * b + 1);
        }
    } else {
        if (element.family() != Family::lagrange) throw CapabilityError("Hermite elements are one-dimensional");
        int next = mesh->node_count();
        for (int n = 0; n < mesh->node_count(); ++n) vertex_dof[static_cast<std::size_t>(n)] = n;
        s.dof_points = mesh->nodes;
        s.dof_kinds.assign(static_cast<std::size_t>(mesh->node_count()), DofKind::vertex_value);
        const int edges[3][2] = {{0, 1}, {1, 2}, {0, 2}};
        for (int c = 0; c < nc; ++c) {
            const auto v = mesh->cell(c);
            for (int k = 0; k < nd; ++k) {
                const DofDescriptor& d = dofs[static_cast<std::size_t>(k)];
                int g = -1;
                if (d.kind == DofKind::vertex_value) {
                    g = vertex_dof[static_cast<std::size_t>(v[static_cast<std::size_t>(d.entity)])];
                } else if (d.kind == DofKind::edge) {
                    const int a = v[static_cast<std::size_t>(edges[d.entity][0])];
                    const int b = v[static_cast<std::size_t>(edges[d.entity][1])];
                    const auto [it, fresh] = edge_dof.try_emplace(edge_key(a, b), next);
                    if (fresh) {
                        ++next;
                        const Point& pa = mesh->nodes[static_cast<std::size_t>(a)];
                        const Point& pb = mesh->nodes[static_cast<std::size_t>(b)];
                        s.dof_points.push_back({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]), 0.5 * (pa[2] + pb[2])});
                        s.dof_kinds.push_back(DofKind::edge);
                    }
                    g = it->second;
                } else {
                    throw CapabilityError("interior DoFs are one-dimensional only");
                }
                s.dof_map[static_cast<std::size_t>(c * nd + k)] = g;
            }
        }
        s.n_dofs = next;
        s.boundary_dofs = mesh->boundary_nodes;
        if (!edge_dof.empty()) {
            for (int f = 0; f < mesh->boundary_facet_count(); ++f) {
                const auto fv = mesh->boundary_facet(f);
                if (mesh->dim == 2) s.boundary_dofs.push_back(edge_dof.at(edge_key(fv[0], fv[1])));
            }
        }
    }
    std::sort(s.boundary_dofs.begin(), s.boundary_dofs.end());
    s.boundary_dofs.erase(std::unique(s.boundary_dofs.begin(), s.boundary_dofs.end()), s.boundary_dofs.end());
    s.mesh = std::move(mesh);
    return s;
}

FunctionSpace enrich(const FunctionSpace& base, Enrichment mode, std::shared_ptr<const ad::JetField> field, double shift)
{
    if (mode != Enrichment::classical && !field) throw InputError("an enriched space needs a field");
    if (field && field->dim() != base.dim()) throw InputError("enrichment field dimension does not match the space");
    FunctionSpace s = base;
    s.enrichment = mode;
    s.field = mode == Enrichment::classical ? nullptr : std::move(field);
    s.shift = mode == Enrichment::multiplicative ? shift : 0.0;
    return s;
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const ad::ScalarField& f)
{
    Eigen::VectorXd u(space.n_dofs);
    const ad::Layout l1 = ad::Layout::for_order(space.dim(), 1);
    for (int i = 0; i < space.n_dofs; ++i) {
        const Point& x = space.dof_points[static_cast<std::size_t>(i)];
        u(i) = space.dof_kinds[static_cast<std::size_t>(i)] == DofKind::vertex_derivative ? f.jet(x, l1).grad(0)
                                                                                            : f.value(x);
    }
    return u;
}

} // namespace pinnfem::fem
