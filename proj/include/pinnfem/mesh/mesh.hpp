#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pinnfem/common/point.hpp"

namespace pinnfem::mesh {

enum class CellShape { interval, triangle, tetrahedron };

/// Structured simplicial mesh of [0,1]^dim with m cells per axis.
///
/// Nodes sit on the lattice (i/m, j/m, k/m) and keep their integer lattice
/// index so boundary tests are exact integer comparisons.
struct Mesh {
    int dim = 1;
    int cells_per_axis = 1;
    CellShape shape = CellShape::interval;
    double h = 1.0;

    std::vector<Point> nodes;
    std::vector<std::array<int, 3>> lattice;
    /// Flat connectivity, vertices_per_cell() entries per cell, positively oriented.
    std::vector<int> connectivity;
    std::vector<int> boundary_nodes;
    /// Flat boundary facet list, dim entries per facet.
    std::vector<int> boundary_facets;

    [[nodiscard]] int vertices_per_cell() const noexcept { return dim + 1; }
    [[nodiscard]] int cell_count() const noexcept
    {
        return static_cast<int>(connectivity.size()) / vertices_per_cell();
    }
    [[nodiscard]] int node_count() const noexcept { return static_cast<int>(nodes.size()); }
    [[nodiscard]] int boundary_facet_count() const noexcept
    {
        return static_cast<int>(boundary_facets.size()) / dim;
    }
    [[nodiscard]] std::span<const int> cell(int c) const
    {
        return {connectivity.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(dim + 1),
                static_cast<std::size_t>(dim + 1)};
    }
    [[nodiscard]] std::span<const int> boundary_facet(int f) const
    {
        return {boundary_facets.data() + static_cast<std::size_t>(f) * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
    [[nodiscard]] bool is_boundary_node(int node) const;

    /// Signed measure of cell c under its stored orientation.
    [[nodiscard]] double cell_measure(int c) const;

    /// Cell containing x, found by lattice arithmetic; nullopt outside [0,1]^dim.
    [[nodiscard]] std::optional<int> locate(const Point& x) const;
};

[[nodiscard]] Mesh interval_mesh(int n);
/// Each lattice square split along its (0,0)-(1,1) diagonal.
[[nodiscard]] Mesh triangle_mesh(int m);
/// Each lattice cube split into the 6 Kuhn tetrahedra around its main diagonal.
[[nodiscard]] Mesh tet_mesh(int m);

struct BoundaryClassification {
    std::vector<int> nodes;
    std::vector<int> facets;
};

/// Recomputes boundary nodes and facets from lattice indices.
[[nodiscard]] BoundaryClassification classify_boundary(const Mesh& mesh);

/// Debug dump: `NODES k`, k coordinate lines, `CELLS c`, c index lines.
void write_mesh(const Mesh& mesh, std::ostream& out);

} // namespace pinnfem::mesh
