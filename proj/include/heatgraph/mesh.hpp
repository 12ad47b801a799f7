#pragma once

#include "heatgraph/graph.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace heatgraph {

using Point2 = Eigen::Vector2d;
using Triangle = std::array<int, 3>;  // 0-based vertex indices

/// Planar triangle mesh.
///
/// Construction validates index ranges, rejects triangles whose area is at
/// most 1e-12 of the bounding-box area, and requires every vertex to belong
/// to a triangle and the edge graph to be connected. Orientation is free.
class TriangleMesh {
public:
    TriangleMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles);

    const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    int vertex_count() const noexcept { return static_cast<int>(vertices_.size()); }

    /// Vertices lying on an edge that belongs to exactly one triangle.
    std::vector<bool> boundary_vertices() const;

    /// Unit-weight graph of the triangle edges.
    Graph edge_graph() const;

    friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;

private:
    std::vector<Point2> vertices_;
    std::vector<Triangle> triangles_;
};

/// Cotangent Laplacian: L(i,j) = -1/2 sum of cot of the angles opposite edge
/// (i,j). Obtuse triangles give negative weights, which are kept.
Laplacian cotan_laplacian(const TriangleMesh& mesh);

struct Rectangle {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool contains_strictly(const Point2& p) const {
        return p.x() > x0 && p.x() < x1 && p.y() > y0 && p.y() < y1;
    }
};

struct PlateParameters {
    double width = 2.0;
    double height = 1.0;
    int nx = 16;
    int ny = 8;
    std::optional<Rectangle> cavity = Rectangle{0.625, 0.25, 1.375, 0.75};
};

/// Structured triangulation of a width x height plate with an optional
/// rectangular hole.
///
/// Grid points are numbered row-major (x fastest); each cell is split along
/// its (x0,y0)-(x1,y1) diagonal. Points strictly inside the cavity are
/// dropped together with their triangles, as are triangles whose centroid
/// falls inside the cavity. Throws ValidationError if the cavity touches
/// the plate boundary or the remaining mesh has an isolated vertex or is
/// disconnected.
TriangleMesh generate_plate_with_cavity(const PlateParameters& params);

}  // namespace heatgraph
