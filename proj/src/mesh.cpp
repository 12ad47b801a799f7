#include "heatgraph/mesh.hpp"

#include "heatgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace heatgraph {

namespace {

double signed_double_area(const Point2& a, const Point2& b, const Point2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
}

// cot of the angle at `apex` in triangle (apex, p, q).
double cotangent_at(const Point2& apex, const Point2& p, const Point2& q) {
    const Point2 u = p - apex;
    const Point2 v = q - apex;
    const double cross = u.x() * v.y() - u.y() * v.x();
    return u.dot(v) / std::abs(cross);
}

std::set<std::pair<int, int>> unique_edges(const std::vector<Triangle>& triangles) {
    std::set<std::pair<int, int>> edges;
    for (const Triangle& t : triangles) {
        for (int k = 0; k < 3; ++k) {
            edges.emplace(std::minmax(t[k], t[(k + 1) % 3]));
        }
    }
    return edges;
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    const int n = vertex_count();
    if (n == 0) throw ValidationError("mesh has no vertices");
    if (triangles_.empty()) throw ValidationError("mesh has no triangles");

    Eigen::Vector2d lo = vertices_.front();
    Eigen::Vector2d hi = vertices_.front();
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (!vertices_[v].allFinite()) {
            throw ValidationError("vertex " + std::to_string(v + 1) + " has non-finite coordinates");
        }
        lo = lo.cwiseMin(vertices_[v]);
        hi = hi.cwiseMax(vertices_[v]);
    }
    const double bbox_area = (hi - lo).prod();

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const Triangle& tri = triangles_[t];
        for (int index : tri) {
            if (index < 0 || index >= n) {
                std::ostringstream msg;
                msg << "triangle " << t + 1 << ": vertex index " << index + 1
                    << " out of range [1, " << n << "]";
                throw ValidationError(msg.str());
            }
            used[static_cast<std::size_t>(index)] = true;
        }
        const double area =
            0.5 * std::abs(signed_double_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]));
        if (area <= 1e-12 * bbox_area || area == 0.0) {
            throw ValidationError("triangle " + std::to_string(t + 1) + " is degenerate");
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!used[static_cast<std::size_t>(v)]) {
            throw ValidationError("vertex " + std::to_string(v + 1) + " is isolated");
        }
    }
    if (!edge_graph().is_connected()) {
        throw ValidationError("mesh is disconnected");
    }
}

std::vector<bool> TriangleMesh::boundary_vertices() const {
    std::map<std::pair<int, int>, int> incidence;
    for (const Triangle& t : triangles_) {
        for (int k = 0; k < 3; ++k) ++incidence[std::minmax(t[k], t[(k + 1) % 3])];
    }
    std::vector<bool> boundary(vertices_.size(), false);
    for (const auto& [edge, count] : incidence) {
        if (count == 1) {
            boundary[static_cast<std::size_t>(edge.first)] = true;
            boundary[static_cast<std::size_t>(edge.second)] = true;
        }
    }
    return boundary;
}

Graph TriangleMesh::edge_graph() const {
    std::vector<Edge> edges;
    for (const auto& [i, j] : unique_edges(triangles_)) edges.push_back({i, j, 1.0});
    return Graph(vertex_count(), std::move(edges));
}

Laplacian cotan_laplacian(const TriangleMesh& mesh) {
    const int n = mesh.vertex_count();
    const auto& p = mesh.vertices();
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
    for (const Triangle& t : mesh.triangles()) {
        for (int k = 0; k < 3; ++k) {
            const int apex = t[k];
            const int i = t[(k + 1) % 3];
            const int j = t[(k + 2) % 3];
            const double half_cot = 0.5 * cotangent_at(p[apex], p[i], p[j]);
            // Same update on both entries keeps the matrix exactly symmetric.
            matrix(i, j) -= half_cot;
            matrix(j, i) -= half_cot;
        }
    }
    for (int i = 0; i < n; ++i) {
        matrix(i, i) = 0.0;
        matrix(i, i) = -matrix.row(i).sum();
    }
    return Laplacian::from_matrix(std::move(matrix));
}

TriangleMesh generate_plate_with_cavity(const PlateParameters& params) {
    if (!(params.width > 0.0) || !(params.height > 0.0)) {
        throw ValidationError("plate dimensions must be positive");
    }
    if (params.nx < 1 || params.ny < 1) {
        throw ValidationError("plate grid needs nx, ny >= 1");
    }
    if (params.cavity) {
        const Rectangle& c = *params.cavity;
        const bool inside = c.x0 > 0.0 && c.x1 < params.width && c.y0 > 0.0 &&
                            c.y1 < params.height && c.x0 < c.x1 && c.y0 < c.y1;
        if (!inside) {
            throw ValidationError("cavity must lie strictly inside the plate");
        }
    }

    const int columns = params.nx + 1;
    const int rows = params.ny + 1;
    auto grid_point = [&](int c, int r) {
        return Point2(params.width * c / params.nx, params.height * r / params.ny);
    };
    auto in_cavity = [&](const Point2& q) {
        return params.cavity && params.cavity->contains_strictly(q);
    };

    std::vector<int> new_index(static_cast<std::size_t>(columns * rows), -1);
    std::vector<Point2> vertices;
    std::vector<Triangle> grid_triangles;
    for (int r = 0; r + 1 < rows; ++r) {
        for (int c = 0; c + 1 < columns; ++c) {
            const int p00 = r * columns + c;
            const int p10 = p00 + 1;
            const int p01 = p00 + columns;
            const int p11 = p01 + 1;
            for (const Triangle& tri : {Triangle{p00, p10, p11}, Triangle{p00, p11, p01}}) {
                Point2 centroid = Point2::Zero();
                bool keep = true;
                for (int g : tri) {
                    const Point2 q = grid_point(g % columns, g / columns);
                    keep = keep && !in_cavity(q);
                    centroid += q / 3.0;
                }
                if (keep && !in_cavity(centroid)) grid_triangles.push_back(tri);
            }
        }
    }

    std::vector<bool> referenced(new_index.size(), false);
    for (const Triangle& tri : grid_triangles) {
        for (int g : tri) referenced[static_cast<std::size_t>(g)] = true;
    }
    for (int g = 0; g < columns * rows; ++g) {
        const Point2 q = grid_point(g % columns, g / columns);
        if (in_cavity(q)) continue;
        if (!referenced[static_cast<std::size_t>(g)]) {
            std::ostringstream msg;
            msg << "cavity leaves grid point (" << q.x() << ", " << q.y() << ") isolated";
            throw ValidationError(msg.str());
        }
        new_index[static_cast<std::size_t>(g)] = static_cast<int>(vertices.size());
        vertices.push_back(q);
    }

    std::vector<Triangle> triangles;
    triangles.reserve(grid_triangles.size());
    for (const Triangle& tri : grid_triangles) {
        triangles.push_back({new_index[static_cast<std::size_t>(tri[0])],
                             new_index[static_cast<std::size_t>(tri[1])],
                             new_index[static_cast<std::size_t>(tri[2])]});
    }
    return TriangleMesh(std::move(vertices), std::move(triangles));
}

}  // namespace heatgraph
