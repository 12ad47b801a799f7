#include "heatgraph/io.hpp"

#include "heatgraph/error.hpp"

#include <fstream>
#include <sstream>

namespace heatgraph {

using nlohmann::json;

namespace {

const json& field(const json& object, const char* name) {
    if (!object.is_object() || !object.contains(name)) {
        throw ValidationError(std::string("missing field '") + name + "'");
    }
    return object.at(name);
}

const json& array_of(const json& value, std::size_t length, const std::string& where) {
    if (!value.is_array() || value.size() != length) {
        throw ValidationError(where + ": expected an array of " + std::to_string(length) +
                              " numbers");
    }
    for (const json& entry : value) {
        if (!entry.is_number()) throw ValidationError(where + ": expected numbers");
    }
    return value;
}

// 1-based index from a file -> 0-based, rejecting non-integers and values < 1.
int file_index(const json& value, const std::string& where) {
    if (!value.is_number_integer()) {
        throw ValidationError(where + ": vertex index must be an integer");
    }
    const auto index = value.get<long long>();
    if (index < 1 || index > std::numeric_limits<int>::max()) {
        throw ValidationError(where + ": vertex index " + std::to_string(index) +
                              " out of range (indices are 1-based)");
    }
    return static_cast<int>(index - 1);
}

template <class Parse>
auto with_context(const std::string& context, Parse&& parse) {
    try {
        return parse();
    } catch (const json::exception& e) {
        throw ValidationError(context + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(context + ": " + e.what());
    }
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& value) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << value.dump(2) << '\n';
}

json graph_to_json(const Graph& graph) {
    json edges = json::array();
    for (const Edge& edge : graph.edges()) edges.push_back({edge.i + 1, edge.j + 1, edge.weight});
    return {{"n", graph.vertex_count()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const json& value) {
    const json& n = field(value, "n");
    if (!n.is_number_integer()) throw ValidationError("'n' must be an integer");
    const json& edges = field(value, "edges");
    if (!edges.is_array()) throw ValidationError("'edges' must be an array");
    std::vector<Edge> parsed;
    parsed.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string where = "edges[" + std::to_string(e) + "]";
        const json& entry = array_of(edges[e], 3, where);
        parsed.push_back({file_index(entry[0], where), file_index(entry[1], where),
                          entry[2].get<double>()});
    }
    return Graph(n.get<int>(), std::move(parsed));
}

Graph load_graph(const std::filesystem::path& path) {
    const json value = read_json_file(path);
    return with_context(path.string(), [&] { return graph_from_json(value); });
}

void save_graph(const Graph& graph, const std::filesystem::path& path) {
    write_json_file(path, graph_to_json(graph));
}

json mesh_to_json(const TriangleMesh& mesh) {
    json vertices = json::array();
    for (const Point2& p : mesh.vertices()) vertices.push_back({p.x(), p.y()});
    json triangles = json::array();
    for (const Triangle& t : mesh.triangles()) triangles.push_back({t[0] + 1, t[1] + 1, t[2] + 1});
    return {{"vertices", std::move(vertices)}, {"triangles", std::move(triangles)}};
}

TriangleMesh mesh_from_json(const json& value) {
    const json& vertices = field(value, "vertices");
    const json& triangles = field(value, "triangles");
    if (!vertices.is_array() || !triangles.is_array()) {
        throw ValidationError("'vertices' and 'triangles' must be arrays");
    }
    std::vector<Point2> points;
    points.reserve(vertices.size());
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        const json& entry = array_of(vertices[v], 2, "vertices[" + std::to_string(v) + "]");
        points.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    std::vector<Triangle> faces;
    faces.reserve(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const std::string where = "triangles[" + std::to_string(t) + "]";
        const json& entry = array_of(triangles[t], 3, where);
        faces.push_back({file_index(entry[0], where), file_index(entry[1], where),
                         file_index(entry[2], where)});
    }
    return TriangleMesh(std::move(points), std::move(faces));
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
    const json value = read_json_file(path);
    return with_context(path.string(), [&] { return mesh_from_json(value); });
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
    write_json_file(path, mesh_to_json(mesh));
}

json selection_to_json(const VertexSelection& selection) {
    json out = json::array();
    for (int v : selection.indices()) out.push_back(v + 1);
    return out;
}

VertexSelection selection_from_json(const json& value, int total) {
    if (!value.is_array()) throw ValidationError("selection must be an array of vertex indices");
    std::vector<int> indices;
    for (std::size_t r = 0; r < value.size(); ++r) {
        indices.push_back(file_index(value[r], "selection[" + std::to_string(r) + "]"));
    }
    return VertexSelection(std::move(indices), total);
}

json vector_to_json(const Eigen::VectorXd& values) {
    return json(std::vector<double>(values.data(), values.data() + values.size()));
}

Eigen::VectorXd vector_from_json(const json& value) {
    if (!value.is_array()) throw ValidationError("expected an array of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(value.size()));
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number()) throw ValidationError("expected an array of numbers");
        out(static_cast<Eigen::Index>(i)) = value[i].get<double>();
    }
    return out;
}

json recovery_to_json(const RecoveryResult& result) {
    json out;
    out["initial_field"] = result.initial_field ? vector_to_json(*result.initial_field) : json();
    out["input"] = result.input ? vector_to_json(*result.input) : json();
    out["spectral_estimate"] = vector_to_json(result.spectral_estimate);
    out["residual_norm"] = result.residual_norm;
    out["operator_condition"] = result.operator_condition;
    out["rank"] = result.rank_status.rank;
    out["unknowns"] = result.rank_status.columns;
    out["rank_status"] = result.rank_status.full ? "full" : "deficient";
    return out;
}

}  // namespace heatgraph
