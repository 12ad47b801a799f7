#pragma once

#include "heatgraph/graph.hpp"
#include "heatgraph/mesh.hpp"
#include "heatgraph/recovery.hpp"
#include "heatgraph/sampling.hpp"

#include <json.hpp>

#include <filesystem>

namespace heatgraph {

// All file formats use 1-based vertex indices.

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& value);

/// { "n": N, "edges": [[i, j, w], ...] }
nlohmann::json graph_to_json(const Graph& graph);
Graph graph_from_json(const nlohmann::json& value);
Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& graph, const std::filesystem::path& path);

/// { "vertices": [[x, y], ...], "triangles": [[i, j, k], ...] }
nlohmann::json mesh_to_json(const TriangleMesh& mesh);
TriangleMesh mesh_from_json(const nlohmann::json& value);
TriangleMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

/// [v1, v2, ...]
nlohmann::json selection_to_json(const VertexSelection& selection);
VertexSelection selection_from_json(const nlohmann::json& value, int total);

nlohmann::json vector_to_json(const Eigen::VectorXd& values);
Eigen::VectorXd vector_from_json(const nlohmann::json& value);

nlohmann::json recovery_to_json(const RecoveryResult& result);

}  // namespace heatgraph
