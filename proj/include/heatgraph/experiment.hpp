#pragma once

#include "heatgraph/diffusion.hpp"
#include "heatgraph/graph.hpp"
#include "heatgraph/mesh.hpp"
#include "heatgraph/recovery.hpp"
#include "heatgraph/sampling.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace heatgraph {

// ---------------------------------------------------------------------------
// Scenario description
// ---------------------------------------------------------------------------

struct PlateSource {
    PlateParameters parameters;
};
struct MeshFileSource {
    std::filesystem::path path;
};
struct GraphFileSource {
    std::filesystem::path path;
};
using GraphSource = std::variant<PlateSource, MeshFileSource, GraphFileSource>;

struct ExplicitSelection {
    std::vector<int> vertices;  // 0-based
};
struct GreedySelection {
    int count = 0;
    SelectionObjective objective = SelectionObjective::max_min_singular;
};
struct RandomSelection {
    int count = 0;
    std::uint64_t seed = 0;
};
using SelectionPolicy = std::variant<ExplicitSelection, GreedySelection, RandomSelection>;

/// Vertex-domain signal with a few nonzero entries.
struct SparseField {
    std::vector<std::pair<int, double>> entries;  // (0-based vertex, value)
};
/// Signal spanned by the first P eigenvectors: U_P * coefficients.
struct BandlimitedField {
    std::vector<double> coefficients;
};
using FieldSpec = std::variant<std::monostate, SparseField, BandlimitedField, Eigen::VectorXd>;

struct Scenario {
    GraphSource graph = PlateSource{};
    TimeGrid grid{0.16, 10, 0};
    SelectionPolicy selection = GreedySelection{32};
    FieldSpec initial_field;
    FieldSpec input;
    /// Unknown model; inferred from which sources are present when absent.
    std::optional<OperatorKind> model;
    /// P for joint recovery; defaults to the input's bandlimited length.
    std::optional<int> bandwidth;
    double noise_variance = 0.0;
    int trials = 1;
    std::uint64_t seed = 0;
};

Scenario scenario_from_json(const nlohmann::json& value,
                            const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Graph-dependent data resolved from a scenario.
struct Problem {
    Spectrum spectrum;
    std::optional<TriangleMesh> mesh;
    SourceConfig sources;
    OperatorKind model;
    std::optional<int> bandwidth;
};

/// Loads or generates the graph, decomposes its Laplacian and materialises
/// the sources. Throws ValidationError on inconsistent scenarios.
Problem build_problem(const Scenario& scenario);

/// Selection for `count` sensors under the scenario's policy. For explicit
/// lists `count` must equal the list size.
VertexSelection select_sensors(const Scenario& scenario, const Spectrum& spectrum, int count,
                               const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

/// Seed of an independent stream, derived from a parent seed and a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Zero-mean i.i.d. Gaussian matrix of the given variance.
///
/// Uses mt19937_64 and a Box-Muller transform so the draws do not depend on
/// the standard library's distribution implementation.
Eigen::MatrixXd gaussian_noise(Eigen::Index rows, Eigen::Index cols, double variance,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Runs and sweeps
// ---------------------------------------------------------------------------

/// Normalized RMSE: sqrt(mean over trials of ||est - truth||^2) / ||truth||.
/// When the truth is zero the error is left unnormalized.
inline constexpr const char* kRmseDefinition =
    "sqrt(mean_trials ||x_hat - x||_2^2) / ||x||_2";

struct ErrorStatistics {
    double rmse = 0.0;
    double stderr_rmse = 0.0;  // delta-method standard error
    int trials = 0;
};

struct ScenarioOutcome {
    OperatorKind model = OperatorKind::initial_only;
    int vertex_count = 0;
    VertexSelection selection = VertexSelection::all(1);
    TimeGrid grid{1.0, 1};
    RecoveryResult first_trial;  // recovery from the first (or noiseless) draw
    std::optional<double> initial_field_error;  // relative l2 error, first trial
    std::optional<double> input_error;
    ErrorStatistics statistics;  // over all trials, for the primary estimate
    double condition_number = 0.0;
};

ScenarioOutcome run_scenario(const Scenario& scenario);

nlohmann::json outcome_to_json(const ScenarioOutcome& outcome);

struct SweepCell {
    int k = 0;
    int t = 0;
    bool feasible = false;
    std::string status;  // "ok" or the reason the cell was skipped
    double rmse_mean = 0.0;
    double rmse_stderr = 0.0;
    double condition_number = 0.0;

    friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct SweepReport {
    std::vector<int> k_values;
    std::vector<int> t_values;
    std::vector<SweepCell> cells;  // k-major, t-minor
    std::string rmse_definition = kRmseDefinition;

    friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

/// Runs the scenario on every (K, T) pair with a fresh selection per cell.
/// Infeasible cells are reported rather than thrown.
SweepReport rmse_sweep(const Scenario& scenario, const std::vector<int>& k_values,
                       const std::vector<int>& t_values);

/// Single-cell report for a finished run.
SweepReport single_cell_report(const ScenarioOutcome& outcome);

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view name);

/// Columns: k, t, rmse_mean, rmse_stderr, condition_number, status.
std::string report_to_csv(const SweepReport& report);
nlohmann::json report_to_json(const SweepReport& report);
SweepReport report_from_json(const nlohmann::json& value);

void emit_report(const SweepReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace heatgraph
