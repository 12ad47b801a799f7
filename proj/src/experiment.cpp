#include "heatgraph/experiment.hpp"

#include "heatgraph/error.hpp"
#include "heatgraph/io.hpp"
#include "parallel.hpp"

#include <cmath>
#include <numeric>

namespace heatgraph {

namespace {

int policy_count(const SelectionPolicy& policy) {
    return std::visit(
        [](const auto& p) -> int {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ExplicitSelection>) {
                return static_cast<int>(p.vertices.size());
            } else {
                return p.count;
            }
        },
        policy);
}

Eigen::Index unknown_count(const Problem& problem) {
    const Eigen::Index n = problem.spectrum.size();
    return problem.model == OperatorKind::joint_bandlimited ? n + *problem.bandwidth : n;
}

ObservationOperator build_operator(const Problem& problem, const TimeGrid& grid,
                                   const VertexSelection& selection) {
    switch (problem.model) {
        case OperatorKind::initial_only:
            return build_case1_operator(problem.spectrum, grid, selection);
        case OperatorKind::input_only:
            return build_case2_operator(problem.spectrum, grid, selection);
        case OperatorKind::joint_bandlimited:
            return build_joint_operator(problem.spectrum, grid, selection, *problem.bandwidth);
    }
    throw ValidationError("unknown operator kind");
}

double relative_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
    const double norm = truth.norm();
    const double diff = (estimate - truth).norm();
    return norm > 0.0 ? diff / norm : diff;
}

// Squared primary-estimate error of one spectral solution, normalized by
// ||truth||^2 when the truth is nonzero.
double squared_error(const Problem& problem, const Eigen::VectorXd& spectral) {
    const Eigen::MatrixXd& u = problem.spectrum.eigenvectors();
    const Eigen::Index n = problem.spectrum.size();
    const bool input_primary = problem.model == OperatorKind::input_only;
    const Eigen::VectorXd& truth =
        input_primary ? problem.sources.input : problem.sources.initial_field;
    const Eigen::VectorXd estimate = u * spectral.head(n);
    const double norm2 = truth.squaredNorm();
    const double diff2 = (estimate - truth).squaredNorm();
    return norm2 > 0.0 ? diff2 / norm2 : diff2;
}

ErrorStatistics summarise(const std::vector<double>& squared_errors) {
    ErrorStatistics stats;
    stats.trials = static_cast<int>(squared_errors.size());
    const double n = static_cast<double>(squared_errors.size());
    const double mean = std::accumulate(squared_errors.begin(), squared_errors.end(), 0.0) / n;
    stats.rmse = std::sqrt(mean);
    if (squared_errors.size() > 1 && stats.rmse > 0.0) {
        double spread = 0.0;
        for (double e : squared_errors) spread += (e - mean) * (e - mean);
        const double stderr_mean = std::sqrt(spread / (n - 1.0) / n);
        stats.stderr_rmse = stderr_mean / (2.0 * stats.rmse);
    }
    return stats;
}

ScenarioOutcome evaluate(const Scenario& scenario, const Problem& problem,
                         const VertexSelection& selection, const TimeGrid& grid,
                         std::uint64_t noise_seed) {
    const ObservationOperator op = build_operator(problem, grid, selection);
    const LeastSquaresEstimator estimator(op);
    const Eigen::MatrixXd clean =
        selection.select_rows(simulate_field(problem.spectrum, problem.sources, grid));

    const bool noisy = scenario.noise_variance > 0.0;
    const int trials = noisy ? scenario.trials : 1;
    auto observations = [&](int trial) -> Eigen::MatrixXd {
        if (!noisy) return clean;
        return clean + gaussian_noise(clean.rows(), clean.cols(), scenario.noise_variance,
                                      derive_seed(noise_seed, static_cast<std::uint64_t>(trial)));
    };

    std::vector<double> squared_errors(static_cast<std::size_t>(trials));
    detail::parallel_for(squared_errors.size(), [&](std::size_t trial) {
        squared_errors[trial] =
            squared_error(problem, estimator.solve(observations(static_cast<int>(trial))));
    });

    ScenarioOutcome outcome;
    outcome.model = problem.model;
    outcome.vertex_count = static_cast<int>(problem.spectrum.size());
    outcome.selection = selection;
    outcome.grid = grid;
    outcome.first_trial = estimator.recover(observations(0), problem.spectrum);
    if (outcome.first_trial.initial_field) {
        outcome.initial_field_error =
            relative_error(*outcome.first_trial.initial_field, problem.sources.initial_field);
    }
    if (outcome.first_trial.input) {
        outcome.input_error = relative_error(*outcome.first_trial.input, problem.sources.input);
    }
    outcome.statistics = summarise(squared_errors);
    outcome.condition_number = estimator.conditioning().condition_number;
    return outcome;
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& scenario) {
    const Problem problem = build_problem(scenario);
    const VertexSelection selection =
        select_sensors(scenario, problem.spectrum, policy_count(scenario.selection), scenario.grid);
    return evaluate(scenario, problem, selection, scenario.grid, scenario.seed);
}

nlohmann::json outcome_to_json(const ScenarioOutcome& outcome) {
    nlohmann::json out;
    out["model"] = std::string(to_string(outcome.model));
    out["n"] = outcome.vertex_count;
    out["k"] = outcome.selection.size();
    out["t"] = outcome.grid.count();
    out["selection"] = selection_to_json(outcome.selection);
    out["recovery"] = recovery_to_json(outcome.first_trial);
    out["initial_field_error"] =
        outcome.initial_field_error ? nlohmann::json(*outcome.initial_field_error) : nlohmann::json();
    out["input_error"] = outcome.input_error ? nlohmann::json(*outcome.input_error) : nlohmann::json();
    out["rmse_mean"] = outcome.statistics.rmse;
    out["rmse_stderr"] = outcome.statistics.stderr_rmse;
    out["trials"] = outcome.statistics.trials;
    out["condition_number"] = outcome.condition_number;
    out["rmse_definition"] = kRmseDefinition;
    return out;
}

SweepReport rmse_sweep(const Scenario& scenario, const std::vector<int>& k_values,
                       const std::vector<int>& t_values) {
    const Problem problem = build_problem(scenario);
    SweepReport report;
    report.k_values = k_values;
    report.t_values = t_values;
    std::uint64_t cell_index = 0;
    for (int k : k_values) {
        for (int t : t_values) {
            SweepCell cell;
            cell.k = k;
            cell.t = t;
            const std::uint64_t noise_seed = derive_seed(scenario.seed, cell_index++);
            try {
                if (static_cast<Eigen::Index>(k) * t < unknown_count(problem)) {
                    throw InfeasibleError("K*T = " + std::to_string(k * t) + " < " +
                                          std::to_string(unknown_count(problem)) + " unknowns");
                }
                const TimeGrid grid(scenario.grid.delta(), t, scenario.grid.start_index());
                const VertexSelection selection =
                    select_sensors(scenario, problem.spectrum, k, grid);
                const ScenarioOutcome outcome =
                    evaluate(scenario, problem, selection, grid, noise_seed);
                cell.feasible = true;
                cell.status = "ok";
                cell.rmse_mean = outcome.statistics.rmse;
                cell.rmse_stderr = outcome.statistics.stderr_rmse;
                cell.condition_number = outcome.condition_number;
            } catch (const Error& e) {
                cell.feasible = false;
                cell.status = std::string("infeasible: ") + e.what();
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

SweepReport single_cell_report(const ScenarioOutcome& outcome) {
    SweepReport report;
    report.k_values = {outcome.selection.size()};
    report.t_values = {outcome.grid.count()};
    report.cells.push_back({outcome.selection.size(), outcome.grid.count(), true, "ok",
                            outcome.statistics.rmse, outcome.statistics.stderr_rmse,
                            outcome.condition_number});
    return report;
}

}  // namespace heatgraph
