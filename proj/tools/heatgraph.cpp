// heatgraph: simulate heat diffusion on graphs and recover its sources from
// sparse sensor samples.
//
// Exit codes: 0 success, 1 invalid input, 2 infeasible or rank-deficient
// configuration.

#include "heatgraph/error.hpp"
#include "heatgraph/experiment.hpp"
#include "heatgraph/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace heatgraph;

constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

std::string csv_or_json(const SweepReport& report, ReportFormat format) {
    return format == ReportFormat::csv ? report_to_csv(report)
                                       : report_to_json(report).dump(2) + "\n";
}

std::vector<double> parse_cavity(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("cavity must be four comma-separated numbers");
        }
    }
    if (values.size() != 4) throw ValidationError("cavity must be x0,y0,x1,y1");
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat diffusion on graphs: simulation and source recovery"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string format_name = "json";

    auto* run = app.add_subcommand("run", "Run one scenario and report the recovery");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_path, "Output file (stdout if omitted)");
    run->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::vector<int> k_values;
    std::vector<int> t_values;
    std::string sweep_format = "csv";
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo RMSE over a grid of K and T");
    sweep->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sweep->add_option("--k", k_values, "Sensor counts, comma separated")
        ->delimiter(',')
        ->required();
    sweep->add_option("--t", t_values, "Sample counts, comma separated (default: scenario T)")
        ->delimiter(',');
    sweep->add_option("--out", out_path, "Output file (stdout if omitted)");
    sweep->add_option("--format", sweep_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* mesh = app.add_subcommand("mesh", "Mesh utilities");
    mesh->require_subcommand(1);
    PlateParameters plate;
    std::string cavity_text;
    auto* gen = mesh->add_subcommand("gen", "Generate a rectangular plate with a cavity");
    gen->add_option("--nx", plate.nx, "Cells along x")->required();
    gen->add_option("--ny", plate.ny, "Cells along y")->required();
    gen->add_option("--width", plate.width, "Plate width")->capture_default_str();
    gen->add_option("--height", plate.height, "Plate height")->capture_default_str();
    gen->add_option("--cavity", cavity_text, "x0,y0,x1,y1 (omit for a solid plate)");
    gen->add_option("--out", out_path, "Mesh JSON file")->required();

    int sensor_count = 0;
    std::string objective_name = "max_min_singular";
    auto* select = app.add_subcommand("select", "Greedy sensor selection");
    select->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    select->add_option("--k", sensor_count, "Number of sensors")->required();
    select->add_option("--objective", objective_name, "min_condition or max_min_singular")
        ->check(CLI::IsMember({"min_condition", "max_min_singular"}));
    select->add_option("--out", out_path, "Output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*run) {
            const Scenario scenario = load_scenario(scenario_path);
            const ScenarioOutcome outcome = run_scenario(scenario);
            const ReportFormat format = parse_report_format(format_name);
            write_text(out_path, format == ReportFormat::json
                                     ? outcome_to_json(outcome).dump(2) + "\n"
                                     : report_to_csv(single_cell_report(outcome)));
        } else if (*sweep) {
            const Scenario scenario = load_scenario(scenario_path);
            if (t_values.empty()) t_values = {scenario.grid.count()};
            const SweepReport report = rmse_sweep(scenario, k_values, t_values);
            write_text(out_path, csv_or_json(report, parse_report_format(sweep_format)));
        } else if (*gen) {
            if (cavity_text.empty()) {
                plate.cavity.reset();
            } else {
                const auto c = parse_cavity(cavity_text);
                plate.cavity = Rectangle{c[0], c[1], c[2], c[3]};
            }
            save_mesh(generate_plate_with_cavity(plate), out_path);
        } else if (*select) {
            const Scenario scenario = load_scenario(scenario_path);
            const Problem problem = build_problem(scenario);
            const VertexSelection selection =
                greedy_sensor_selection(problem.spectrum, scenario.grid, sensor_count,
                                        parse_selection_objective(objective_name));
            write_text(out_path, selection_to_json(selection).dump() + "\n");
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "heatgraph: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "heatgraph: " << e.what() << '\n';
        return kExitInvalid;
    }
    return 0;
}
