#include "heatgraph/error.hpp"
#include "heatgraph/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

namespace heatgraph {

using nlohmann::json;

namespace {

std::string format_number(double value) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(std::numeric_limits<double>::max_digits10);
    out << value;
    return out.str();
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

// JSON has no infinities; they are written as strings.
json number_to_json(double value) {
    if (std::isfinite(value)) return value;
    if (std::isnan(value)) return "nan";
    return value > 0 ? "inf" : "-inf";
}

double number_from_json(const json& value) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const auto text = value.get<std::string>();
        if (text == "inf") return std::numeric_limits<double>::infinity();
        if (text == "-inf") return -std::numeric_limits<double>::infinity();
        if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ValidationError("report: expected a number");
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw ValidationError("unknown report format '" + std::string(name) + "'");
}

std::string report_to_csv(const SweepReport& report) {
    std::string out = "k,t,rmse_mean,rmse_stderr,condition_number,status\n";
    for (const SweepCell& cell : report.cells) {
        out += std::to_string(cell.k) + ',' + std::to_string(cell.t) + ',';
        if (cell.feasible) {
            out += format_number(cell.rmse_mean) + ',' + format_number(cell.rmse_stderr) + ',' +
                   format_number(cell.condition_number);
        } else {
            out += ",,";
        }
        out += ',' + csv_field(cell.status) + '\n';
    }
    return out;
}

json report_to_json(const SweepReport& report) {
    json cells = json::array();
    for (const SweepCell& cell : report.cells) {
        cells.push_back({{"k", cell.k},
                         {"t", cell.t},
                         {"feasible", cell.feasible},
                         {"status", cell.status},
                         {"rmse_mean", number_to_json(cell.rmse_mean)},
                         {"rmse_stderr", number_to_json(cell.rmse_stderr)},
                         {"condition_number", number_to_json(cell.condition_number)}});
    }
    return {{"k_values", report.k_values},
            {"t_values", report.t_values},
            {"rmse_definition", report.rmse_definition},
            {"cells", std::move(cells)}};
}

SweepReport report_from_json(const json& value) {
    try {
        SweepReport report;
        report.k_values = value.at("k_values").get<std::vector<int>>();
        report.t_values = value.at("t_values").get<std::vector<int>>();
        report.rmse_definition = value.at("rmse_definition").get<std::string>();
        for (const json& cell : value.at("cells")) {
            report.cells.push_back({cell.at("k").get<int>(), cell.at("t").get<int>(),
                                    cell.at("feasible").get<bool>(),
                                    cell.at("status").get<std::string>(),
                                    number_from_json(cell.at("rmse_mean")),
                                    number_from_json(cell.at("rmse_stderr")),
                                    number_from_json(cell.at("condition_number"))});
        }
        return report;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report: ") + e.what());
    }
}

void emit_report(const SweepReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    if (format == ReportFormat::csv) {
        out << report_to_csv(report);
    } else {
        out << report_to_json(report).dump(2) << '\n';
    }
}

}  // namespace heatgraph
