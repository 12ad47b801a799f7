#include "heatgraph/error.hpp"
#include "heatgraph/experiment.hpp"
#include "heatgraph/io.hpp"

#include <random>
#include <sstream>

namespace heatgraph {

using nlohmann::json;

namespace {

const json& required(const json& object, const char* name) {
    if (!object.is_object() || !object.contains(name)) {
        throw ValidationError(std::string("scenario: missing field '") + name + "'");
    }
    return object.at(name);
}

// Single-key object {"tag": payload}.
std::pair<std::string, const json*> tagged(const json& value, const char* what) {
    if (!value.is_object() || value.size() != 1) {
        throw ValidationError(std::string("scenario: '") + what +
                              "' must be an object with exactly one key");
    }
    return {value.begin().key(), &value.begin().value()};
}

int positive_int(const json& value, const char* what) {
    if (!value.is_number_integer() || value.get<long long>() < 1) {
        throw ValidationError(std::string("scenario: '") + what + "' must be a positive integer");
    }
    return value.get<int>();
}

int vertex_index(const json& value) {
    if (!value.is_number_integer() || value.get<long long>() < 1) {
        throw ValidationError("scenario: vertex indices are 1-based positive integers");
    }
    return value.get<int>() - 1;
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& value) {
    std::filesystem::path path = value.get<std::string>();
    return path.is_relative() && !base.empty() ? base / path : path;
}

GraphSource parse_graph(const json& value, const std::filesystem::path& base) {
    auto [tag, payload] = tagged(value, "graph");
    if (tag == "plate") {
        PlateParameters p;
        p.width = payload->value("width", p.width);
        p.height = payload->value("height", p.height);
        p.nx = payload->value("nx", p.nx);
        p.ny = payload->value("ny", p.ny);
        if (payload->contains("cavity")) {
            const json& c = payload->at("cavity");
            if (c.is_null()) {
                p.cavity.reset();
            } else if (c.is_array() && c.size() == 4) {
                p.cavity = Rectangle{c[0].get<double>(), c[1].get<double>(), c[2].get<double>(),
                                     c[3].get<double>()};
            } else {
                throw ValidationError("scenario: cavity must be [x0, y0, x1, y1] or null");
            }
        }
        return PlateSource{p};
    }
    if (tag == "mesh_file") return MeshFileSource{resolve(base, *payload)};
    if (tag == "graph_file") return GraphFileSource{resolve(base, *payload)};
    throw ValidationError("scenario: unknown graph source '" + tag + "'");
}

SelectionPolicy parse_selection(const json& value) {
    auto [tag, payload] = tagged(value, "selection");
    if (tag == "explicit") {
        if (!payload->is_array() || payload->empty()) {
            throw ValidationError("scenario: explicit selection must be a nonempty array");
        }
        ExplicitSelection out;
        for (const json& v : *payload) out.vertices.push_back(vertex_index(v));
        return out;
    }
    if (tag == "greedy") {
        GreedySelection out;
        out.count = positive_int(required(*payload, "k"), "k");
        if (payload->contains("objective")) {
            out.objective = parse_selection_objective(payload->at("objective").get<std::string>());
        }
        return out;
    }
    if (tag == "random") {
        RandomSelection out;
        out.count = positive_int(required(*payload, "k"), "k");
        out.seed = payload->value("seed", std::uint64_t{0});
        return out;
    }
    throw ValidationError("scenario: unknown selection policy '" + tag + "'");
}

FieldSpec parse_field(const json& value) {
    if (value.is_null()) return std::monostate{};
    auto [tag, payload] = tagged(value, "source");
    if (tag == "sparse") {
        SparseField out;
        for (const json& entry : *payload) {
            if (!entry.is_array() || entry.size() != 2) {
                throw ValidationError("scenario: sparse entries are [vertex, value] pairs");
            }
            out.entries.emplace_back(vertex_index(entry[0]), entry[1].get<double>());
        }
        return out;
    }
    if (tag == "bandlimited") {
        BandlimitedField out;
        out.coefficients = payload->get<std::vector<double>>();
        if (out.coefficients.empty()) {
            throw ValidationError("scenario: bandlimited source needs at least one coefficient");
        }
        return out;
    }
    if (tag == "values") return vector_from_json(*payload);
    throw ValidationError("scenario: unknown source kind '" + tag + "'");
}

OperatorKind parse_model(const std::string& name) {
    if (name == "initial_only") return OperatorKind::initial_only;
    if (name == "input_only") return OperatorKind::input_only;
    if (name == "joint_bandlimited") return OperatorKind::joint_bandlimited;
    throw ValidationError("scenario: unknown model '" + name + "'");
}

Eigen::VectorXd materialise(const FieldSpec& spec, const Spectrum& spectrum, const char* what) {
    const Eigen::Index n = spectrum.size();
    return std::visit(
        [&](const auto& field) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(field)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return Eigen::VectorXd::Zero(n);
            } else if constexpr (std::is_same_v<T, SparseField>) {
                Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
                for (const auto& [vertex, value] : field.entries) {
                    if (vertex >= n) {
                        std::ostringstream msg;
                        msg << what << ": vertex " << vertex + 1 << " out of range [1, " << n << "]";
                        throw ValidationError(msg.str());
                    }
                    out(vertex) += value;
                }
                return out;
            } else if constexpr (std::is_same_v<T, BandlimitedField>) {
                const auto p = static_cast<Eigen::Index>(field.coefficients.size());
                if (p > n) throw ValidationError(std::string(what) + ": bandwidth exceeds N");
                const Eigen::Map<const Eigen::VectorXd> coeffs(field.coefficients.data(), p);
                return spectrum.leading_eigenvectors(p) * coeffs;
            } else {
                if (field.size() != n) {
                    throw ValidationError(std::string(what) + ": expected " + std::to_string(n) +
                                          " values");
                }
                return field;
            }
        },
        spec);
}

bool is_zero(const FieldSpec& spec) { return std::holds_alternative<std::monostate>(spec); }

}  // namespace

Scenario scenario_from_json(const json& value, const std::filesystem::path& base_dir) {
    try {
        Scenario s;
        if (!value.is_object()) throw ValidationError("scenario must be a JSON object");
        s.graph = parse_graph(required(value, "graph"), base_dir);
        const json& grid = required(value, "grid");
        s.grid = TimeGrid(required(grid, "delta").get<double>(),
                          positive_int(required(grid, "count"), "count"),
                          grid.value("start_index", 1));
        s.selection = parse_selection(required(value, "selection"));
        if (value.contains("initial_field")) s.initial_field = parse_field(value.at("initial_field"));
        if (value.contains("input")) s.input = parse_field(value.at("input"));
        if (value.contains("model")) s.model = parse_model(value.at("model").get<std::string>());
        if (value.contains("bandwidth")) {
            s.bandwidth = positive_int(value.at("bandwidth"), "bandwidth");
        }
        if (value.contains("noise")) {
            const json& noise = value.at("noise");
            if (noise.is_object()) {
                s.noise_variance = required(noise, "variance").get<double>();
            } else if (!(noise.is_string() && noise.get<std::string>() == "none") &&
                       !noise.is_null()) {
                throw ValidationError("scenario: noise must be \"none\" or {\"variance\": v}");
            }
        }
        if (!(s.noise_variance >= 0.0)) {
            throw ValidationError("scenario: noise variance must be nonnegative");
        }
        if (value.contains("trials")) s.trials = positive_int(value.at("trials"), "trials");
        if (value.contains("seed")) {
            const json& seed = value.at("seed");
            if (!seed.is_number_unsigned()) {
                throw ValidationError("scenario: seed must be a nonnegative integer");
            }
            s.seed = seed.get<std::uint64_t>();
        }
        if (is_zero(s.initial_field) && is_zero(s.input) && !s.model) {
            throw ValidationError("scenario: no source given; set 'model' explicitly");
        }
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    const json value = read_json_file(path);
    try {
        return scenario_from_json(value, path.parent_path());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Problem build_problem(const Scenario& scenario) {
    std::optional<TriangleMesh> mesh;
    std::optional<Laplacian> laplacian;
    std::visit(
        [&](const auto& source) {
            using T = std::decay_t<decltype(source)>;
            if constexpr (std::is_same_v<T, PlateSource>) {
                mesh = generate_plate_with_cavity(source.parameters);
                laplacian = cotan_laplacian(*mesh);
            } else if constexpr (std::is_same_v<T, MeshFileSource>) {
                mesh = load_mesh(source.path);
                laplacian = cotan_laplacian(*mesh);
            } else {
                laplacian = build_laplacian(load_graph(source.path));
            }
        },
        scenario.graph);

    Spectrum spectrum = eigendecompose(*laplacian);
    SourceConfig sources{materialise(scenario.initial_field, spectrum, "initial_field"),
                         materialise(scenario.input, spectrum, "input")};

    OperatorKind model = OperatorKind::initial_only;
    if (scenario.model) {
        model = *scenario.model;
    } else if (is_zero(scenario.initial_field)) {
        model = OperatorKind::input_only;
    } else if (!is_zero(scenario.input)) {
        model = OperatorKind::joint_bandlimited;
    }

    std::optional<int> bandwidth;
    if (model == OperatorKind::joint_bandlimited) {
        bandwidth = scenario.bandwidth;
        if (!bandwidth) {
            if (const auto* band = std::get_if<BandlimitedField>(&scenario.input)) {
                bandwidth = static_cast<int>(band->coefficients.size());
            }
        }
        if (!bandwidth) {
            throw ValidationError(
                "scenario: joint recovery needs a bandwidth (set 'bandwidth' or use a "
                "bandlimited input)");
        }
    }
    return Problem{std::move(spectrum), std::move(mesh), std::move(sources), model, bandwidth};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finaliser applied to a mix of both inputs.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

namespace {

// Uniform double in (0, 1].
double open_unit(std::mt19937_64& engine) {
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection.
std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    return draw % bound;
}

}  // namespace

Eigen::MatrixXd gaussian_noise(Eigen::Index rows, Eigen::Index cols, double variance,
                               std::uint64_t seed) {
    Eigen::MatrixXd out(rows, cols);
    std::mt19937_64 engine(seed);
    const double scale = std::sqrt(variance);
    constexpr double two_pi = 6.283185307179586476925286766559;
    double* data = out.data();
    const Eigen::Index size = out.size();
    for (Eigen::Index i = 0; i < size; i += 2) {
        const double radius = std::sqrt(-2.0 * std::log(open_unit(engine)));
        const double angle = two_pi * open_unit(engine);
        data[i] = scale * radius * std::cos(angle);
        if (i + 1 < size) data[i + 1] = scale * radius * std::sin(angle);
    }
    return out;
}

VertexSelection select_sensors(const Scenario& scenario, const Spectrum& spectrum, int count,
                               const TimeGrid& grid) {
    const auto n = static_cast<int>(spectrum.size());
    return std::visit(
        [&](const auto& policy) -> VertexSelection {
            using T = std::decay_t<decltype(policy)>;
            if constexpr (std::is_same_v<T, ExplicitSelection>) {
                if (static_cast<int>(policy.vertices.size()) != count) {
                    throw ValidationError("explicit selection has " +
                                          std::to_string(policy.vertices.size()) +
                                          " vertices, requested " + std::to_string(count));
                }
                return VertexSelection(policy.vertices, n);
            } else if constexpr (std::is_same_v<T, GreedySelection>) {
                return greedy_sensor_selection(spectrum, grid, count, policy.objective);
            } else {
                if (count < 1 || count > n) {
                    throw ValidationError("sensor count " + std::to_string(count) +
                                          " outside [1, " + std::to_string(n) + "]");
                }
                std::mt19937_64 engine(derive_seed(policy.seed, static_cast<std::uint64_t>(count)));
                std::vector<int> pool(static_cast<std::size_t>(n));
                for (int v = 0; v < n; ++v) pool[static_cast<std::size_t>(v)] = v;
                for (int r = 0; r < count; ++r) {
                    const auto pick = static_cast<std::size_t>(r) +
                                      bounded(engine, static_cast<std::uint64_t>(n - r));
                    std::swap(pool[static_cast<std::size_t>(r)], pool[pick]);
                }
                pool.resize(static_cast<std::size_t>(count));
                return VertexSelection(std::move(pool), n);
            }
        },
        scenario.selection);
}

}  // namespace heatgraph
