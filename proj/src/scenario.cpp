#include "distobs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "distobs/errors.hpp"

namespace distobs {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ParseError("field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) field_error(path + key, "missing");
    return obj.at(key);
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) field_error(field, "expected a number");
    return v.get<double>();
}

std::uint64_t as_seed(const json& v, const std::string& field) {
    if (!v.is_number_integer() || v.get<long long>() < 0) field_error(field, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

Vector as_vector(const json& v, const std::string& field) {
    if (!v.is_array()) field_error(field, "expected an array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = as_number(v[i], field + "[" + std::to_string(i) + "]");
    }
    return out;
}

// Row-major nested arrays; all rows must have the same length.
Matrix as_matrix(const json& v, const std::string& field) {
    if (!v.is_array()) field_error(field, "expected a nested array (rows)");
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    if (rows > 0) {
        if (!v[0].is_array()) field_error(field, "expected a nested array (rows)");
        cols = v[0].size();
    }
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string row_field = field + "[" + std::to_string(r) + "]";
        if (!v[r].is_array() || v[r].size() != cols) field_error(row_field, "ragged row");
        for (std::size_t c = 0; c < cols; ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                as_number(v[r][c], row_field + "[" + std::to_string(c) + "]");
        }
    }
    return out;
}

SwitchingSpec parse_switching(const json& s) {
    const std::string base = "switching.";
    if (!s.is_object()) field_error("switching", "expected an object");
    SwitchingSpec spec;
    auto opt_number = [&](const char* key) -> std::optional<double> {
        if (!s.contains(key)) return std::nullopt;
        return as_number(s.at(key), base + key);
    };
    if (s.contains("seed")) spec.seed = as_seed(s.at("seed"), base + "seed");

    if (s.contains("switch_times") || s.contains("values")) {
        spec.kind = SwitchingSpec::Kind::Explicit;
        const json& times = require(s, "switch_times", base);
        const json& values = require(s, "values", base);
        if (!times.is_array() || !values.is_array()) field_error(base + "switch_times", "expected arrays");
        for (std::size_t i = 0; i < times.size(); ++i) {
            spec.switch_times.push_back(as_number(times[i], base + "switch_times[" + std::to_string(i) + "]"));
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!values[i].is_number_integer()) {
                field_error(base + "values[" + std::to_string(i) + "]", "expected an integer graph index");
            }
            spec.values.push_back(values[i].get<int>());
        }
        spec.tau_D = opt_number("tau_D");
        spec.N0 = opt_number("N0");
        return spec;
    }

    const json& kind = require(s, "kind", base);
    if (!kind.is_string()) field_error(base + "kind", "expected a string");
    const auto k = kind.get<std::string>();
    if (k == "constant") {
        spec.kind = SwitchingSpec::Kind::Constant;
        if (s.contains("value")) {
            if (!s.at("value").is_number_integer()) field_error(base + "value", "expected an integer");
            spec.value = s.at("value").get<int>();
        }
    } else if (k == "dwell") {
        spec.kind = SwitchingSpec::Kind::Dwell;
        spec.tau_D = as_number(require(s, "tau_D", base), base + "tau_D");
    } else if (k == "average_dwell") {
        spec.kind = SwitchingSpec::Kind::AverageDwell;
        spec.tau_D = as_number(require(s, "tau_D", base), base + "tau_D");
        spec.N0 = as_number(require(s, "N0", base), base + "N0");
    } else if (k == "arbitrary") {
        spec.kind = SwitchingSpec::Kind::FixedGap;
        spec.gap = opt_number("gap");
        spec.gap_steps = opt_number("gap_steps");
        if (!spec.gap && !spec.gap_steps) spec.gap_steps = 2.0;
    } else {
        field_error(base + "kind", "unknown kind '" + k + "'");
    }
    return spec;
}

void validate(const Scenario& s) {
    const int m = s.plant.agent_count();
    const int n = s.plant.state_dim();
    if (!(s.lambda > 0.0)) throw ValidationError("lambda must be positive");
    if (s.lambda_hat && !(*s.lambda_hat > s.lambda)) {
        throw ValidationError("lambda_hat must exceed lambda");
    }
    if (!(s.horizon > 0.0)) throw ValidationError("horizon must be positive");
    if (s.gain && !(*s.gain >= 0.0)) throw ValidationError("g must be nonnegative");
    if (!(s.gain_margin > 0.0)) throw ValidationError("g_margin must be positive");
    if (s.step && !(*s.step > 0.0)) throw ValidationError("step must be positive");
    if (!(s.slack >= 0.0 && s.slack < 1.0)) throw ValidationError("slack must lie in [0, 1)");
    for (std::size_t p = 0; p < s.family.size(); ++p) {
        if (s.family[p].vertex_count() != m) {
            throw ValidationError("graph " + std::to_string(p) + " does not have one vertex per channel");
        }
    }
    validate_family(s.family);

    const auto& sw = s.switching;
    const int modes = static_cast<int>(s.family.size());
    auto positive = [](const std::optional<double>& v) { return !v || *v > 0.0; };
    if (!positive(sw.tau_D) || !positive(sw.N0) || !positive(sw.gap) || !positive(sw.gap_steps)) {
        throw ValidationError("switching parameters must be positive");
    }
    if (sw.kind == SwitchingSpec::Kind::Constant && (sw.value < 0 || sw.value >= modes)) {
        throw ValidationError("switching.value " + std::to_string(sw.value) + " is not a graph index");
    }
    if (sw.kind == SwitchingSpec::Kind::Explicit) {
        for (int v : sw.values) {
            if (v < 0 || v >= modes) {
                throw ValidationError("switching value " + std::to_string(v) + " is not a graph index");
            }
        }
        try {
            SwitchingSignal(sw.switch_times, sw.values, s.horizon);
        } catch (const InvalidArgument& e) {
            throw ValidationError(e.what());
        }
    }

    if (s.x0 && s.x0->size() != n) throw ValidationError("initial.x0 must have n entries");
    if (s.xhat0) {
        if (static_cast<int>(s.xhat0->size()) != m) throw ValidationError("initial.xhat0 needs one vector per agent");
        for (const auto& v : *s.xhat0) {
            if (v.size() != n) throw ValidationError("initial.xhat0 entries must have n entries");
        }
    }
}

}  // namespace

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::Dwell: return "dwell";
        case Regime::AverageDwell: return "average_dwell";
        case Regime::Arbitrary: return "arbitrary";
    }
    return "unknown";
}

Regime Scenario::regime() const {
    switch (switching.kind) {
        case SwitchingSpec::Kind::AverageDwell: return Regime::AverageDwell;
        case SwitchingSpec::Kind::FixedGap: return Regime::Arbitrary;
        case SwitchingSpec::Kind::Explicit: return switching.N0 ? Regime::AverageDwell : Regime::Dwell;
        default: return Regime::Dwell;
    }
}

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ParseError("scenario: top level must be an object");

    const json& plant_doc = require(doc, "plant", "");
    Matrix A = as_matrix(require(plant_doc, "A", "plant."), "plant.A");
    const json& channels_doc = require(plant_doc, "channels", "plant.");
    if (!channels_doc.is_array()) field_error("plant.channels", "expected a list of matrices");
    std::vector<Matrix> channels;
    for (std::size_t i = 0; i < channels_doc.size(); ++i) {
        channels.push_back(as_matrix(channels_doc[i], "plant.channels[" + std::to_string(i) + "]"));
    }
    std::optional<Plant> plant;
    try {
        plant.emplace(std::move(A), std::move(channels));
    } catch (const InvalidArgument& e) {
        throw ValidationError(e.what());
    }
    const int m = plant->agent_count();

    const json& graphs_doc = require(doc, "graphs", "");
    if (!graphs_doc.is_array() || graphs_doc.empty()) field_error("graphs", "expected a nonempty list of arc lists");
    GraphFamily family;
    for (std::size_t p = 0; p < graphs_doc.size(); ++p) {
        const std::string field = "graphs[" + std::to_string(p) + "]";
        const json& arcs_doc = graphs_doc[p];
        if (!arcs_doc.is_array()) field_error(field, "expected a list of [j, i] arcs");
        std::vector<std::pair<int, int>> arcs;
        for (std::size_t a = 0; a < arcs_doc.size(); ++a) {
            const json& arc = arcs_doc[a];
            if (!arc.is_array() || arc.size() != 2 || !arc[0].is_number_integer() || !arc[1].is_number_integer()) {
                field_error(field + "[" + std::to_string(a) + "]", "expected [j, i] with integer labels");
            }
            arcs.emplace_back(arc[0].get<int>(), arc[1].get<int>());
        }
        try {
            family.emplace_back(m, arcs);
        } catch (const InvalidArgument& e) {
            throw ValidationError(field + ": " + e.what());
        }
    }

    Scenario s{std::move(*plant), std::move(family), parse_switching(require(doc, "switching", ""))};
    s.lambda = as_number(require(doc, "lambda", ""), "lambda");
    if (doc.contains("lambda_hat")) s.lambda_hat = as_number(doc.at("lambda_hat"), "lambda_hat");
    if (doc.contains("g")) {
        const json& g = doc.at("g");
        if (g.is_string()) {
            if (g.get<std::string>() != "auto") field_error("g", "expected a number or \"auto\"");
        } else {
            s.gain = as_number(g, "g");
        }
    }
    if (doc.contains("g_margin")) s.gain_margin = as_number(doc.at("g_margin"), "g_margin");
    if (doc.contains("step")) s.step = as_number(doc.at("step"), "step");
    s.horizon = as_number(require(doc, "horizon", ""), "horizon");
    if (doc.contains("seed")) s.seed = as_seed(doc.at("seed"), "seed");
    if (doc.contains("slack")) s.slack = as_number(doc.at("slack"), "slack");
    if (doc.contains("initial")) {
        const json& init = doc.at("initial");
        if (!init.is_object()) field_error("initial", "expected an object");
        if (init.contains("x0")) s.x0 = as_vector(init.at("x0"), "initial.x0");
        if (init.contains("xhat0")) {
            const json& xh = init.at("xhat0");
            if (!xh.is_array()) field_error("initial.xhat0", "expected a list of vectors");
            std::vector<Vector> v;
            for (std::size_t i = 0; i < xh.size(); ++i) {
                v.push_back(as_vector(xh[i], "initial.xhat0[" + std::to_string(i) + "]"));
            }
            s.xhat0 = std::move(v);
        }
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_scenario(doc);
}

SwitchingSignal realize_signal(const Scenario& scenario, std::optional<double> step) {
    const auto& sw = scenario.switching;
    const int modes = static_cast<int>(scenario.family.size());
    const std::uint64_t seed = sw.seed.value_or(scenario.seed + 1);
    switch (sw.kind) {
        case SwitchingSpec::Kind::Explicit:
            return SwitchingSignal(sw.switch_times, sw.values, scenario.horizon);
        case SwitchingSpec::Kind::Constant:
            return SwitchingSignal::constant(sw.value, scenario.horizon);
        case SwitchingSpec::Kind::Dwell:
            return generate_dwell(modes, *sw.tau_D, scenario.horizon, seed);
        case SwitchingSpec::Kind::AverageDwell:
            return generate_average_dwell(modes, *sw.tau_D, *sw.N0, scenario.horizon, seed);
        case SwitchingSpec::Kind::FixedGap: {
            double gap = 0.0;
            if (sw.gap) {
                gap = *sw.gap;
            } else {
                if (!step) throw InvalidArgument("fixed-gap switching in steps needs an integration step");
                gap = *sw.gap_steps * *step;
            }
            return generate_fixed_gap(modes, gap, scenario.horizon, seed);
        }
    }
    throw InvalidArgument("unknown switching kind");
}

double scenario_tau_D(const Scenario& scenario, const SwitchingSignal& signal) {
    const auto& sw = scenario.switching;
    if (sw.tau_D) return *sw.tau_D;
    if (sw.kind == SwitchingSpec::Kind::FixedGap) {
        return signal.switch_times().empty() ? signal.horizon() : signal.switch_times().front();
    }
    double shortest = signal.horizon();
    double prev = 0.0;
    for (double t : signal.switch_times()) {
        shortest = std::min(shortest, t - prev);
        prev = t;
    }
    return shortest;
}

}  // namespace distobs
