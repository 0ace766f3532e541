#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "distobs/network.hpp"
#include "distobs/plant.hpp"
#include "distobs/switching.hpp"

namespace distobs {

/// How the switching signal of a scenario is obtained.
struct SwitchingSpec {
    enum class Kind { Explicit, Constant, Dwell, AverageDwell, FixedGap };
    Kind kind = Kind::Constant;

    std::vector<double> switch_times;  // Explicit
    std::vector<int> values;           // Explicit
    int value = 0;                     // Constant
    std::optional<double> tau_D;       // Dwell, AverageDwell; optional for Explicit
    std::optional<double> N0;          // AverageDwell; optional for Explicit
    std::optional<double> gap;         // FixedGap, absolute
    std::optional<double> gap_steps;   // FixedGap, in integration steps
    std::optional<std::uint64_t> seed;
};

/// Which stability argument a run is certified against.
enum class Regime { Dwell, AverageDwell, Arbitrary };

std::string to_string(Regime regime);

struct Scenario {
    Scenario(Plant plant_, GraphFamily family_, SwitchingSpec switching_)
        : plant(std::move(plant_)), family(std::move(family_)), switching(std::move(switching_)) {}

    Plant plant;
    GraphFamily family;
    SwitchingSpec switching;
    double lambda = 1.0;
    std::optional<double> lambda_hat;  // defaults to lambda + 1
    std::optional<double> gain;        // empty means "auto"
    double gain_margin = 1.2;
    std::optional<double> step;
    double horizon = 10.0;
    std::uint64_t seed = 0;
    std::optional<Vector> x0;
    std::optional<std::vector<Vector>> xhat0;
    double slack = 0.05;

    double effective_lambda_hat() const { return lambda_hat.value_or(lambda + 1.0); }
    Regime regime() const;
};

/// Parses and validates a scenario document. Self-loops are added to every
/// graph; generator descriptors are kept unexpanded. ParseError for missing
/// or mistyped fields, ValidationError for inconsistent content.
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads a JSON scenario file. Syntax errors surface as ParseError with the
/// line and column reported by the JSON reader.
Scenario load_scenario(const std::string& path);

/// Expands the switching spec into a concrete signal. `step` is only used by
/// fixed-gap specs given in integration steps.
SwitchingSignal realize_signal(const Scenario& scenario, std::optional<double> step = std::nullopt);

/// Dwell time read off the scenario: the descriptor's tau_D, or for an
/// explicit signal without one, its shortest gap (t_0 = 0 included).
double scenario_tau_D(const Scenario& scenario, const SwitchingSignal& signal);

}  // namespace distobs
