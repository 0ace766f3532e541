#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "distobs/gaincert.hpp"
#include "distobs/scenario.hpp"
#include "distobs/simulate.hpp"

namespace distobs {

/// Required fraction of the target rate for the empirical rate check.
inline constexpr double kRateTolerance = 0.95;

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double required = 0.0;
    std::string detail;
};

struct GraphFlags {
    bool strongly_connected = false;
    bool doubly_stochastic = false;
};

struct RunReport {
    bool jointly_observable = false;
    std::vector<GraphFlags> graphs;
    Regime regime = Regime::Dwell;
    double tau_D = 0.0;
    std::optional<double> N0;
    double lambda = 0.0;
    double lambda_hat = 0.0;
    std::vector<int> unobservable_dims;

    GainCertificate certificate;
    double c_hat = 0.0;
    double gain = 0.0;
    bool auto_gain = false;
    std::optional<DoublyStochasticCertificate> ds_certificate;
    std::optional<double> ds_threshold;

    double step = 0.0;
    int switch_count = 0;
    bool simulated = false;
    std::optional<RateEstimate> aggregate_rate;
    std::vector<std::optional<RateEstimate>> agent_rates;

    std::vector<CheckResult> checks;

    bool passed() const;
    /// 0 when every check passes, 1 otherwise.
    int exit_code() const;
    std::vector<CheckResult> failures() const;

    /// Stable key set; contains no timestamps, so equal inputs give equal bytes.
    nlohmann::json to_json() const;
    /// One line: "SUMMARY status=... key=value ..." for batch harvesting.
    std::string summary_line() const;
};

/// Design, certificate and structural invariant checks; no integration.
RunReport analyze(const Scenario& scenario);

/// Full pipeline. When out_dir is nonempty, writes report.json and
/// errors.csv there (the directory is created if needed).
RunReport run(const Scenario& scenario, const std::string& out_dir = "");

void write_report(const RunReport& report, const std::string& path);

}  // namespace distobs
