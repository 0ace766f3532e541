#include "distobs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "distobs/design.hpp"
#include "distobs/errors.hpp"

namespace distobs {

using nlohmann::json;

namespace {

constexpr double kBlockTol = 1e-9;
constexpr double kAutonomyTol = 1e-6;
constexpr double kConsistencyTol = 1e-8;
constexpr int kOutputSamples = 5000;

struct Prepared {
    ObserverDesign design;
    SwitchingSignal signal;
    RunReport report;
    double gain;
    double step;
};

bool all_doubly_stochastic(const GraphFamily& family) {
    return std::all_of(family.begin(), family.end(),
                       [](const NeighborGraph& g) { return is_doubly_stochastic(stochastic_matrix(g)); });
}

double auto_step(const ErrorModel& model) {
    const double norm = model.max_mode_norm();
    return norm > 0.0 ? 0.05 / norm : 0.01;
}

// Everything up to (but excluding) integration.
Prepared prepare(const Scenario& s) {
    RunReport r;
    r.jointly_observable = is_jointly_observable(s.plant);
    if (!r.jointly_observable) {
        throw NotJointlyObservable("plant is not jointly observable; no distributed observer exists");
    }
    r.lambda = s.lambda;
    r.lambda_hat = s.effective_lambda_hat();
    r.regime = s.regime();
    r.N0 = s.switching.N0;

    ObserverDesign design = build_observer(s.plant, r.lambda_hat, kRankTol, s.seed);
    for (const auto& a : design.agents) r.unobservable_dims.push_back(static_cast<int>(a.V.cols()));
    for (const auto& g : s.family) {
        r.graphs.push_back({is_strongly_connected(g), is_doubly_stochastic(stochastic_matrix(g))});
    }
    const bool ds = all_doubly_stochastic(s.family);
    if (ds) r.ds_threshold = doubly_stochastic_gain_threshold(design, s.family, s.lambda);
    if (r.regime == Regime::Arbitrary && !ds) {
        throw ValidationError("arbitrary switching requires every graph to have a doubly stochastic matrix");
    }

    double gain = 0.0;
    std::optional<SwitchingSignal> signal;
    double step = 0.0;
    if (r.regime == Regime::Arbitrary) {
        gain = s.gain.value_or(s.gain_margin * *r.ds_threshold);
        step = s.step.value_or(auto_step(ErrorModel(design, s.family, gain)));
        signal = realize_signal(s, step);
        r.tau_D = scenario_tau_D(s, *signal);
        r.certificate = certify(design, s.family, s.lambda, r.tau_D, s.slack);
    } else {
        signal = realize_signal(s);
        r.tau_D = scenario_tau_D(s, *signal);
        r.certificate = certify(design, s.family, s.lambda, r.tau_D, s.slack);
        gain = s.gain.value_or(s.gain_margin * r.certificate.g_min);
        const ErrorModel model(design, s.family, gain);
        step = s.step.value_or(default_step(model, *signal));
    }
    r.auto_gain = !s.gain.has_value();
    r.gain = gain;
    r.step = step;
    r.switch_count = static_cast<int>(signal->switch_times().size());
    if (ds) r.ds_certificate = doubly_stochastic_certificate(design, s.family, gain, s.lambda);
    return Prepared{std::move(design), std::move(*signal), std::move(r), gain, step};
}

void structural_checks(const Prepared& prep, const Scenario& s, RunReport& r, const ErrorModel& model) {
    const double tol = kBlockTol * (1.0 + model.max_mode_norm());
    const double residual = model.max_block_residual();
    r.checks.push_back({"block_structure", residual <= tol, residual, tol,
                        "upper-right block of H M(p) H' over all modes"});

    if (r.regime == Regime::Arbitrary) {
        const auto& ds = *r.ds_certificate;
        const double worst = *std::max_element(ds.max_eigenvalue.begin(), ds.max_eigenvalue.end());
        r.checks.push_back({"gain_certificate", ds.certified(), worst, 0.0,
                            "max eigenvalue of (lambda I + A_V(p)) + (lambda I + A_V(p))' must be negative"});
    } else {
        r.checks.push_back({"gain_certificate", prep.gain >= r.certificate.g_min, prep.gain,
                            r.certificate.g_min, "g must be at least g_min"});
    }

    double c_bound = r.certificate.c;
    if (r.regime == Regime::AverageDwell) c_bound = std::pow(r.certificate.c, r.N0.value_or(1.0));
    if (r.regime == Regime::Arbitrary) c_bound = 1.0;
    const BoundReport bound = verify_switched_bound(model, prep.signal, s.lambda, c_bound);
    r.checks.push_back({"transition_bound", bound.pass, bound.max_violation, 1.0,
                        "max ||Phi_V(t,tau)|| / (c exp(-lambda (t - tau))) over sampled pairs"});
}

Vector random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

}  // namespace

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

int RunReport::exit_code() const { return passed() ? 0 : 1; }

std::vector<CheckResult> RunReport::failures() const {
    std::vector<CheckResult> out;
    for (const auto& c : checks) {
        if (!c.pass) out.push_back(c);
    }
    return out;
}

namespace {

json rate_json(const std::optional<RateEstimate>& r) {
    if (!r) return nullptr;
    return {{"lambda_fit", r->lambda_fit}, {"r_squared", r->r_squared}, {"t_start", r->t_start},
            {"t_end", r->t_end}, {"samples", r->samples}};
}

json check_json(const CheckResult& c) {
    return {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"required", c.required},
            {"detail", c.detail}};
}

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

json RunReport::to_json() const {
    json graphs_doc = json::array();
    for (std::size_t p = 0; p < graphs.size(); ++p) {
        graphs_doc.push_back({{"index", p},
                              {"strongly_connected", graphs[p].strongly_connected},
                              {"doubly_stochastic", graphs[p].doubly_stochastic}});
    }
    json per_mode = json::array();
    for (const auto& e : certificate.per_mode) {
        per_mode.push_back({{"c", e.c}, {"lambda", finite_or_null(e.lambda)}});
    }
    json cert = {{"per_mode", per_mode},
                 {"c", certificate.c},
                 {"lambda_star", finite_or_null(certificate.lambda_star)},
                 {"b", certificate.b},
                 {"c_hat", c_hat},
                 {"tau_D", certificate.tau_D},
                 {"g_min", certificate.g_min},
                 {"g", gain},
                 {"g_auto", auto_gain},
                 {"rate_condition_holds", certificate.rate_condition_holds(gain)}};
    json ds = nullptr;
    if (ds_certificate) {
        json eigs = json::array();
        for (double v : ds_certificate->max_eigenvalue) eigs.push_back(finite_or_null(v));
        ds = {{"certified", ds_certificate->certified()},
              {"max_eigenvalue", eigs},
              {"g_threshold", finite_or_null(ds_threshold.value_or(NAN))}};
    }
    json agents = json::array();
    for (const auto& r : agent_rates) agents.push_back(rate_json(r));
    json checks_doc = json::array();
    for (const auto& c : checks) checks_doc.push_back(check_json(c));
    json failures_doc = json::array();
    for (const auto& c : failures()) failures_doc.push_back(check_json(c));

    return {{"status", passed() ? "PASS" : "FAIL"},
            {"exit_code", exit_code()},
            {"jointly_observable", jointly_observable},
            {"graphs", graphs_doc},
            {"regime", to_string(regime)},
            {"tau_D", tau_D},
            {"N0", N0 ? json(*N0) : json(nullptr)},
            {"lambda", lambda},
            {"lambda_hat", lambda_hat},
            {"unobservable_dims", unobservable_dims},
            {"certificate", cert},
            {"doubly_stochastic_certificate", ds},
            {"step", step},
            {"switch_count", switch_count},
            {"simulated", simulated},
            {"rate", {{"aggregate", rate_json(aggregate_rate)}, {"agents", agents}}},
            {"checks", checks_doc},
            {"failures", failures_doc}};
}

std::string RunReport::summary_line() const {
    std::ostringstream out;
    out << "SUMMARY status=" << (passed() ? "PASS" : "FAIL") << " regime=" << to_string(regime)
        << " lambda=" << lambda << " g=" << gain << " g_min=" << certificate.g_min;
    if (aggregate_rate) {
        out << " lambda_fit=" << aggregate_rate->lambda_fit << " r2=" << aggregate_rate->r_squared;
    }
    for (const auto& f : failures()) out << " failed=" << f.name;
    return out.str();
}

RunReport analyze(const Scenario& scenario) {
    Prepared prep = prepare(scenario);
    const ErrorModel model(prep.design, scenario.family, prep.gain);
    prep.report.c_hat = coupling_bound(model);
    structural_checks(prep, scenario, prep.report, model);
    return prep.report;
}

RunReport run(const Scenario& scenario, const std::string& out_dir) {
    Prepared prep = prepare(scenario);
    RunReport& r = prep.report;
    const ErrorModel model(prep.design, scenario.family, prep.gain);
    r.c_hat = coupling_bound(model);
    structural_checks(prep, scenario, r, model);

    const int n = scenario.plant.state_dim();
    const int m = scenario.plant.agent_count();
    std::mt19937_64 rng(scenario.seed + 2);
    const Vector x0 = scenario.x0.value_or(random_vector(rng, n));
    std::vector<Vector> xhat0;
    if (scenario.xhat0) {
        xhat0 = *scenario.xhat0;
    } else {
        for (int i = 0; i < m; ++i) xhat0.push_back(random_vector(rng, n));
    }
    Vector e0(static_cast<Eigen::Index>(n) * m);
    for (int i = 0; i < m; ++i) e0.segment(static_cast<Eigen::Index>(i) * n, n) = xhat0[static_cast<std::size_t>(i)] - x0;

    SimOptions options;
    options.sample_interval = scenario.horizon / kOutputSamples;
    const Trajectory observer = integrate_observer(scenario.plant, prep.design, scenario.family, prep.signal,
                                                   prep.gain, x0, xhat0, prep.step, options);
    const Trajectory errors = observer_errors(observer, m);
    const Trajectory direct = integrate_error(model, prep.signal, e0, prep.step, options);
    r.simulated = true;

    double mismatch = 0.0;
    double plant_scale = 0.0;
    for (std::size_t k = 0; k < errors.size() && k < direct.size(); ++k) {
        mismatch = std::max(mismatch, (errors.states[k] - direct.states[k]).norm());
        plant_scale = std::max(plant_scale, observer.states[k].head(n).norm());
    }
    const double consistency_tol = kConsistencyTol * (1.0 + plant_scale);
    r.checks.push_back({"observer_consistency", errors.size() == direct.size() && mismatch <= consistency_tol,
                        mismatch, consistency_tol, "max ||(x_i - x) - e_i|| between observer and error runs"});

    // z1 must not depend on the coupling: compare against the uncoupled run.
    const double base_norm = norm2(prep.design.closed_loop);
    const double z_step = base_norm > 0.0 ? std::min(prep.step, 0.05 / base_norm) : prep.step;
    const double deviation = z1_autonomy_check(prep.design, scenario.family, prep.signal,
                                               SwitchingSignal::constant(prep.signal.values().front(), scenario.horizon),
                                               prep.gain, 0.0, e0, z_step);
    const double autonomy_tol = kAutonomyTol * (1.0 + e0.norm());
    r.checks.push_back({"z1_autonomy", deviation <= autonomy_tol, deviation, autonomy_tol,
                        "max ||Q e_a(t) - Q e_b(t)|| between coupled and uncoupled runs"});

    const double required = kRateTolerance * scenario.lambda;
    try {
        r.aggregate_rate = estimate_rate(errors);
        r.checks.push_back({"rate", r.aggregate_rate->lambda_fit >= required, r.aggregate_rate->lambda_fit,
                            required, "fitted decay rate of ||e(t)||"});
    } catch (const DegenerateFit& e) {
        r.checks.push_back({"rate", false, 0.0, required, e.what()});
    }
    for (int i = 0; i < m; ++i) {
        std::optional<RateEstimate> agent_rate;
        try {
            agent_rate = estimate_rate(errors.times, errors.block_norms(i));
        } catch (const DegenerateFit&) {
            // Zero or vanishing initial error for this agent; nothing to fit.
        }
        if (agent_rate && agent_rate->lambda_fit < required) {
            r.checks.push_back({"rate_agent_" + std::to_string(i + 1), false, agent_rate->lambda_fit, required,
                                "fitted decay rate of ||x_i(t) - x(t)||"});
        }
        r.agent_rates.push_back(agent_rate);
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_report(r, (std::filesystem::path(out_dir) / "report.json").string());
        std::ofstream csv(std::filesystem::path(out_dir) / "errors.csv");
        write_error_csv(csv, prep.design, errors);
    }
    return r;
}

void write_report(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report to '" + path + "'");
    out << report.to_json().dump(2) << '\n';
}

}  // namespace distobs
