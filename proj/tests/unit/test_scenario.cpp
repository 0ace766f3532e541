#include "distobs/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "distobs/errors.hpp"
#include "distobs/pipeline.hpp"
#include "doctest.h"

using namespace distobs;
using nlohmann::json;

namespace {

const std::string kScenarioDir = DISTOBS_SCENARIO_DIR;

// The minimal two-agent scenario shown in the README.
json minimal() {
    return json::parse(R"({
        "plant": {"A": [[1, 0], [0, -1]], "channels": [[[1, 0]], [[0, 1]]]},
        "graphs": [[[0, 1], [1, 0]]],
        "switching": {"kind": "dwell", "tau_D": 1.0},
        "lambda": 1.0,
        "lambda_hat": 2.0,
        "g": "auto",
        "horizon": 10.0
    })");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const CheckResult* find_check(const RunReport& r, const std::string& name) {
    for (const auto& c : r.checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("minimal scenario loads") {
    const Scenario s = parse_scenario(minimal());
    CHECK(s.plant.agent_count() == 2);
    CHECK(s.plant.state_dim() == 2);
    CHECK_FALSE(s.gain.has_value());
    CHECK(s.regime() == Regime::Dwell);
    CHECK(s.effective_lambda_hat() == 2.0);
    // Self-loops are added on load.
    CHECK(s.family[0].has_arc(0, 0));
    CHECK(s.family[0].has_arc(1, 1));

    json doc = minimal();
    doc.erase("lambda_hat");
    doc["g"] = 3.5;
    const Scenario t = parse_scenario(doc);
    CHECK(t.effective_lambda_hat() == 2.0);
    REQUIRE(t.gain.has_value());
    CHECK(*t.gain == 3.5);

    const Scenario file = load_scenario(kScenarioDir + "/running_example.json");
    CHECK(file.plant.agent_count() == 2);
}

TEST_CASE("scenario errors") {
    json missing = minimal();
    missing.erase("lambda");
    CHECK_THROWS_AS(parse_scenario(missing), ParseError);

    json mistyped = minimal();
    mistyped["plant"]["A"] = "identity";
    try {
        parse_scenario(mistyped);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("plant.A") != std::string::npos);
    }

    json disconnected = minimal();
    disconnected["graphs"] = json::parse(R"([[[0, 1], [1, 0]], [[0, 1]]])");
    try {
        parse_scenario(disconnected);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("graph 1") != std::string::npos);
    }

    json bad_label = minimal();
    bad_label["graphs"] = json::parse(R"([[[0, 2]]])");
    CHECK_THROWS_AS(parse_scenario(bad_label), ValidationError);

    json bad_kind = minimal();
    bad_kind["switching"] = json{{"kind", "sometimes"}};
    CHECK_THROWS_AS(parse_scenario(bad_kind), ParseError);

    json bad_gain = minimal();
    bad_gain["g"] = "large";
    CHECK_THROWS_AS(parse_scenario(bad_gain), ParseError);

    json bad_rates = minimal();
    bad_rates["lambda_hat"] = 0.5;
    CHECK_THROWS_AS(parse_scenario(bad_rates), ValidationError);

    const auto path = std::filesystem::temp_directory_path() / "distobs_broken.json";
    {
        std::ofstream out(path);
        out << "{\n  \"plant\": \n";
    }
    CHECK_THROWS_AS(load_scenario(path.string()), ParseError);
    CHECK_THROWS_AS(load_scenario((std::filesystem::temp_directory_path() / "no_such_scenario.json").string()),
                    ParseError);
}

TEST_CASE("explicit and generated signals") {
    json doc = minimal();
    doc["graphs"] = json::parse(R"([[[0, 1], [1, 0]], [[0, 1], [1, 0]]])");
    doc["switching"] = json::parse(R"({"switch_times": [1.0, 2.5], "values": [0, 1, 0]})");
    const Scenario s = parse_scenario(doc);
    const SwitchingSignal sig = realize_signal(s);
    CHECK(sig.switch_times() == std::vector<double>{1.0, 2.5});
    CHECK(sig.horizon() == 10.0);
    CHECK(scenario_tau_D(s, sig) == doctest::Approx(1.0));

    doc["switching"] = json::parse(R"({"kind": "average_dwell", "tau_D": 1.0, "N0": 3, "seed": 4})");
    const Scenario a = parse_scenario(doc);
    CHECK(a.regime() == Regime::AverageDwell);
    const SwitchingSignal sa = realize_signal(a);
    CHECK(validate_average_dwell(sa, 1.0, 3.0));
    CHECK_FALSE(validate_dwell(sa, 1.0));

    doc["switching"] = json::parse(R"({"kind": "arbitrary", "gap_steps": 2})");
    const Scenario f = parse_scenario(doc);
    CHECK(f.regime() == Regime::Arbitrary);
    CHECK(realize_signal(f, 0.01).shortest_piece() == doctest::Approx(0.02));

    doc["switching"] = json::parse(R"({"switch_times": [1.0], "values": [0, 2]})");
    CHECK_THROWS_AS(parse_scenario(doc), ValidationError);
}

TEST_CASE("pipeline on the running example") {
    const Scenario s = load_scenario(kScenarioDir + "/running_example.json");
    const RunReport r = run(s);
    CHECK(r.passed());
    CHECK(r.exit_code() == 0);
    CHECK(r.auto_gain);
    CHECK(r.certificate.g_min == doctest::Approx(2.0 / 0.475));
    CHECK(r.gain >= 4.0);
    REQUIRE(r.aggregate_rate.has_value());
    CHECK(r.aggregate_rate->lambda_fit >= 0.95);
    CHECK(r.summary_line().rfind("SUMMARY status=PASS", 0) == 0);

    const RunReport dry = analyze(s);
    CHECK_FALSE(dry.simulated);
    CHECK(dry.passed());
}

TEST_CASE("under-gained run reports the failed rate check") {
    Scenario s = load_scenario(kScenarioDir + "/running_example.json");
    const double g_min = analyze(s).certificate.g_min;
    s.gain = 0.05 * g_min;
    const RunReport r = run(s);
    CHECK_FALSE(r.passed());
    CHECK(r.exit_code() == 1);
    const CheckResult* rate = find_check(r, "rate");
    REQUIRE(rate != nullptr);
    CHECK_FALSE(rate->pass);
    CHECK(rate->measured < 0.95);
    const json doc = r.to_json();
    CHECK(doc["status"] == "FAIL");
    bool listed = false;
    for (const auto& f : doc["failures"]) listed = listed || f["name"] == "rate";
    CHECK(listed);
    CHECK(r.summary_line().find("failed=rate") != std::string::npos);
}

TEST_CASE("doubly stochastic scenario evaluates the certificate") {
    const RunReport r = run(load_scenario(kScenarioDir + "/doubly_stochastic.json"));
    REQUIRE(r.ds_certificate.has_value());
    CHECK(r.ds_certificate->certified());
    REQUIRE(r.ds_threshold.has_value());
    CHECK(r.gain > *r.ds_threshold);
    CHECK(r.regime == Regime::Arbitrary);
    CHECK(r.passed());
}

TEST_CASE("reports are deterministic") {
    const auto base = std::filesystem::temp_directory_path() / "distobs_determinism";
    std::filesystem::remove_all(base);
    const Scenario s = load_scenario(kScenarioDir + "/average_dwell.json");
    run(s, (base / "a").string());
    run(s, (base / "b").string());
    const std::string a = read_file(base / "a" / "report.json");
    CHECK_FALSE(a.empty());
    CHECK(a == read_file(base / "b" / "report.json"));
    CHECK(read_file(base / "a" / "errors.csv") == read_file(base / "b" / "errors.csv"));
    std::filesystem::remove_all(base);
}
