#include <doctest.h>

#include <string>

#include "fermijump/scenario.hpp"
#include "test_util.hpp"

using namespace fermijump;

namespace {

const std::string kMinimal = R"({
  "schema_version": 1,
  "n": 1,
  "order": 1,
  "channels": [
    {"rate": 1.0, "generator": {"n": 1, "re": [[0.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}}
  ],
  "initial_state": {"kind": "vacuum"},
  "times": {"grid": {"t_max": 1.0, "steps": 4}},
  "tasks": ["moments", "validate"]
})";

std::string contains(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos ? "" : e.what();
}

} // namespace

TEST_CASE("minimal vacuum scenario parses and validates") {
    const Scenario s = parse_scenario_text(kMinimal);
    CHECK(s.n == 1);
    CHECK(s.order == 1);
    CHECK(s.channels.size() == 1);
    CHECK(s.channels[0].h.has_value());
    CHECK(s.grid.has_value());
    CHECK(s.tasks == std::vector<TaskKind>{TaskKind::Moments, TaskKind::Validate});
    CHECK(s.tolerance == 1e-8);

    const ChannelSet cs = build_channels(s);
    CHECK(cs.n() == 1);
    const DensityState rho0 = build_initial_state(s);
    CHECK(rho0.rho()(0, 0) == Complex{1.0, 0.0});

    CHECK(single_times(s) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("inadmissible generator is rejected naming the channel") {
    // B = i violates the tilde constraint.
    const std::string bad = R"({
      "schema_version": 1,
      "n": 1,
      "order": 1,
      "channels": [
        {"rate": 1.0, "generator": {"n": 1, "re": [[0.0, 0.0], [0.0, 0.0]], "im": [[0.0, 1.0], [-1.0, 0.0]]}}
      ],
      "initial_state": {"kind": "vacuum"},
      "times": {"grid": {"t_max": 1.0, "steps": 1}}
    })";
    try {
        (void)parse_scenario_text(bad);
        FAIL("expected ConstraintError");
    } catch (const ConstraintError& e) {
        CHECK(contains(e, "channel 1") == "");
    }
}

TEST_CASE("schema violations carry the field path") {
    const auto expect_path = [](const std::string& text, const std::string& path) {
        try {
            (void)parse_scenario_text(text);
            FAIL("expected ScenarioParseError for " << path);
        } catch (const ScenarioParseError& e) {
            CHECK(contains(e, path) == "");
        }
    };

    expect_path(R"({"n": 1})", "schema_version");
    expect_path(R"({"schema_version": 1})", "n");
    expect_path(R"({"schema_version": 1, "n": 9})", "n");
    expect_path(R"({"schema_version": 1, "n": 1, "channels": []})", "channels");
    expect_path(R"({"schema_version": 1, "n": 1, "channels": [{"generator": {"seed": 1}}]})",
                "channels[0].rate");
    expect_path(
        R"({"schema_version": 1, "n": 1,
            "channels": [{"rate": 1.0, "generator": {"n": 1, "re": [[0.0, 0.0]], "im": [[0.0, 0.0]]}}]})",
        "channels[0].generator.re");
    expect_path(
        R"({"schema_version": 1, "n": 1,
            "channels": [{"rate": 1.0, "generator": {"seed": 1}}],
            "initial_state": {"kind": "nonsense"},
            "times": {"grid": {"t_max": 1.0, "steps": 1}}})",
        "initial_state.kind");
    expect_path(
        R"({"schema_version": 1, "n": 1,
            "channels": [{"rate": 1.0, "generator": {"seed": 1}}],
            "initial_state": {"kind": "basis", "index": 5},
            "times": {"grid": {"t_max": 1.0, "steps": 1}}})",
        "initial_state.index");
    expect_path(
        R"({"schema_version": 1, "n": 1,
            "channels": [{"rate": 1.0, "generator": {"seed": 1}}],
            "initial_state": {"kind": "vacuum"},
            "times": {}})",
        "times");
    expect_path(
        R"({"schema_version": 1, "n": 1, "order": 2,
            "channels": [{"rate": 1.0, "generator": {"seed": 1}}],
            "initial_state": {"kind": "vacuum"},
            "times": {"points": [[0.9, 0.3]]}})",
        "times.points[0]");
    expect_path(
        R"({"schema_version": 1, "n": 1,
            "channels": [{"rate": 1.0, "generator": {"seed": 1}}],
            "initial_state": {"kind": "vacuum"},
            "times": {"grid": {"t_max": 1.0, "steps": 1}},
            "tasks": ["frobnicate"]})",
        "tasks");
    expect_path("not json at all", "<memory>");
}

TEST_CASE("serialize-parse round trip is a fixpoint") {
    const std::string full = R"({
      "schema_version": 1,
      "n": 2,
      "order": 2,
      "channels": [
        {"rate": 0.8, "generator": {"seed": 17, "scale": 0.8}},
        {"rate": 1.2, "generator": {"n": 2,
          "re": [[0.0, 0.0, 0.5, 0.0], [0.0, 0.0, 0.0, 0.25], [-0.5, 0.0, 0.0, 0.0], [0.0, -0.25, 0.0, 0.0]],
          "im": [[0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]]}}
      ],
      "initial_state": {"kind": "random_pure", "seed": 5},
      "times": {"points": [[0.3, 0.9], [0.5, 0.5]]},
      "tasks": ["correlate", "oracle-compare"],
      "tolerance": 1e-9,
      "sampling": {"trajectories": 2000, "seed": 99}
    })";
    const Scenario once = parse_scenario_text(full);
    const std::string serialized = serialize_scenario(once);
    const Scenario twice = parse_scenario_text(serialized);
    CHECK(serialize_scenario(twice) == serialized);
    CHECK(twice.n == once.n);
    CHECK(twice.order == once.order);
    CHECK(twice.time_points == once.time_points);
    CHECK(twice.tolerance == once.tolerance);
    CHECK(frob_dist(*twice.channels[1].h, *once.channels[1].h) == 0.0);
}

TEST_CASE("initial state builders") {
    Scenario s = parse_scenario_text(kMinimal);

    s.initial_state.kind = InitialStateSpec::Kind::Basis;
    s.initial_state.basis_index = 1;
    CHECK(build_initial_state(s).rho()(1, 1) == Complex{1.0, 0.0});

    s.initial_state.kind = InitialStateSpec::Kind::Pure;
    s.initial_state.amplitudes = Vector(2);
    s.initial_state.amplitudes << Complex{3.0, 0.0}, Complex{0.0, 3.0};
    const Matrix rho = build_initial_state(s).rho();
    CHECK(std::abs(rho(0, 0) - Complex{0.5, 0.0}) < 1e-15);   // normalized
    CHECK(std::abs(rho(0, 1) - Complex{0.0, -0.5}) < 1e-15);

    s.initial_state.kind = InitialStateSpec::Kind::RandomPure;
    s.initial_state.seed = 12;
    const Matrix a = build_initial_state(s).rho();
    const Matrix b = build_initial_state(s).rho();
    CHECK(frob_dist(a, b) == 0.0);
    CHECK(std::abs(a.trace() - Complex{1.0, 0.0}) < 1e-12);

    s.initial_state.kind = InitialStateSpec::Kind::Mixed;
    s.initial_state.rho = Matrix::Identity(2, 2);   // trace 2
    CHECK_THROWS_AS((void)build_initial_state(s), StateValidationError);
}

TEST_CASE("time helpers split single times and tuples") {
    const std::string text = R"({
      "schema_version": 1,
      "n": 1,
      "order": 2,
      "channels": [{"rate": 1.0, "generator": {"seed": 3, "scale": 0.5}}],
      "initial_state": {"kind": "vacuum"},
      "times": {"points": [[0.4], [0.3, 0.9], [1.0]]}
    })";
    const Scenario s = parse_scenario_text(text);
    CHECK(single_times(s) == std::vector<double>{0.4, 1.0});
    const auto tuples = correlation_times(s);
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].values() == std::vector<double>{0.3, 0.9});
}

TEST_CASE("scenario files load from disk") {
    const Scenario s = parse_scenario(std::string(FERMIJUMP_SCENARIO_DIR) + "/m2_k2_compare.json");
    CHECK(s.n == 2);
    CHECK(s.order == 2);
    CHECK(s.channels.size() == 2);
    CHECK_THROWS_AS((void)parse_scenario("/nonexistent/scenario.json"), ScenarioParseError);
}
