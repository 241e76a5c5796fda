// scenario.hpp — run descriptions: modes, channels, initial state, time grid,
// requested tasks. Parsed from the JSON schema documented in the README;
// parse errors carry the offending field path.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fermijump/oracle.hpp"

namespace fermijump {

enum class TaskKind { Moments, Correlate, OracleCompare, Sample, Validate };

std::string task_name(TaskKind task);
TaskKind task_from_name(const std::string& name);

// One channel: explicit generator matrix, or {seed, scale} for a random one.
struct ChannelSpec {
    double rate = 1.0;
    std::optional<Matrix> h;
    std::optional<std::uint64_t> seed;
    double scale = 1.0;
};

struct InitialStateSpec {
    enum class Kind { Vacuum, Basis, Pure, Mixed, RandomPure };
    Kind kind = Kind::Vacuum;
    int basis_index = 0;          // Basis
    Vector amplitudes;            // Pure
    Matrix rho;                   // Mixed
    std::uint64_t seed = 0;       // RandomPure
};

struct GridSpec {
    double t_max = 1.0;
    int steps = 1;   // yields steps+1 points 0, t_max/steps, ..., t_max
};

struct SamplingSpec {
    int trajectories = 1000;
    std::uint64_t seed = 1;
};

struct Scenario {
    int schema_version = 1;
    int n = 1;
    int order = 1;
    std::vector<ChannelSpec> channels;
    InitialStateSpec initial_state;
    std::vector<std::vector<double>> time_points;  // each of length 1 or order
    std::optional<GridSpec> grid;
    std::vector<TaskKind> tasks;
    double tolerance = 1e-8;
    SamplingSpec sampling;
    std::optional<std::size_t> matrix_entry_cap;
    std::optional<std::size_t> moment_row_cap;
};

Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<memory>");
Scenario parse_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// Resolves channel specs into validated channels; constraint failures name
// the 1-based channel index.
ChannelSet build_channels(const Scenario& s);

DensityState build_initial_state(const Scenario& s);

// Single times (grid or length-1 points) for moments/sample and single-time
// oracle comparison.
std::vector<double> single_times(const Scenario& s);

// Length-order tuples for correlation tasks; empty when the scenario only
// carries single times.
std::vector<TimePoints> correlation_times(const Scenario& s);

} // namespace fermijump
