// runner.hpp — executes scenario tasks, compares the closed-form engines
// against the oracle and the sampler, and emits CSV plus a JSON run report.

#pragma once

#include "fermijump/scenario.hpp"

namespace fermijump {

struct RunOptions {
    std::string out_dir = "out";
    std::optional<double> tolerance;   // overrides the scenario tolerance
    int threads = 1;
};

struct TaskReport {
    std::string task;
    bool pass = false;
    bool compared = false;             // true when residuals are meaningful
    double max_abs_residual = 0.0;
    double frob_residual = 0.0;
    double tolerance = 0.0;
    double elapsed_s = 0.0;
    std::vector<std::string> outputs;  // files written under out_dir
    std::vector<std::string> notes;    // per-check residual lines
    std::string error;                 // nonempty when the task failed to run
};

struct RunReport {
    std::string tool_version;
    bool all_pass = true;
    double total_elapsed_s = 0.0;
    std::vector<TaskReport> tasks;
    std::string rng_metadata;          // JSON fragment from sampling tasks

    std::string to_json(const Scenario& s) const;
};

// Runs the given tasks sequentially (reproducible logs). CSV outputs and
// report.json land in opt.out_dir. Engine errors are captured per task; a
// task error or a failed comparison clears all_pass.
RunReport run(const Scenario& s, const std::vector<TaskKind>& tasks, const RunOptions& opt);

} // namespace fermijump
