#include "fermijump/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fermijump/sampler.hpp"
#include "fermijump/version.hpp"

namespace fermijump {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct Engines {
    FermionRep rep;
    ChannelSet channels;
    DensityState rho0;
    MomentTensor m0;
};

Engines build_engines(const Scenario& s) {
    FermionRep rep = build_rep(s.n);
    ChannelSet channels = build_channels(s);
    DensityState rho0 = build_initial_state(s);
    MomentTensor m0 = initial_moments(rho0.rho(), rep, s.order);
    return Engines{std::move(rep), std::move(channels), std::move(rho0), std::move(m0)};
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary) {
        if (!out_) throw NumericalFailure("cannot open output file " + path.string());
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

std::vector<std::string> tensor_columns(const std::string& time_head, int order) {
    std::vector<std::string> cols;
    if (time_head == "t") {
        cols.push_back("t");
    } else {
        for (int m = 1; m <= order; ++m) cols.push_back("t_" + std::to_string(m));
    }
    for (int m = 1; m <= order; ++m) cols.push_back("i_" + std::to_string(m));
    cols.push_back("re");
    cols.push_back("im");
    return cols;
}

// Operator indices are written 1-based: 1..n are the annihilators, n+1..2n
// the creators.
void tensor_rows(CsvWriter& csv, const std::vector<std::string>& time_cells,
                 const MomentTensor& tensor) {
    for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
        std::vector<std::string> cells = time_cells;
        for (int idx : moment_multi_index(tensor.n, tensor.order, flat)) {
            cells.push_back(std::to_string(idx + 1));
        }
        const Complex v = tensor.data[static_cast<Eigen::Index>(flat)];
        cells.push_back(fmt(v.real()));
        cells.push_back(fmt(v.imag()));
        csv.row(cells);
    }
}

struct Residual {
    double max_abs = 0.0;
    double frob = 0.0;
};

Residual tensor_residual(const MomentTensor& a, const MomentTensor& b) {
    const Vector diff = a.data - b.data;
    return Residual{diff.cwiseAbs().maxCoeff(), diff.norm()};
}

void run_moments(const Scenario& s, const Engines& eng, const std::filesystem::path& dir,
                 TaskReport& report) {
    const std::vector<double> times = single_times(s);
    if (times.empty()) {
        throw ScenarioParseError("moments task requires a time grid or single-time points");
    }
    CsvWriter csv(dir / "moments.csv", tensor_columns("t", s.order));
    for (double t : times) {
        tensor_rows(csv, {fmt(t)}, propagate_moments(eng.m0, eng.channels, t));
    }
    report.outputs.push_back("moments.csv");
    report.pass = true;
}

void run_correlate(const Scenario& s, const Engines& eng, const std::filesystem::path& dir,
                   TaskReport& report) {
    const std::vector<TimePoints> tuples = correlation_times(s);
    if (tuples.empty()) {
        throw ScenarioParseError("correlate task requires time points of length order=" +
                                 std::to_string(s.order));
    }
    CsvWriter csv(dir / "correlations.csv", tensor_columns("t_m", s.order));
    // Columns t_1..t_M list the nondecreasing time tuple; tensor slot m pairs
    // with time t_{M+1-m}, so row (i_1..i_M) holds <c_{i_1}(t_M)...c_{i_M}(t_1)>.
    for (const TimePoints& times : tuples) {
        std::vector<std::string> time_cells;
        for (double t : times.values()) time_cells.push_back(fmt(t));
        tensor_rows(csv, time_cells, multitime_correlations(eng.m0, eng.channels, times));
    }
    report.outputs.push_back("correlations.csv");
    report.pass = true;
}

void run_oracle_compare(const Scenario& s, const Engines& eng, const std::filesystem::path& dir,
                        double tol, TaskReport& report) {
    const std::vector<double> times = single_times(s);
    const std::vector<TimePoints> tuples = correlation_times(s);
    if (times.empty() && tuples.empty()) {
        throw ScenarioParseError("oracle-compare task requires time points");
    }
    report.compared = true;
    report.tolerance = tol;

    if (!times.empty()) {
        CsvWriter csv(dir / "oracle_compare_moments.csv", tensor_columns("t", s.order));
        for (double t : times) {
            const MomentTensor closed = propagate_moments(eng.m0, eng.channels, t);
            const DensityState rho_t = evolve_density(eng.rho0, eng.channels, eng.rep, t);
            const MomentTensor reference = initial_moments(rho_t.rho(), eng.rep, s.order);
            const Residual r = tensor_residual(closed, reference);
            report.max_abs_residual = std::max(report.max_abs_residual, r.max_abs);
            report.frob_residual = std::max(report.frob_residual, r.frob);
            report.notes.push_back("t=" + fmt_short(t) + " moment residual max-abs " +
                                   fmt_short(r.max_abs) + ", frob " + fmt_short(r.frob));
            tensor_rows(csv, {fmt(t)}, closed);
        }
        report.outputs.push_back("oracle_compare_moments.csv");
    }

    if (!tuples.empty()) {
        CsvWriter csv(dir / "oracle_compare_correlations.csv", tensor_columns("t_m", s.order));
        for (const TimePoints& tp : tuples) {
            const MomentTensor closed = multitime_correlations(eng.m0, eng.channels, tp);
            const MomentTensor reference = oracle_multitime(eng.rho0, eng.channels, eng.rep, tp);
            const Residual r = tensor_residual(closed, reference);
            report.max_abs_residual = std::max(report.max_abs_residual, r.max_abs);
            report.frob_residual = std::max(report.frob_residual, r.frob);
            std::string label = "times=(";
            for (std::size_t i = 0; i < tp.values().size(); ++i) {
                if (i) label += ",";
                label += fmt_short(tp.values()[i]);
            }
            report.notes.push_back(label + ") correlation residual max-abs " +
                                   fmt_short(r.max_abs) + ", frob " + fmt_short(r.frob));
            std::vector<std::string> time_cells;
            for (double t : tp.values()) time_cells.push_back(fmt(t));
            tensor_rows(csv, time_cells, closed);
        }
        report.outputs.push_back("oracle_compare_correlations.csv");
    }

    report.pass = report.max_abs_residual <= tol;
}

void run_sample(const Scenario& s, const Engines& eng, const std::filesystem::path& dir,
                int threads, TaskReport& report, std::string& rng_metadata) {
    const std::vector<double> times = single_times(s);
    if (times.empty()) {
        throw ScenarioParseError("sample task requires a time grid or single-time points");
    }
    report.compared = true;
    report.tolerance = 0.0;   // acceptance is 4x the aggregated standard error

    CsvWriter csv(dir / "sample.csv", {"t", "i", "j", "re", "im", "std_error"});
    bool all_within = true;
    json meta;
    meta["algorithm"] = "";
    meta["seed"] = s.sampling.seed;
    meta["trajectories"] = s.sampling.trajectories;
    json per_time = json::array();

    for (double t : times) {
        TrajectoryConfig cfg;
        cfg.horizon = t;
        cfg.trajectories = s.sampling.trajectories;
        cfg.seed = s.sampling.seed;
        cfg.threads = threads;
        const EvolutionEstimate est = estimate_evolution(eng.rho0, eng.channels, eng.rep, cfg);
        const DensityState reference = evolve_density(eng.rho0, eng.channels, eng.rep, t);

        const double err = (est.mean - reference.rho()).norm();
        const double agg_se = est.aggregated_std_error();
        const bool within = err <= std::max(4.0 * agg_se, 1e-12);
        all_within = all_within && within;
        report.max_abs_residual =
            std::max(report.max_abs_residual,
                     (est.mean - reference.rho()).cwiseAbs().maxCoeff());
        report.frob_residual = std::max(report.frob_residual, err);
        report.notes.push_back("t=" + fmt_short(t) + " sampler frob error " + fmt_short(err) +
                               " vs 4x aggregated SE " + fmt_short(4.0 * agg_se) +
                               (within ? " (within)" : " (exceeded)"));

        for (Eigen::Index i = 0; i < est.mean.rows(); ++i) {
            for (Eigen::Index j = 0; j < est.mean.cols(); ++j) {
                csv.row({fmt(t), std::to_string(i + 1), std::to_string(j + 1),
                         fmt(est.mean(i, j).real()), fmt(est.mean(i, j).imag()),
                         fmt(est.std_error(i, j))});
            }
        }

        meta["algorithm"] = est.rng_algorithm;
        meta["total_rate"] = est.total_rate;
        json counts = json::array();
        for (auto c : est.event_counts) counts.push_back(c);
        per_time.push_back(json{{"t", t}, {"event_counts", std::move(counts)}});
    }
    meta["per_time"] = std::move(per_time);
    rng_metadata = meta.dump();

    report.outputs.push_back("sample.csv");
    report.pass = all_within;
}

void run_validate(const Scenario& s, const Engines& eng, TaskReport& report) {
    report.compared = true;
    const double car_tol = 1e-13;
    const double channel_tol = 1e-10;
    report.tolerance = channel_tol;
    bool ok = true;

    const Matrix e = exchange_matrix(s.n);
    const Matrix eye = Matrix::Identity(eng.rep.dim(), eng.rep.dim());
    double car_residual = 0.0;
    for (int i = 0; i < eng.rep.vec_dim(); ++i) {
        for (int j = 0; j < eng.rep.vec_dim(); ++j) {
            const Matrix anti = eng.rep.ops[i] * eng.rep.ops[j] + eng.rep.ops[j] * eng.rep.ops[i];
            car_residual = std::max(car_residual, frob_dist(anti, e(i, j) * eye));
        }
    }
    ok = ok && car_residual <= car_tol;
    report.notes.push_back("CAR residual " + fmt_short(car_residual) + " (tol " +
                           fmt_short(car_tol) + ")");

    for (std::size_t k = 0; k < eng.channels.size(); ++k) {
        const JumpChannel& ch = eng.channels.channels()[k];
        const Matrix& o = ch.one_particle();
        const Matrix& u = ch.unitary(eng.rep);
        const double car_form = frob_dist(o * e * o.transpose(), e);
        const double tilde_res = frob_dist(tilde(o), o);
        const double unitarity = frob_dist(u.adjoint() * u, eye);
        const double conj = conjugation_check(ch, eng.rep);
        const double worst = std::max({car_form, tilde_res, unitarity, conj});
        ok = ok && worst <= channel_tol;
        report.notes.push_back("channel " + std::to_string(k + 1) + ": OEO^T-E " +
                               fmt_short(car_form) + ", tilde(O)-O " + fmt_short(tilde_res) +
                               ", U^dag U-I " + fmt_short(unitarity) + ", conjugation " +
                               fmt_short(conj));
        report.max_abs_residual = std::max(report.max_abs_residual, worst);
    }

    // Heisenberg generator agreement at order 1.
    const Matrix gen1 = moment_generator(eng.channels, 1);
    double lemma_residual = 0.0;
    for (int j = 0; j < eng.rep.vec_dim(); ++j) {
        Matrix closed = Matrix::Zero(eng.rep.dim(), eng.rep.dim());
        for (int l = 0; l < eng.rep.vec_dim(); ++l) {
            if (gen1(j, l) != 0.0) closed.noalias() += gen1(j, l) * eng.rep.ops[l];
        }
        lemma_residual = std::max(
            lemma_residual,
            frob_dist(adjoint_apply(eng.rep.ops[j], eng.channels, eng.rep), closed));
    }
    ok = ok && lemma_residual <= channel_tol;
    report.notes.push_back("adjoint generator residual (order 1) " + fmt_short(lemma_residual));
    report.max_abs_residual = std::max(report.max_abs_residual, lemma_residual);

    const Superoperator l = liouvillian(eng.channels, eng.rep);
    const double trace_res =
        (vec(eye).adjoint() * l.matrix).cwiseAbs().maxCoeff();
    ok = ok && trace_res <= channel_tol;
    report.notes.push_back("trace preservation residual " + fmt_short(trace_res));
    report.max_abs_residual = std::max(report.max_abs_residual, trace_res);

    report.pass = ok;
}

} // namespace

std::string RunReport::to_json(const Scenario& s) const {
    json root;
    root["tool"] = kToolName;
    root["version"] = tool_version;
    root["schema_version"] = s.schema_version;
    root["n"] = s.n;
    root["order"] = s.order;
    root["all_pass"] = all_pass;
    root["total_elapsed_s"] = total_elapsed_s;
    json tasks_json = json::array();
    for (const auto& t : tasks) {
        json entry;
        entry["task"] = t.task;
        entry["pass"] = t.pass;
        if (t.compared) {
            entry["max_abs_residual"] = t.max_abs_residual;
            entry["frob_residual"] = t.frob_residual;
            entry["tolerance"] = t.tolerance;
        }
        entry["elapsed_s"] = t.elapsed_s;
        entry["outputs"] = t.outputs;
        entry["notes"] = t.notes;
        if (!t.error.empty()) entry["error"] = t.error;
        tasks_json.push_back(std::move(entry));
    }
    root["tasks"] = std::move(tasks_json);
    if (!rng_metadata.empty()) root["rng"] = json::parse(rng_metadata);
    return root.dump(2) + "\n";
}

RunReport run(const Scenario& s, const std::vector<TaskKind>& tasks, const RunOptions& opt) {
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();

    if (s.matrix_entry_cap) set_matrix_entry_cap(*s.matrix_entry_cap);
    if (s.moment_row_cap) set_moment_row_cap(*s.moment_row_cap);
    const double tol = opt.tolerance.value_or(s.tolerance);

    RunReport report;
    report.tool_version = kToolVersion;

    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);

    Engines eng = build_engines(s);

    for (TaskKind task : tasks) {
        TaskReport tr;
        tr.task = task_name(task);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            switch (task) {
                case TaskKind::Moments:
                    run_moments(s, eng, dir, tr);
                    break;
                case TaskKind::Correlate:
                    run_correlate(s, eng, dir, tr);
                    break;
                case TaskKind::OracleCompare:
                    run_oracle_compare(s, eng, dir, tol, tr);
                    break;
                case TaskKind::Sample:
                    run_sample(s, eng, dir, opt.threads, tr, report.rng_metadata);
                    break;
                case TaskKind::Validate:
                    run_validate(s, eng, tr);
                    break;
            }
        } catch (const std::exception& e) {
            tr.pass = false;
            tr.error = std::string("task ") + tr.task + ": " + e.what();
        }
        tr.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.all_pass = report.all_pass && tr.pass;
        report.tasks.push_back(std::move(tr));
    }

    report.total_elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    std::ofstream out(dir / "report.json", std::ios::binary);
    out << report.to_json(s);
    return report;
}

} // namespace fermijump
