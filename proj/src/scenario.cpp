#include "fermijump/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fermijump/version.hpp"

namespace fermijump {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioParseError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

std::uint64_t as_seed(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) fail(path, "expected an integer seed");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) fail(path, "seed must be nonnegative");
    return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

// {"re": [[...]], "im": [[...]]} -> complex matrix of the stated shape.
Matrix matrix_from_json(const json& obj, Eigen::Index rows, Eigen::Index cols,
                        const std::string& path) {
    const json& re = field(obj, "re", path);
    const json& im = field(obj, "im", path);
    Matrix out(rows, cols);
    for (const auto* part : {&re, &im}) {
        const bool is_re = part == &re;
        const std::string ppath = path + (is_re ? ".re" : ".im");
        if (!part->is_array() || static_cast<Eigen::Index>(part->size()) != rows) {
            fail(ppath, "expected " + std::to_string(rows) + " rows");
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            const json& row = (*part)[static_cast<std::size_t>(r)];
            const std::string rpath = ppath + "[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
                fail(rpath, "expected " + std::to_string(cols) + " entries");
            }
            for (Eigen::Index c = 0; c < cols; ++c) {
                const double v = as_double(row[static_cast<std::size_t>(c)],
                                           rpath + "[" + std::to_string(c) + "]");
                if (is_re) {
                    out(r, c) = Complex{v, 0.0};
                } else {
                    out(r, c) += Complex{0.0, v};
                }
            }
        }
    }
    return out;
}

json matrix_to_json(const Matrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json re_row = json::array();
        json im_row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ChannelSpec parse_channel(const json& obj, int n, std::size_t index) {
    const std::string path = "channels[" + std::to_string(index) + "]";
    ChannelSpec spec;
    spec.rate = as_double(field(obj, "rate", path), path + ".rate");
    if (!(spec.rate > 0.0)) fail(path + ".rate", "rate must be positive");

    const json& gen = field(obj, "generator", path);
    const std::string gpath = path + ".generator";
    if (!gen.is_object()) fail(gpath, "expected an object");
    if (gen.contains("seed")) {
        spec.seed = as_seed(gen["seed"], gpath + ".seed");
        spec.scale = gen.contains("scale") ? as_double(gen["scale"], gpath + ".scale") : 1.0;
        if (spec.scale < 0.0) fail(gpath + ".scale", "scale must be nonnegative");
    } else {
        const int gen_n = as_int(field(gen, "n", gpath), gpath + ".n");
        if (gen_n != n) {
            fail(gpath + ".n", "generator n=" + std::to_string(gen_n) +
                                   " does not match scenario n=" + std::to_string(n));
        }
        spec.h = matrix_from_json(gen, 2 * n, 2 * n, gpath);
    }
    return spec;
}

InitialStateSpec parse_initial_state(const json& obj, int n) {
    const std::string path = "initial_state";
    InitialStateSpec spec;
    const std::string kind = as_string(field(obj, "kind", path), path + ".kind");
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (kind == "vacuum") {
        spec.kind = InitialStateSpec::Kind::Vacuum;
    } else if (kind == "basis") {
        spec.kind = InitialStateSpec::Kind::Basis;
        spec.basis_index = as_int(field(obj, "index", path), path + ".index");
        if (spec.basis_index < 0 || spec.basis_index >= dim) {
            fail(path + ".index", "basis index out of range 0.." + std::to_string(dim - 1));
        }
    } else if (kind == "pure") {
        spec.kind = InitialStateSpec::Kind::Pure;
        const json& re = field(obj, "re", path);
        const json& im = field(obj, "im", path);
        if (!re.is_array() || static_cast<Eigen::Index>(re.size()) != dim) {
            fail(path + ".re", "expected " + std::to_string(dim) + " amplitudes");
        }
        if (!im.is_array() || static_cast<Eigen::Index>(im.size()) != dim) {
            fail(path + ".im", "expected " + std::to_string(dim) + " amplitudes");
        }
        spec.amplitudes = Vector(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            spec.amplitudes[i] =
                Complex{as_double(re[static_cast<std::size_t>(i)],
                                  path + ".re[" + std::to_string(i) + "]"),
                        as_double(im[static_cast<std::size_t>(i)],
                                  path + ".im[" + std::to_string(i) + "]")};
        }
        if (spec.amplitudes.norm() == 0.0) fail(path, "pure state amplitudes are all zero");
    } else if (kind == "mixed") {
        spec.kind = InitialStateSpec::Kind::Mixed;
        const json& rho = field(obj, "rho", path);
        spec.rho = matrix_from_json(rho, dim, dim, path + ".rho");
    } else if (kind == "random_pure") {
        spec.kind = InitialStateSpec::Kind::RandomPure;
        spec.seed = as_seed(field(obj, "seed", path), path + ".seed");
    } else {
        fail(path + ".kind", "unknown kind '" + kind +
                                 "' (expected vacuum|basis|pure|mixed|random_pure)");
    }
    return spec;
}

} // namespace

std::string task_name(TaskKind task) {
    switch (task) {
        case TaskKind::Moments: return "moments";
        case TaskKind::Correlate: return "correlate";
        case TaskKind::OracleCompare: return "oracle-compare";
        case TaskKind::Sample: return "sample";
        case TaskKind::Validate: return "validate";
    }
    return "unknown";
}

TaskKind task_from_name(const std::string& name) {
    if (name == "moments") return TaskKind::Moments;
    if (name == "correlate") return TaskKind::Correlate;
    if (name == "oracle-compare") return TaskKind::OracleCompare;
    if (name == "sample") return TaskKind::Sample;
    if (name == "validate") return TaskKind::Validate;
    throw ScenarioParseError("tasks: unknown task '" + name +
                             "' (expected moments|correlate|oracle-compare|sample|validate)");
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(origin + ": invalid JSON: " + e.what());
    }
    if (!root.is_object()) fail(origin, "expected a JSON object");

    Scenario s;
    s.schema_version = as_int(field(root, "schema_version", "<root>"), "schema_version");
    if (s.schema_version != kSchemaVersion) {
        fail("schema_version", "unsupported version " + std::to_string(s.schema_version) +
                                   " (tool supports " + std::to_string(kSchemaVersion) + ")");
    }
    s.n = as_int(field(root, "n", "<root>"), "n");
    if (s.n < 1 || s.n > kMaxModes) {
        fail("n", "modes must be in 1.." + std::to_string(kMaxModes));
    }
    s.order = root.contains("order") ? as_int(root["order"], "order") : 1;
    if (s.order < 1) fail("order", "order must be >= 1");

    const json& channels = field(root, "channels", "<root>");
    if (!channels.is_array() || channels.empty()) {
        fail("channels", "expected a nonempty array");
    }
    for (std::size_t k = 0; k < channels.size(); ++k) {
        s.channels.push_back(parse_channel(channels[k], s.n, k));
    }

    s.initial_state = parse_initial_state(field(root, "initial_state", "<root>"), s.n);

    const json& times = field(root, "times", "<root>");
    const bool has_points = times.is_object() && times.contains("points");
    const bool has_grid = times.is_object() && times.contains("grid");
    if (has_points == has_grid) {
        fail("times", "expected exactly one of 'points' or 'grid'");
    }
    if (has_points) {
        const json& points = times["points"];
        if (!points.is_array() || points.empty()) fail("times.points", "expected a nonempty array");
        for (std::size_t p = 0; p < points.size(); ++p) {
            const std::string ppath = "times.points[" + std::to_string(p) + "]";
            const json& tuple = points[p];
            if (!tuple.is_array() || tuple.empty()) fail(ppath, "expected a nonempty array");
            const auto len = static_cast<int>(tuple.size());
            if (len != 1 && len != s.order) {
                fail(ppath, "expected 1 or order=" + std::to_string(s.order) + " times, got " +
                                std::to_string(len));
            }
            std::vector<double> values;
            double prev = 0.0;
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                const double t = as_double(tuple[i], ppath + "[" + std::to_string(i) + "]");
                if (!(t >= prev)) {
                    fail(ppath, "times must be nonnegative and nondecreasing");
                }
                prev = t;
                values.push_back(t);
            }
            s.time_points.push_back(std::move(values));
        }
    } else {
        const json& grid = times["grid"];
        GridSpec g;
        g.t_max = as_double(field(grid, "t_max", "times.grid"), "times.grid.t_max");
        g.steps = as_int(field(grid, "steps", "times.grid"), "times.grid.steps");
        if (!(g.t_max > 0.0)) fail("times.grid.t_max", "t_max must be positive");
        if (g.steps < 1) fail("times.grid.steps", "steps must be >= 1");
        s.grid = g;
    }

    if (root.contains("tasks")) {
        const json& tasks = root["tasks"];
        if (!tasks.is_array()) fail("tasks", "expected an array");
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            s.tasks.push_back(task_from_name(as_string(tasks[i], "tasks[" + std::to_string(i) + "]")));
        }
    }

    if (root.contains("tolerance")) {
        s.tolerance = as_double(root["tolerance"], "tolerance");
        if (!(s.tolerance > 0.0)) fail("tolerance", "tolerance must be positive");
    }
    if (root.contains("sampling")) {
        const json& sampling = root["sampling"];
        s.sampling.trajectories =
            as_int(field(sampling, "trajectories", "sampling"), "sampling.trajectories");
        if (s.sampling.trajectories < 1) fail("sampling.trajectories", "need >= 1 trajectories");
        s.sampling.seed = as_seed(field(sampling, "seed", "sampling"), "sampling.seed");
    }
    if (root.contains("matrix_entry_cap")) {
        const auto cap = as_seed(root["matrix_entry_cap"], "matrix_entry_cap");
        if (cap == 0) fail("matrix_entry_cap", "cap must be positive");
        s.matrix_entry_cap = static_cast<std::size_t>(cap);
    }
    if (root.contains("moment_row_cap")) {
        const auto cap = as_seed(root["moment_row_cap"], "moment_row_cap");
        if (cap == 0) fail("moment_row_cap", "cap must be positive");
        s.moment_row_cap = static_cast<std::size_t>(cap);
    }

    // Generator admissibility is part of scenario validation; failures name
    // the channel rather than a schema path.
    build_channels(s);
    return s;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioParseError(path + ": cannot open scenario file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
    json root;
    root["schema_version"] = s.schema_version;
    root["n"] = s.n;
    root["order"] = s.order;

    json channels = json::array();
    for (const auto& ch : s.channels) {
        json gen;
        if (ch.h) {
            gen = matrix_to_json(*ch.h);
            gen["n"] = s.n;
        } else {
            gen["seed"] = ch.seed.value_or(0);
            gen["scale"] = ch.scale;
        }
        channels.push_back(json{{"rate", ch.rate}, {"generator", std::move(gen)}});
    }
    root["channels"] = std::move(channels);

    json state;
    switch (s.initial_state.kind) {
        case InitialStateSpec::Kind::Vacuum:
            state["kind"] = "vacuum";
            break;
        case InitialStateSpec::Kind::Basis:
            state["kind"] = "basis";
            state["index"] = s.initial_state.basis_index;
            break;
        case InitialStateSpec::Kind::Pure: {
            state["kind"] = "pure";
            json re = json::array();
            json im = json::array();
            for (Eigen::Index i = 0; i < s.initial_state.amplitudes.size(); ++i) {
                re.push_back(s.initial_state.amplitudes[i].real());
                im.push_back(s.initial_state.amplitudes[i].imag());
            }
            state["re"] = std::move(re);
            state["im"] = std::move(im);
            break;
        }
        case InitialStateSpec::Kind::Mixed:
            state["kind"] = "mixed";
            state["rho"] = matrix_to_json(s.initial_state.rho);
            break;
        case InitialStateSpec::Kind::RandomPure:
            state["kind"] = "random_pure";
            state["seed"] = s.initial_state.seed;
            break;
    }
    root["initial_state"] = std::move(state);

    json times;
    if (s.grid) {
        times["grid"] = json{{"t_max", s.grid->t_max}, {"steps", s.grid->steps}};
    } else {
        json points = json::array();
        for (const auto& tuple : s.time_points) points.push_back(tuple);
        times["points"] = std::move(points);
    }
    root["times"] = std::move(times);

    json tasks = json::array();
    for (TaskKind t : s.tasks) tasks.push_back(task_name(t));
    root["tasks"] = std::move(tasks);

    root["tolerance"] = s.tolerance;
    root["sampling"] =
        json{{"trajectories", s.sampling.trajectories}, {"seed", s.sampling.seed}};
    if (s.matrix_entry_cap) root["matrix_entry_cap"] = *s.matrix_entry_cap;
    if (s.moment_row_cap) root["moment_row_cap"] = *s.moment_row_cap;

    return root.dump(2) + "\n";
}

ChannelSet build_channels(const Scenario& s) {
    std::vector<JumpChannel> channels;
    for (std::size_t k = 0; k < s.channels.size(); ++k) {
        const ChannelSpec& spec = s.channels[k];
        try {
            QuadraticGenerator gen =
                spec.h ? QuadraticGenerator::validated(*spec.h)
                       : random_generator(s.n, spec.seed.value_or(0), spec.scale);
            channels.emplace_back(spec.rate, std::move(gen));
        } catch (const ConstraintError& e) {
            throw ConstraintError("channel " + std::to_string(k + 1) + ": " + e.what());
        }
    }
    return ChannelSet(std::move(channels));
}

DensityState build_initial_state(const Scenario& s) {
    const Eigen::Index dim = Eigen::Index{1} << s.n;
    const double tol = 1e-10;
    switch (s.initial_state.kind) {
        case InitialStateSpec::Kind::Vacuum: {
            Matrix rho = Matrix::Zero(dim, dim);
            rho(0, 0) = 1.0;
            return DensityState::validated(std::move(rho), tol, tol, -tol);
        }
        case InitialStateSpec::Kind::Basis: {
            Matrix rho = Matrix::Zero(dim, dim);
            rho(s.initial_state.basis_index, s.initial_state.basis_index) = 1.0;
            return DensityState::validated(std::move(rho), tol, tol, -tol);
        }
        case InitialStateSpec::Kind::Pure: {
            Vector psi = s.initial_state.amplitudes;
            psi /= psi.norm();
            return DensityState::validated(psi * psi.adjoint(), tol, tol, -tol);
        }
        case InitialStateSpec::Kind::Mixed:
            return DensityState::validated(s.initial_state.rho, tol, tol, -tol);
        case InitialStateSpec::Kind::RandomPure: {
            std::mt19937_64 rng(s.initial_state.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            Vector psi(dim);
            for (Eigen::Index i = 0; i < dim; ++i) psi[i] = Complex{gauss(rng), gauss(rng)};
            psi /= psi.norm();
            return DensityState::validated(psi * psi.adjoint(), tol, tol, -tol);
        }
    }
    throw ScenarioParseError("initial_state: unknown kind");
}

std::vector<double> single_times(const Scenario& s) {
    std::vector<double> out;
    if (s.grid) {
        for (int j = 0; j <= s.grid->steps; ++j) {
            out.push_back(s.grid->t_max * static_cast<double>(j) /
                          static_cast<double>(s.grid->steps));
        }
        return out;
    }
    for (const auto& tuple : s.time_points) {
        if (tuple.size() == 1) out.push_back(tuple.front());
    }
    return out;
}

std::vector<TimePoints> correlation_times(const Scenario& s) {
    std::vector<TimePoints> out;
    if (s.grid) {
        if (s.order == 1) {
            for (double t : single_times(s)) out.push_back(TimePoints({t}));
        }
        return out;
    }
    for (const auto& tuple : s.time_points) {
        if (static_cast<int>(tuple.size()) == s.order) out.push_back(TimePoints(tuple));
    }
    return out;
}

} // namespace fermijump
