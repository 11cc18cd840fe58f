#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hygreedy/analysis.hpp"
#include "hygreedy/common.hpp"
#include "hygreedy/families.hpp"
#include "hygreedy/generators.hpp"
#include "hygreedy/hypergraph.hpp"
#include "hygreedy/io.hpp"
#include "hygreedy/process.hpp"
#include "hygreedy/trajectory.hpp"

namespace hygreedy {

inline Template template_by_name(const std::string& name) {
    if (name == "triangle" || name == "k3") return clique_template(3);
    if (name == "k4") return clique_template(4);
    if (name == "k5") return clique_template(5);
    if (name == "c4") return cycle_template(4);
    if (name == "c5") return cycle_template(5);
    if (name == "c6") return cycle_template(6);
    if (name == "diamond") return diamond_template();
    if (name == "cherry") {
        Template t;
        t.v = 3;
        t.k = 2;
        t.edges = {{0, 1}, {1, 2}};
        return t;
    }
    if (name == "tripartite222") return tripartite_222_template();
    if (name == "k4_3") return clique_3uniform_template();
    throw InputError("unknown template name " + name +
                     " (known: triangle/k3, k4, k5, c4, c5, c6, diamond, cherry, "
                     "tripartite222, k4_3)");
}

// Instance description: either a generator with its parameters or a file.
struct InstanceSpec {
    std::string generator;      // kap | sumfree | template | random | file
    std::string path;           // file path, or a template file for "template"
    std::string template_name;  // named template for "template"
    std::int64_t n = 0;
    int k = 3;                  // kap only
    int r = 3;                  // random only
    std::int64_t m = 0;         // random only
    std::uint64_t gen_seed = 0; // random only
};

inline Hypergraph build_instance(const InstanceSpec& s) {
    if (s.generator == "kap") return k_ap(s.n, s.k);
    if (s.generator == "sumfree") return sum_free(s.n);
    if (s.generator == "template") {
        const Template t =
            s.path.empty() ? template_by_name(s.template_name) : read_template(s.path);
        require_input(s.n > 0, "template instance needs a base vertex count n");
        return template_copies(t, static_cast<int>(s.n));
    }
    if (s.generator == "random")
        return random_uniform(static_cast<Vertex>(s.n), s.r, s.m, s.gen_seed);
    if (s.generator == "file") return read_hypergraph(s.path);
    throw InputError("unknown instance generator " + s.generator +
                     " (expected kap, sumfree, template, random, or file)");
}

inline std::string instance_label(const InstanceSpec& s) {
    if (s.generator == "kap")
        return "kap n=" + std::to_string(s.n) + " k=" + std::to_string(s.k);
    if (s.generator == "sumfree") return "sumfree n=" + std::to_string(s.n);
    if (s.generator == "template")
        return "template " + (s.path.empty() ? s.template_name : s.path) +
               " n=" + std::to_string(s.n);
    if (s.generator == "random")
        return "random n=" + std::to_string(s.n) + " r=" + std::to_string(s.r) +
               " m=" + std::to_string(s.m) + " seed=" + std::to_string(s.gen_seed);
    if (s.generator == "file") return "file " + s.path;
    return s.generator;
}

inline nlohmann::json instance_to_json(const InstanceSpec& s) {
    nlohmann::json j{{"generator", s.generator}};
    if (!s.path.empty()) j["path"] = s.path;
    if (!s.template_name.empty()) j["template"] = s.template_name;
    if (s.generator == "kap") { j["n"] = s.n; j["k"] = s.k; }
    if (s.generator == "sumfree") j["n"] = s.n;
    if (s.generator == "template") j["n"] = s.n;
    if (s.generator == "random") {
        j["n"] = s.n;
        j["r"] = s.r;
        j["m"] = s.m;
        j["seed"] = s.gen_seed;
    }
    return j;
}

inline InstanceSpec instance_from_json(const nlohmann::json& j) {
    require_input(j.is_object() && j.contains("generator"),
                  "instance spec needs a generator field");
    InstanceSpec s;
    s.generator = j.at("generator").get<std::string>();
    if (j.contains("path")) s.path = j.at("path").get<std::string>();
    if (j.contains("template")) s.template_name = j.at("template").get<std::string>();
    if (j.contains("n")) s.n = j.at("n").get<std::int64_t>();
    if (j.contains("k")) s.k = j.at("k").get<int>();
    if (j.contains("r")) s.r = j.at("r").get<int>();
    if (j.contains("m")) s.m = j.at("m").get<std::int64_t>();
    if (j.contains("seed")) s.gen_seed = j.at("seed").get<std::uint64_t>();
    return s;
}

// One JSON document describes an experiment; CLI flags are overrides onto it.
// NaN marks a parameter that should fall back to the derived default.
struct ExperimentConfig {
    InstanceSpec instance;
    std::uint64_t seed_base = 1;
    int runs = 1;
    std::int64_t checkpoint_every = 1;
    std::int64_t max_steps = -1;  // negative: run each process to termination
    double epsilon = std::nan("");
    double delta = std::nan("");
    double zeta = std::nan("");
    double alpha = std::nan("");
    double beta = std::nan("");
    bool monitor_stop = true;
    bool monitor_z = false;
    std::string output_dir = "out";
    bool format_csv = true;
    bool format_json = true;
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json params = nlohmann::json::object();
    if (!std::isnan(c.epsilon)) params["epsilon"] = c.epsilon;
    if (!std::isnan(c.delta)) params["delta"] = c.delta;
    if (!std::isnan(c.zeta)) params["zeta"] = c.zeta;
    if (!std::isnan(c.alpha)) params["alpha"] = c.alpha;
    if (!std::isnan(c.beta)) params["beta"] = c.beta;
    nlohmann::json formats = nlohmann::json::array();
    if (c.format_csv) formats.push_back("csv");
    if (c.format_json) formats.push_back("json");
    return nlohmann::json{
        {"instance", instance_to_json(c.instance)},
        {"seed_base", c.seed_base},
        {"runs", c.runs},
        {"checkpoint_every", c.checkpoint_every},
        {"max_steps", c.max_steps},
        {"params", params},
        {"monitors",
         {{"stop_check", c.monitor_stop}, {"z_diagnostics", c.monitor_z}}},
        {"outputs", {{"directory", c.output_dir}, {"formats", formats}}}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    require_input(j.is_object(), "experiment config must be a JSON object");
    ExperimentConfig c;
    require_input(j.contains("instance"), "experiment config needs an instance");
    c.instance = instance_from_json(j.at("instance"));
    if (j.contains("seed_base")) c.seed_base = j.at("seed_base").get<std::uint64_t>();
    if (j.contains("runs")) c.runs = j.at("runs").get<int>();
    if (j.contains("checkpoint_every"))
        c.checkpoint_every = j.at("checkpoint_every").get<std::int64_t>();
    if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<std::int64_t>();
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (p.contains("epsilon")) c.epsilon = p.at("epsilon").get<double>();
        if (p.contains("delta")) c.delta = p.at("delta").get<double>();
        if (p.contains("zeta")) c.zeta = p.at("zeta").get<double>();
        if (p.contains("alpha")) c.alpha = p.at("alpha").get<double>();
        if (p.contains("beta")) c.beta = p.at("beta").get<double>();
    }
    if (j.contains("monitors")) {
        const auto& m = j.at("monitors");
        if (m.contains("stop_check")) c.monitor_stop = m.at("stop_check").get<bool>();
        if (m.contains("z_diagnostics")) c.monitor_z = m.at("z_diagnostics").get<bool>();
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        if (o.contains("directory")) c.output_dir = o.at("directory").get<std::string>();
        if (o.contains("formats")) {
            c.format_csv = false;
            c.format_json = false;
            for (const auto& f : o.at("formats")) {
                const std::string name = f.get<std::string>();
                if (name == "csv") c.format_csv = true;
                else if (name == "json") c.format_json = true;
                else throw InputError("unknown output format " + name);
            }
        }
    }
    require_input(c.runs >= 1, "runs must be >= 1");
    require_input(c.checkpoint_every >= 1, "checkpoint_every must be >= 1");
    return c;
}

// Default parameters for an instance: epsilon a hair below the largest value
// the crude-bound hypotheses admit, then delta = epsilon/10, zeta = delta/10,
// and (alpha, beta) from the variation-equation search. Config overrides
// replace any subset; loose orderings are recorded, not rejected.
inline TrajectoryParams derive_params(const Hypergraph& h, const ExperimentConfig& cfg,
                                      bool search_ab = true) {
    if (h.edge_count() == 0 || h.uniformity() < 3) {
        // Degenerate instance (e.g. edgeless): the process still runs, and any
        // valid parameter block works because D = 1 makes every band at least
        // N-wide. Overrides are ignored here.
        return TrajectoryParams::make(3, h.vertex_count(), 1, 0.5, 0.05, 0.005, 1, 0, true);
    }
    const auto& ds = h.degree_stats();
    const std::int64_t dd =
        ds.regular ? ds.min_degree
                   : static_cast<std::int64_t>(std::llround(ds.mean_degree));
    require_input(dd >= 1, "instance degree must be >= 1");
    double eps = cfg.epsilon;
    if (std::isnan(eps)) {
        eps = h.max_feasible_epsilon() - 0.01;
        require_hypothesis(eps > 0,
                           "the crude-bound hypotheses leave no feasible epsilon margin "
                           "for this instance");
    }
    const double delta = std::isnan(cfg.delta) ? eps / 10 : cfg.delta;
    const double zeta = std::isnan(cfg.zeta) ? delta / 10 : cfg.zeta;
    double alpha = cfg.alpha;
    double beta = cfg.beta;
    if (std::isnan(alpha) || std::isnan(beta)) {
        if (search_ab) {
            const auto base = TrajectoryParams::make(h.uniformity(), h.vertex_count(), dd,
                                                     eps, delta, zeta, 1, 0, true);
            const auto found = search_alpha_beta(base);
            if (std::isnan(alpha)) alpha = found.alpha;
            if (std::isnan(beta)) beta = found.beta;
        } else {
            if (std::isnan(alpha)) alpha = 1;
            if (std::isnan(beta)) beta = 0;
        }
    }
    return TrajectoryParams::make(h.uniformity(), h.vertex_count(), dd, eps, delta, zeta,
                                  alpha, beta, true);
}

// Order statistics from the full sorted sample (no streaming sketches), with
// linear interpolation between ranks.
struct SampleStats {
    std::int64_t count = 0;
    double mean = 0;
    double stddev = 0;
    double min = 0;
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0;
};

inline double sorted_quantile(const std::vector<double>& x, double p) {
    require_input(!x.empty(), "quantile of an empty sample");
    const double h = p * static_cast<double>(x.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= x.size()) return x.back();
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

inline SampleStats sample_stats(std::vector<double> x) {
    require_input(!x.empty(), "statistics of an empty sample");
    std::sort(x.begin(), x.end());
    SampleStats s;
    s.count = static_cast<std::int64_t>(x.size());
    double sum = 0;
    for (double v : x) sum += v;
    s.mean = sum / static_cast<double>(x.size());
    double ss = 0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.stddev = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0;
    s.min = x.front();
    s.q1 = sorted_quantile(x, 0.25);
    s.median = sorted_quantile(x, 0.5);
    s.q3 = sorted_quantile(x, 0.75);
    s.max = x.back();
    return s;
}

inline nlohmann::json stats_to_json(const SampleStats& s) {
    return nlohmann::json{{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev},
                          {"min", s.min},     {"q1", s.q1},     {"median", s.median},
                          {"q3", s.q3},       {"max", s.max}};
}

namespace detail {

// Fixed-size worker pool over run indices; at most HYGREEDY_THREADS workers.
// The first exception wins and is rethrown after all workers drain.
inline void parallel_for_runs(int runs, const std::function<void(int)>& body) {
    std::atomic<int> next{0};
    std::exception_ptr err = nullptr;
    std::mutex err_mu;
    auto work = [&] {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= runs) return;
            try {
                body(idx);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    const int workers = std::min(static_cast<int>(thread_count()), runs);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace detail

struct EnsembleOptions {
    int runs = 1;
    std::uint64_t seed_base = 1;
    std::int64_t checkpoint_every = 1;
    std::int64_t max_steps = -1;
    bool monitored = false;
    unsigned stop_families = stop_points | stop_vertexdegree;
    bool with_z = false;
    // Called from the worker thread that owns the run; distinct runs may fire
    // concurrently, so the callback must only touch per-run state.
    std::function<void(int, const ProcessState&, const CheckpointRow&)> on_checkpoint;
};

// Seeded ensemble, one worker per run, results gathered by run index. Per-run
// seed is seed_base + index, so the output is independent of scheduling.
inline std::vector<RunTrace> run_ensemble(const Hypergraph& h, const TrajectoryParams& prm,
                                          const EnsembleOptions& opt) {
    require_input(opt.runs >= 1, "ensemble needs runs >= 1");
    std::vector<RunTrace> traces(opt.runs);
    detail::parallel_for_runs(opt.runs, [&](int idx) {
        ProcessState st(h, opt.seed_base + static_cast<std::uint64_t>(idx));
        RunOptions ro;
        ro.max_steps = opt.max_steps;
        ro.checkpoint_every = opt.checkpoint_every;
        ro.monitored = opt.monitored;
        ro.params = &prm;
        ro.stop_families = opt.stop_families;
        ro.with_z = opt.with_z;
        if (opt.on_checkpoint)
            ro.on_checkpoint = [&, idx](const ProcessState& s, const CheckpointRow& row) {
                opt.on_checkpoint(idx, s, row);
            };
        traces[idx] = run(st, ro);
    });
    return traces;
}

// Summary of an ensemble: terminal-size distribution against the
// N (log N / D)^(1/(r-1)) scale, per-checkpoint quantiles of |V(i)| against
// N q(t), and the stop-condition violation fractions.
inline nlohmann::json run_summary(const ExperimentConfig& cfg, const Hypergraph& h,
                                  const TrajectoryParams& prm,
                                  const std::vector<RunTrace>& traces) {
    std::vector<double> terminal;
    terminal.reserve(traces.size());
    for (const auto& tr : traces) terminal.push_back(static_cast<double>(tr.terminal_size));
    const SampleStats term = sample_stats(terminal);
    const double nd = static_cast<double>(prm.n);
    const double pred_scale =
        nd * std::pow(std::log(nd) / static_cast<double>(prm.d), 1.0 / (prm.r - 1));

    // Group checkpoint rows by step index; cadence is shared, so rows align
    // except for each run's unaligned final row.
    std::map<std::int64_t, std::vector<double>> open_by_step;
    for (const auto& tr : traces)
        for (const auto& row : tr.checkpoints)
            open_by_step[row.i].push_back(static_cast<double>(row.open));
    nlohmann::json open_rows = nlohmann::json::array();
    for (const auto& [i, values] : open_by_step) {
        const SampleStats s = sample_stats(values);
        const double t = scaled_time(prm, i);
        open_rows.push_back(nlohmann::json{{"i", i},
                                           {"t", t},
                                           {"nq", nd * q_of(prm, t)},
                                           {"runs", s.count},
                                           {"mean", s.mean},
                                           {"min", s.min},
                                           {"q1", s.q1},
                                           {"median", s.median},
                                           {"q3", s.q3},
                                           {"max", s.max}});
    }

    std::int64_t viol_any = 0;
    std::int64_t viol_before = 0;
    for (const auto& tr : traces) {
        if (tr.stop_step >= 0) ++viol_any;
        if (tr.stop_step >= 0 && tr.stop_step <= prm.i_max) ++viol_before;
    }
    const double runs = static_cast<double>(traces.size());
    nlohmann::json term_json = stats_to_json(term);
    {
        std::vector<double> sorted = terminal;
        std::sort(sorted.begin(), sorted.end());
        term_json["samples"] = sorted;
    }
    return nlohmann::json{
        {"version", version_string},
        {"params", params_to_json(prm)},
        {"ordering_warning", prm.ordering_warning},
        {"instance",
         {{"label", instance_label(cfg.instance)},
          {"n", h.vertex_count()},
          {"m", h.edge_count()},
          {"r", h.uniformity()},
          {"regular", h.degree_stats().regular}}},
        {"config", config_to_json(cfg)},
        {"terminal_size", term_json},
        {"prediction_scale", pred_scale},
        {"terminal_mean_over_prediction", term.mean / pred_scale},
        {"open_trajectory", open_rows},
        {"stop",
         {{"checked", cfg.monitor_stop},
          {"i_max", prm.i_max},
          {"violating_runs", viol_any},
          {"violating_fraction", static_cast<double>(viol_any) / runs},
          {"violating_runs_before_imax", viol_before},
          {"violating_fraction_before_imax", static_cast<double>(viol_before) / runs}}}};
}

inline std::string trace_file_comments(const TrajectoryParams& prm) {
    return "# " + std::string(version_string) + "\n# params " +
           params_to_json(prm).dump() + "\n";
}

struct RunCommandResult {
    TrajectoryParams params;
    std::vector<RunTrace> traces;
    nlohmann::json summary;
    std::vector<std::string> files;  // paths written, in order
};

inline RunCommandResult cmd_run(const ExperimentConfig& cfg, bool write_files = true) {
    require_input(cfg.runs >= 1, "runs must be >= 1");
    require_input(cfg.checkpoint_every >= 1, "checkpoint_every must be >= 1");
    const Hypergraph h = build_instance(cfg.instance);
    RunCommandResult out{derive_params(h, cfg), {}, {}, {}};
    EnsembleOptions eopt;
    eopt.runs = cfg.runs;
    eopt.seed_base = cfg.seed_base;
    eopt.checkpoint_every = cfg.checkpoint_every;
    eopt.max_steps = cfg.max_steps;
    eopt.monitored = cfg.monitor_stop;
    eopt.with_z = cfg.monitor_z;
    out.traces = run_ensemble(h, out.params, eopt);
    out.summary = run_summary(cfg, h, out.params, out.traces);
    if (!write_files) return out;

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw InputError("cannot create output directory " + cfg.output_dir + ": " +
                             ec.message());
    auto write_text = [&](const fs::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        require_input(f.good(), "cannot write " + p.string());
        f << text;
        require_input(f.good(), "write failed for " + p.string());
        out.files.push_back(p.string());
    };
    if (cfg.format_csv)
        for (std::size_t idx = 0; idx < out.traces.size(); ++idx) {
            char name[32];
            std::snprintf(name, sizeof(name), "run_%04zu.csv", idx);
            write_text(fs::path(cfg.output_dir) / name,
                       trace_file_comments(out.params) +
                           trace_to_csv(out.traces[idx], out.params));
        }
    if (cfg.format_json)
        write_text(fs::path(cfg.output_dir) / "summary.json", out.summary.dump(2) + "\n");
    return out;
}

// Plot-ready table of the predicted trajectories on a uniform t-grid.
// Comment lines carry the version, the parameters, and the crude-bound
// thresholds; an optional variation-equation report is appended at the end.
inline std::string trajectory_table_csv(const TrajectoryParams& prm, int points = 201,
                                        bool check_vareq = false,
                                        int vareq_grid = 10'000) {
    require_input(points >= 2, "trajectory table needs >= 2 grid points");
    const int r = prm.r;
    std::string out = trace_file_comments(prm);
    for (int a = 2; a <= r; ++a)
        for (int b = a + 1; b <= r; ++b)
            out += "# threshold setdegree a=" + std::to_string(a) +
                   " b=" + std::to_string(b) + " value=" +
                   detail::format_double(setdegree_threshold(prm, a, b)) + "\n";
    for (int a = 2; a <= r; ++a)
        for (int a2 = a; a2 <= r; ++a2)
            for (int k = 1; k < std::min(a, a2); ++k)
                out += "# threshold codegree a=" + std::to_string(a) +
                       " a2=" + std::to_string(a2) + " k=" + std::to_string(k) +
                       " value=" +
                       detail::format_double(codegree_threshold(prm, a, a2, k)) + "\n";
    out += "t,q";
    for (int ell = 2; ell <= r; ++ell) out += ",s_" + std::to_string(ell);
    for (int ell = 2; ell <= r - 1; ++ell) out += ",s" + std::to_string(ell) + "p";
    for (int ell = 2; ell <= r; ++ell) out += ",s" + std::to_string(ell) + "m";
    out += ",f_v";
    for (int ell = 2; ell <= r; ++ell) out += ",f_" + std::to_string(ell);
    out += "\n";
    for (int g = 0; g < points; ++g) {
        const double t = prm.t_max * static_cast<double>(g) / (points - 1);
        out += detail::format_double(t) + "," + detail::format_double(q_of(prm, t));
        for (int ell = 2; ell <= r; ++ell)
            out += "," + detail::format_double(s_of(prm, ell, t));
        for (int ell = 2; ell <= r - 1; ++ell)
            out += "," + detail::format_double(s_pm_of(prm, ell, t, Sign::plus));
        for (int ell = 2; ell <= r; ++ell)
            out += "," + detail::format_double(s_pm_of(prm, ell, t, Sign::minus));
        out += "," + detail::format_double(f_v_of(prm, t).value);
        for (int ell = 2; ell <= r; ++ell)
            out += "," + detail::format_double(f_ell_of(prm, ell, t).value);
        out += "\n";
    }
    if (check_vareq) {
        const VareqReport rep = check_variation_equations(prm, vareq_grid);
        for (const auto& e : rep.entries)
            out += "# vareq family=" + std::to_string(e.family) +
                   " ell=" + std::to_string(e.ell) +
                   " min_slack=" + detail::format_double(e.min_slack) +
                   " at_t=" + detail::format_double(e.at_t) + "\n";
        out += std::string("# vareq result=") + (rep.all_pass ? "pass" : "fail") +
               " worst_family=" + std::to_string(rep.worst_family) +
               " worst_ell=" + std::to_string(rep.worst_ell) +
               " worst_slack=" + detail::format_double(rep.worst_slack) +
               " at_t=" + detail::format_double(rep.worst_t) + "\n";
    }
    return out;
}

struct GowersExperiment {
    std::vector<std::int64_t> ns;
    int k = 3;
    int d = 2;
    int runs = 20;
    std::uint64_t seed_base = 1;
    double zeta = 2.0;     // stopping horizon; large values run to termination
    double budget = 4e9;   // operation cap for the norm computation
};

// For each N: run the k-AP-free process to its stopping horizon and measure
// the uniformity norm of the terminal set. The norm order is tied to the
// progression length by 2^(d-1) = k-1.
inline nlohmann::json cmd_gowers_experiment(const GowersExperiment& g) {
    require_input(!g.ns.empty(), "at least one N is required");
    require_input(g.k >= 3, "progression length k must be >= 3");
    require_input(g.d >= 1, "norm order d must be >= 1");
    require_input((std::int64_t{1} << (g.d - 1)) == g.k - 1,
                  "the norm order must satisfy 2^(d-1) = k-1; got 2^" +
                      std::to_string(g.d - 1) + " = " +
                      std::to_string(std::int64_t{1} << (g.d - 1)) + " but k-1 = " +
                      std::to_string(g.k - 1));
    require_input(g.runs >= 1, "runs must be >= 1");
    nlohmann::json per_n = nlohmann::json::array();
    for (const std::int64_t n : g.ns) {
        const Hypergraph h = k_ap(n, g.k);
        const double eps = h.max_feasible_epsilon() - 0.01;
        require_hypothesis(eps > 0, "no feasible epsilon margin at N = " + std::to_string(n));
        const auto prm =
            TrajectoryParams::make(h.uniformity(), h.vertex_count(),
                                   h.degree_stats().min_degree, eps, eps / 10, g.zeta,
                                   1, 0, true);
        require_hypothesis(prm.i_max >= 1,
                           "zeta too small: the stopping horizon allows no steps");
        std::vector<double> norms;
        std::vector<double> terminal;
        norms.reserve(g.runs);
        terminal.reserve(g.runs);
        double u1_max = 0;
        for (int run_idx = 0; run_idx < g.runs; ++run_idx) {
            ProcessState st(h, g.seed_base + static_cast<std::uint64_t>(run_idx));
            RunOptions ro;
            ro.max_steps = prm.i_max;
            ro.checkpoint_every = prm.i_max;
            run(st, ro);
            const std::vector<Vertex> set = st.independent_set();
            terminal.push_back(static_cast<double>(set.size()));
            norms.push_back(gowers_norm(set, n, g.d, g.budget));
            u1_max = std::max(u1_max, gowers_norm(set, n, 1, g.budget));
        }
        nlohmann::json norm_json = stats_to_json(sample_stats(norms));
        {
            std::vector<double> sorted = norms;
            std::sort(sorted.begin(), sorted.end());
            norm_json["samples"] = sorted;
        }
        per_n.push_back(nlohmann::json{{"n", n},
                                       {"i_max", prm.i_max},
                                       {"params", params_to_json(prm)},
                                       {"ordering_warning", prm.ordering_warning},
                                       {"terminal_size", stats_to_json(sample_stats(terminal))},
                                       {"norm", norm_json},
                                       {"u1_max", u1_max}});
    }
    return nlohmann::json{{"version", version_string}, {"k", g.k},
                          {"d", g.d},                  {"runs", g.runs},
                          {"seed_base", g.seed_base},  {"zeta", g.zeta},
                          {"per_n", per_n}};
}

// Counting family for the contained-copies experiment: template copies over
// the instance's ground set, or a labeled family file.
struct CountSpec {
    std::string template_name;
    std::string path;  // template file (.tmpl) or labeled family file (.fam1)
    int base_n = 0;    // base vertex count for template copies
};

inline nlohmann::json cmd_count_experiment(const ExperimentConfig& cfg,
                                           const CountSpec& family, std::int64_t i) {
    require_input(i >= 0, "step count i must be >= 0");
    require_input(cfg.runs >= 1, "runs must be >= 1");
    const Hypergraph h = build_instance(cfg.instance);
    const TrajectoryParams prm = derive_params(h, cfg, false);
    require_hypothesis(i < prm.i_max,
                       "i = " + std::to_string(i) + " is not below the stopping horizon "
                       "i_max = " + std::to_string(prm.i_max) +
                       "; raise zeta to widen the horizon");

    // Materialize the family, keeping the owner alive next to its view.
    std::string family_label;
    Hypergraph family_hg(0, std::vector<std::vector<Vertex>>{});
    LabeledFamily family_lf;
    bool use_lf = false;
    if (!family.template_name.empty() ||
        (!family.path.empty() && family.path.size() >= 5 &&
         family.path.compare(family.path.size() - 5, 5, ".tmpl") == 0)) {
        const Template t = family.template_name.empty()
                               ? read_template(family.path)
                               : template_by_name(family.template_name);
        require_input(family.base_n > 0, "template family needs a base vertex count");
        family_hg = template_copies(t, family.base_n);
        family_label = "copies of " +
                       (family.template_name.empty() ? family.path : family.template_name) +
                       " in base n=" + std::to_string(family.base_n);
    } else {
        require_input(!family.path.empty(), "count experiment needs a family spec");
        family_lf = read_family(family.path);
        use_lf = true;
        family_label = "family " + family.path;
    }
    const FamilyView view = use_lf ? FamilyView(family_lf) : FamilyView(family_hg);
    require_input(view.n == h.vertex_count(),
                  "the counting family lives on a different ground set (" +
                      std::to_string(view.n) + " vs " +
                      std::to_string(h.vertex_count()) + " vertices)");
    require_input(view.count > 0, "the counting family is empty");
    const int s = static_cast<int>(view.set(0).size());
    for (std::int64_t gi = 0; gi < view.count; ++gi)
        require_input(static_cast<int>(view.set(gi).size()) == s,
                      "the counting family must be uniform");

    // Hypothesis gates: no family set may contain an instance edge, and the
    // family set-degrees must sit below p^a |G|.
    {
        std::vector<std::uint8_t> in(h.vertex_count(), 0);
        for (std::int64_t gi = 0; gi < view.count; ++gi) {
            const auto sp = view.set(gi);
            for (Vertex v : sp) in[v] = 1;
            for (Vertex v : sp)
                for (const std::int64_t e : h.incident(v)) {
                    bool all = true;
                    for (Vertex w : h.edge(e)) all = all && in[w];
                    require_hypothesis(
                        !all, "family set " + std::to_string(gi) +
                                  " contains instance edge " + std::to_string(e) +
                                  "; the first-moment prediction needs an edge-free family");
                }
            for (Vertex v : sp) in[v] = 0;
        }
    }
    const double p = static_cast<double>(i) / static_cast<double>(h.vertex_count());
    const double prediction = static_cast<double>(view.count) * std::pow(p, s);
    nlohmann::json delta_json = nlohmann::json::array();
    for (int a = 1; a <= s - 1; ++a) {
        const std::int64_t da = detail::family_max_set_degree(view, a);
        const double bound = std::pow(p, a) * static_cast<double>(view.count);
        const double ratio = i > 0 ? static_cast<double>(da) / bound : 0.0;
        delta_json.push_back(
            nlohmann::json{{"a", a}, {"value", da}, {"ratio", ratio}});
        if (i > 0)
            require_hypothesis(ratio < 1.0,
                               "set-degree hypothesis fails at a = " + std::to_string(a) +
                                   ": Delta_a(G) = " + std::to_string(da) +
                                   " is not below p^a |G| = " + std::to_string(bound));
    }
    if (i > 0)
        require_hypothesis(prediction >= 10.0,
                           "predicted count |G| p^s = " + std::to_string(prediction) +
                               " is too small for a concentration experiment");

    std::vector<double> counts(cfg.runs, 0);
    std::vector<std::uint8_t> short_run(cfg.runs, 0);
    detail::parallel_for_runs(cfg.runs, [&](int idx) {
        ProcessState st(h, cfg.seed_base + static_cast<std::uint64_t>(idx));
        RunOptions ro;
        ro.max_steps = i;
        ro.checkpoint_every = std::max<std::int64_t>(i, 1);
        run(st, ro);
        short_run[idx] = st.step_count() < i ? 1 : 0;
        counts[idx] =
            static_cast<double>(count_contained(view, st.independent_set(), p).count);
    });
    std::int64_t shorts = 0;
    for (const auto b : short_run) shorts += b;
    const SampleStats stats = sample_stats(counts);
    nlohmann::json count_json = stats_to_json(stats);
    {
        std::vector<double> sorted = counts;
        std::sort(sorted.begin(), sorted.end());
        count_json["samples"] = sorted;
    }
    return nlohmann::json{
        {"version", version_string},
        {"params", params_to_json(prm)},
        {"ordering_warning", prm.ordering_warning},
        {"instance", {{"label", instance_label(cfg.instance)},
                      {"n", h.vertex_count()},
                      {"m", h.edge_count()},
                      {"r", h.uniformity()}}},
        {"family", {{"label", family_label}, {"size", view.count}, {"s", s}}},
        {"i", i},
        {"p", p},
        {"runs", cfg.runs},
        {"seed_base", cfg.seed_base},
        {"prediction", prediction},
        {"count", count_json},
        {"ratio", prediction > 0 ? stats.mean / prediction : 0.0},
        {"delta", delta_json},
        {"short_runs", shorts}};
}

// Audit of a saved trace CSV against the open-vertex band: every row must
// satisfy | |V(i)| - N q(t) | <= N D^(-delta) f_v(t). Parameters come from
// the embedded "# params" comment.
struct TraceAudit {
    TrajectoryParams params;
    std::int64_t rows = 0;
    std::int64_t violations = 0;
    std::vector<std::int64_t> violating_steps;  // first few offenders
    double worst_ratio = 0;                     // max deviation / band
    std::int64_t worst_step = 0;
};

inline TraceAudit audit_trace_csv(const std::string& text) {
    TraceAudit audit;
    bool have_params = false;
    bool header_seen = false;
    std::vector<std::pair<std::int64_t, std::int64_t>> rows;  // (i, open)
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        const std::string_view line(text.data() + pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        if (line.rfind("# params ", 0) == 0) {
            audit.params = params_from_json(
                nlohmann::json::parse(std::string(line.substr(9))), true);
            have_params = true;
            continue;
        }
        if (line[0] == '#') continue;
        if (!header_seen) {
            require_input(line.rfind("i,t,open,", 0) == 0,
                          "trace audit: unrecognized header line");
            header_seen = true;
            continue;
        }
        std::int64_t fields[3] = {0, 0, 0};
        int field = 0;
        std::size_t start = 0;
        for (std::size_t c = 0; c <= line.size() && field < 3; ++c) {
            if (c == line.size() || line[c] == ',') {
                if (field != 1)  // the t column is a float; skip it
                    fields[field] =
                        detail::parse_canonical_int(line.substr(start, c - start),
                                                    "trace audit row");
                ++field;
                start = c + 1;
            }
        }
        require_input(field == 3, "trace audit: malformed row");
        rows.emplace_back(fields[0], fields[2]);
    }
    require_input(have_params, "trace audit: no '# params' comment in the file");
    require_input(header_seen, "trace audit: no header line in the file");
    const double nd = static_cast<double>(audit.params.n);
    const double dd = static_cast<double>(audit.params.d);
    for (const auto& [i, open] : rows) {
        const double t = scaled_time(audit.params, i);
        const double band =
            nd * std::pow(dd, -audit.params.delta) * f_v_of(audit.params, t).value;
        const double dev = std::abs(static_cast<double>(open) - nd * q_of(audit.params, t));
        const double ratio = band > 0 ? dev / band : std::numeric_limits<double>::infinity();
        ++audit.rows;
        if (ratio > audit.worst_ratio) {
            audit.worst_ratio = ratio;
            audit.worst_step = i;
        }
        if (dev > band) {
            ++audit.violations;
            if (audit.violating_steps.size() < 32) audit.violating_steps.push_back(i);
        }
    }
    return audit;
}

}  // namespace hygreedy
