// Harness tests: configuration round trips, default parameter derivation,
// order statistics, seeded ensembles, the run/count/uniformity-norm commands,
// and the trace audit.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "hygreedy/generators.hpp"
#include "hygreedy/harness.hpp"
#include "hygreedy/io.hpp"

using namespace hygreedy;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fresh_dir(const char* tag) {
    const auto p = std::filesystem::temp_directory_path() /
                   (std::string("hygreedy_test_") + tag);
    std::filesystem::remove_all(p);
    return p.string();
}

ExperimentConfig kap_config(std::int64_t n) {
    ExperimentConfig cfg;
    cfg.instance.generator = "kap";
    cfg.instance.n = n;
    cfg.instance.k = 3;
    return cfg;
}

}  // namespace

TEST_CASE("instance specs round-trip through json and label themselves",
          "[harness]") {
    InstanceSpec spec;
    spec.generator = "kap";
    spec.n = 13;
    spec.k = 3;
    REQUIRE(instance_label(spec) == "kap n=13 k=3");
    const auto back = instance_from_json(instance_to_json(spec));
    REQUIRE(back.generator == "kap");
    REQUIRE(back.n == 13);
    REQUIRE(build_instance(back).edge_count() == k_ap(13, 3).edge_count());

    InstanceSpec tmpl;
    tmpl.generator = "template";
    tmpl.template_name = "triangle";
    tmpl.n = 6;
    REQUIRE(build_instance(tmpl).vertex_count() == 15);

    InstanceSpec bad;
    bad.generator = "mystery";
    REQUIRE_THROWS_AS(build_instance(bad), InputError);
}

TEST_CASE("experiment config json honors defaults and rejects junk",
          "[harness]") {
    ExperimentConfig cfg = kap_config(13);
    cfg.runs = 7;
    cfg.checkpoint_every = 4;
    cfg.zeta = 0.5;
    cfg.monitor_z = true;
    cfg.format_csv = false;
    const auto back = config_from_json(config_to_json(cfg));
    REQUIRE(back.runs == 7);
    REQUIRE(back.checkpoint_every == 4);
    REQUIRE(back.zeta == 0.5);
    REQUIRE(std::isnan(back.epsilon));
    REQUIRE(back.monitor_z);
    REQUIRE_FALSE(back.format_csv);
    REQUIRE(back.format_json);

    // Minimal config: only the instance is required.
    const auto minimal = config_from_json(
        nlohmann::json{{"instance", {{"generator", "kap"}, {"n", 13}, {"k", 3}}}});
    REQUIRE(minimal.runs == 1);
    REQUIRE(minimal.output_dir == "out");

    REQUIRE_THROWS_AS(config_from_json(nlohmann::json{{"runs", 3}}), InputError);
    auto junk = config_to_json(kap_config(13));
    junk["outputs"]["formats"].push_back("xml");
    REQUIRE_THROWS_AS(config_from_json(junk), InputError);
}

TEST_CASE("default parameters sit just inside the feasible region",
          "[harness]") {
    const Hypergraph h = k_ap(499, 3);
    const auto prm = derive_params(h, kap_config(499));
    REQUIRE(prm.epsilon ==
            Catch::Approx(h.max_feasible_epsilon() - 0.01).epsilon(1e-12));
    REQUIRE(prm.delta == Catch::Approx(prm.epsilon / 10).epsilon(1e-12));
    REQUIRE(prm.zeta == Catch::Approx(prm.delta / 10).epsilon(1e-12));
    REQUIRE(prm.alpha == 15);  // r = 3 search minimum
    REQUIRE(prm.beta == 0);
    REQUIRE(prm.ordering_warning.empty());
    REQUIRE(h.check_main_conditions(prm.epsilon).all_ok());

    ExperimentConfig wide = kap_config(499);
    wide.zeta = 2.0;
    const auto loose = derive_params(h, wide);
    REQUIRE_FALSE(loose.ordering_warning.empty());
    REQUIRE(loose.zeta == 2.0);

    ExperimentConfig pinned = kap_config(499);
    pinned.alpha = 3;
    pinned.beta = 0;
    REQUIRE(derive_params(h, pinned).alpha == 3);

    // Degenerate instances fall back to a unit-degree parameter block.
    const Hypergraph empty(12, std::vector<std::vector<Vertex>>{}, 0);
    const auto fallback = derive_params(empty, ExperimentConfig{});
    REQUIRE(fallback.d == 1);
    REQUIRE(fallback.r == 3);
    REQUIRE(fallback.n == 12);
}

TEST_CASE("order statistics interpolate between ranks", "[harness]") {
    const auto s = sample_stats({3, 1, 2});
    REQUIRE(s.count == 3);
    REQUIRE(s.mean == Catch::Approx(2.0));
    REQUIRE(s.stddev == Catch::Approx(1.0));
    REQUIRE(s.min == 1.0);
    REQUIRE(s.q1 == Catch::Approx(1.5));
    REQUIRE(s.median == Catch::Approx(2.0));
    REQUIRE(s.q3 == Catch::Approx(2.5));
    REQUIRE(s.max == 3.0);

    const auto single = sample_stats({5});
    REQUIRE(single.stddev == 0.0);
    REQUIRE(single.q1 == 5.0);
    REQUIRE(single.q3 == 5.0);

    REQUIRE(sorted_quantile({0, 10}, 0.25) == Catch::Approx(2.5));
    REQUIRE(sorted_quantile({0, 10}, 1.0) == 10.0);
    REQUIRE_THROWS_AS(sample_stats({}), InputError);
}

TEST_CASE("seeded ensembles are order-independent and replayable", "[harness]") {
    const Hypergraph h = k_ap(31, 3);
    const auto prm = derive_params(h, kap_config(31));
    EnsembleOptions opt;
    opt.runs = 3;
    opt.checkpoint_every = 4;
    std::mutex mu;
    std::set<int> seen;
    opt.on_checkpoint = [&](int idx, const ProcessState& st, const CheckpointRow& row) {
        std::lock_guard<std::mutex> lock(mu);
        seen.insert(idx);
        REQUIRE(row.i <= static_cast<std::int64_t>(st.step_count()));
        if (row.open > 0) REQUIRE(row.i % 4 == 0);
    };
    const auto traces = run_ensemble(h, prm, opt);
    REQUIRE(traces.size() == 3);
    REQUIRE(seen == std::set<int>{0, 1, 2});

    const auto again = run_ensemble(h, prm, opt);
    for (int k = 0; k < 3; ++k) {
        REQUIRE(again[k].terminal_size == traces[k].terminal_size);
        REQUIRE(again[k].checkpoints.size() == traces[k].checkpoints.size());
    }
}

TEST_CASE("the run command writes replayable files that pass their own audit",
          "[harness]") {
    ExperimentConfig cfg = kap_config(199);
    cfg.runs = 2;
    cfg.checkpoint_every = 25;
    cfg.output_dir = fresh_dir("run");
    const auto out = cmd_run(cfg);
    REQUIRE(out.files.size() == 3);
    REQUIRE(out.files[0].find("run_0000.csv") != std::string::npos);
    REQUIRE(out.files[2].find("summary.json") != std::string::npos);

    const std::string csv = slurp(out.files[0]);
    REQUIRE(csv.rfind("# hygreedy/0.1.0\n# params {", 0) == 0);
    const TraceAudit audit = audit_trace_csv(csv);
    REQUIRE(audit.rows ==
            static_cast<std::int64_t>(out.traces[0].checkpoints.size()));
    REQUIRE(audit.violations == 0);
    REQUIRE(audit.params.n == 199);

    const auto summary = nlohmann::json::parse(slurp(out.files[2]));
    REQUIRE(summary.at("version") == version_string);
    REQUIRE(summary.at("instance").at("regular") == true);
    REQUIRE(summary.at("terminal_size").at("count") == 2);
    REQUIRE(summary.at("stop").at("checked") == true);
    // Rows group by step index across runs, so run 0's rows are a subset.
    REQUIRE(summary.at("open_trajectory").size() >=
            static_cast<std::size_t>(audit.rows));
    REQUIRE(summary.at("open_trajectory")[0].at("i") == 0);

    // Replayable from the seed: identical traces, identical summary up to the
    // output directory recorded in the config block.
    ExperimentConfig cfg2 = cfg;
    cfg2.output_dir = fresh_dir("run2");
    const auto out2 = cmd_run(cfg2);
    REQUIRE(slurp(out2.files[0]) == csv);
    auto a = nlohmann::json::parse(slurp(out.files[2]));
    auto b = nlohmann::json::parse(slurp(out2.files[2]));
    a.erase("config");
    b.erase("config");
    REQUIRE(a.dump() == b.dump());

    // In-memory only when no formats are selected.
    ExperimentConfig quiet = cfg;
    quiet.format_csv = false;
    quiet.format_json = false;
    quiet.output_dir = fresh_dir("run3");
    REQUIRE(cmd_run(quiet).files.empty());
}

TEST_CASE("the trace audit flags corrupted rows and missing parameters",
          "[harness]") {
    ExperimentConfig cfg = kap_config(199);
    cfg.runs = 1;
    cfg.checkpoint_every = 50;
    cfg.format_json = false;
    cfg.output_dir = fresh_dir("audit");
    const auto out = cmd_run(cfg);
    std::string csv = slurp(out.files[0]);

    // Zero out the step-0 open count: the deviation jumps to N, far past
    // the N D^-delta band.
    const auto pos = csv.find("\n0,");
    REQUIRE(pos != std::string::npos);
    const auto comma = csv.find(",", csv.find(",", pos + 1) + 1);
    const auto next = csv.find(",", comma + 1);
    std::string corrupted = csv.substr(0, comma + 1) + "0" + csv.substr(next);
    const TraceAudit bad = audit_trace_csv(corrupted);
    REQUIRE(bad.violations >= 1);
    REQUIRE(bad.violating_steps.front() == 0);
    REQUIRE(bad.worst_ratio > 1.0);

    std::string no_params;
    for (const auto& line : {csv.substr(0, csv.find('\n') + 1),
                             csv.substr(csv.find("i,t,open"))})
        no_params += line;
    REQUIRE_THROWS_AS(audit_trace_csv(no_params), InputError);
}

TEST_CASE("the uniformity-norm command reports per-N statistics",
          "[harness]") {
    GowersExperiment bad;
    bad.k = 3;
    bad.d = 3;
    REQUIRE_THROWS_AS(cmd_gowers_experiment(bad), InputError);

    GowersExperiment g;
    g.ns = {13};
    g.k = 3;
    g.d = 2;
    g.runs = 3;
    g.seed_base = 1;
    const auto out = cmd_gowers_experiment(g);
    REQUIRE(out.at("per_n").size() == 1);
    const auto& row = out.at("per_n")[0];
    REQUIRE(row.at("n") == 13);
    REQUIRE(row.at("i_max").get<std::int64_t>() >= 1);
    REQUIRE(row.at("u1_max").get<double>() <= 1e-10);
    const double med = row.at("norm").at("median").get<double>();
    REQUIRE(med > 0.0);
    REQUIRE(med < 2.0);
    REQUIRE(row.at("terminal_size").at("min").get<double>() >= 2.0);

    const auto replay = cmd_gowers_experiment(g);
    REQUIRE(replay.dump() == out.dump());
}

TEST_CASE("the containment command matches the first-moment scale",
          "[harness]") {
    ExperimentConfig cfg;
    cfg.instance.generator = "template";
    cfg.instance.template_name = "triangle";
    cfg.instance.n = 40;
    cfg.runs = 5;
    cfg.zeta = 0.5;  // widens the horizon past i = 60
    CountSpec family;
    family.template_name = "cherry";
    family.base_n = 40;

    const auto out = cmd_count_experiment(cfg, family, 60);
    REQUIRE(out.at("family").at("size") == 29640);
    REQUIRE(out.at("prediction").get<double>() ==
            Catch::Approx(29640.0 * std::pow(60.0 / 780.0, 2)).epsilon(1e-12));
    const double ratio = out.at("ratio").get<double>();
    REQUIRE(ratio > 0.6);
    REQUIRE(ratio < 1.4);
    REQUIRE(out.at("short_runs") == 0);

    const auto at_zero = cmd_count_experiment(cfg, family, 0);
    REQUIRE(at_zero.at("count").at("max").get<double>() == 0.0);
    REQUIRE(at_zero.at("prediction").get<double>() == 0.0);

    // Past the stopping horizon.
    REQUIRE_THROWS_AS(cmd_count_experiment(cfg, family, 2000), HypothesisError);

    // A family whose sets are instance edges can never be contained.
    CountSpec self;
    self.template_name = "triangle";
    self.base_n = 40;
    REQUIRE_THROWS_AS(cmd_count_experiment(cfg, self, 60), HypothesisError);

    // Ground-set mismatch.
    CountSpec shifted;
    shifted.template_name = "cherry";
    shifted.base_n = 39;
    REQUIRE_THROWS_AS(cmd_count_experiment(cfg, shifted, 60), InputError);
}

TEST_CASE("the trajectory table ships thresholds and grid rows", "[harness]") {
    const auto prm =
        TrajectoryParams::make(3, 1'000'000, 10'000, 0.3, 0.03, 0.05, 15, 0, true);
    const std::string table = trajectory_table_csv(prm, 11, true);
    REQUIRE(table.find("t,q,s_2,s_3,s2p,s2m,s3m,f_v,f_2,f_3\n") != std::string::npos);
    REQUIRE(table.find("# threshold setdegree a=2 b=3 value=") != std::string::npos);
    REQUIRE(table.find("# threshold codegree a=2 a2=2 k=1 value=") != std::string::npos);
    REQUIRE(table.find("\n0,1,0,10000,") != std::string::npos);
    REQUIRE(table.find("# vareq result=pass") != std::string::npos);
    // 11 grid rows plus the header and comments.
    REQUIRE(std::count(table.begin(), table.end(), '\n') >= 12);
    REQUIRE_THROWS_AS(trajectory_table_csv(prm, 1), InputError);
}
