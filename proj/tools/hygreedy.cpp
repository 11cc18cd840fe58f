#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hygreedy/harness.hpp>

namespace hg = hygreedy;

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    hg::require_input(f.good(), "cannot write " + out_path);
    f << text;
    hg::require_input(f.good(), "write failed for " + out_path);
}

hg::Template load_template(const std::string& name, const std::string& file) {
    hg::require_input(!name.empty() || !file.empty(),
                      "pass --template NAME or --template-file PATH");
    return file.empty() ? hg::template_by_name(name) : hg::read_template(file);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random greedy independent set laboratory", "hygreedy"};
    app.require_subcommand(1);
    int rc = 0;

    // gen: materialize instances and labeled families
    auto* gen = app.add_subcommand("gen", "generate an instance or labeled family");
    std::string g_type, g_out, g_tpl, g_tpl_file;
    std::int64_t g_n = 0, g_m = 0;
    int g_k = 3, g_r = 3, g_d = 1;
    std::uint64_t g_seed = 0;
    bool g_mult = false;
    gen->add_option("--type", g_type, "kap | sumfree | dcube | random | template | triangle")
        ->required();
    gen->add_option("--n", g_n, "ground or base vertex count");
    gen->add_option("--k", g_k, "progression length (kap)");
    gen->add_option("--d", g_d, "cube dimension (dcube)");
    gen->add_option("--r", g_r, "edge size (random)");
    gen->add_option("--m", g_m, "edge count (random)");
    gen->add_option("--seed", g_seed, "generation seed (random)");
    gen->add_option("--template", g_tpl, "named template (template)");
    gen->add_option("--template-file", g_tpl_file, "template file (template)");
    gen->add_flag("--multiplicity", g_mult,
                  "kap: keep one labeled set per (start, difference) pair");
    gen->add_option("--out", g_out, "output path (.json for the JSON mirror)")->required();
    gen->callback([&] {
        if (g_type == "kap" && g_mult) {
            const auto f = hg::k_ap_labeled(g_n, g_k);
            hg::write_family(f, g_out);
            std::cout << "wrote " << g_out << ": " << f.size() << " labeled sets over Z_"
                      << g_n << "\n";
            return;
        }
        if (g_type == "dcube") {
            const auto f = hg::d_cube(g_n, g_d);
            hg::write_family(f, g_out);
            std::cout << "wrote " << g_out << ": " << f.size() << " labeled cubes over Z_"
                      << g_n << "\n";
            return;
        }
        hg::InstanceSpec spec;
        if (g_type == "triangle") {
            spec.generator = "template";
            spec.template_name = "triangle";
            spec.n = g_n;
        } else {
            spec.generator = g_type;
            spec.template_name = g_tpl;
            if (g_type == "template") spec.path = g_tpl_file;
            spec.n = g_n;
            spec.k = g_k;
            spec.r = g_r;
            spec.m = g_m;
            spec.gen_seed = g_seed;
        }
        const hg::Hypergraph h = hg::build_instance(spec);
        if (g_out.size() >= 5 && g_out.compare(g_out.size() - 5, 5, ".json") == 0)
            emit(hg::hypergraph_to_json(h).dump(2) + "\n", g_out);
        else
            hg::write_hypergraph(h, g_out);
        const auto& ds = h.degree_stats();
        std::cout << "wrote " << g_out << ": n=" << h.vertex_count()
                  << " m=" << h.edge_count() << " r=" << h.uniformity();
        if (ds.regular) std::cout << " D=" << ds.min_degree;
        std::cout << "\n";
    });

    // Shared instance flags for run/count.
    struct InstanceFlags {
        std::string gen_type, file, tpl, tpl_file;
        std::int64_t n = 0, m = 0;
        int k = 3, r = 3;
        std::uint64_t seed = 0;
    };
    auto add_instance_flags = [](CLI::App* sub, InstanceFlags& f) {
        sub->add_option("--gen", f.gen_type, "instance generator: kap | sumfree | template | random");
        sub->add_option("--file", f.file, "instance file (hg1 or JSON)");
        sub->add_option("--n", f.n, "ground or base vertex count");
        sub->add_option("--k", f.k, "progression length (kap)");
        sub->add_option("--r", f.r, "edge size (random)");
        sub->add_option("--m", f.m, "edge count (random)");
        sub->add_option("--gen-seed", f.seed, "generation seed (random)");
        sub->add_option("--template", f.tpl, "named template (template)");
        sub->add_option("--template-file", f.tpl_file, "template file (template)");
    };
    auto apply_instance_flags = [](CLI::App* sub, const InstanceFlags& f,
                                   hg::ExperimentConfig& cfg, bool& have) {
        if (!sub->count("--gen") && !sub->count("--file")) return;
        hg::InstanceSpec s;
        if (sub->count("--file")) {
            s.generator = "file";
            s.path = f.file;
        } else {
            s.generator = f.gen_type;
            s.template_name = f.tpl;
            if (f.gen_type == "template") s.path = f.tpl_file;
            s.n = f.n;
            s.k = f.k;
            s.r = f.r;
            s.m = f.m;
            s.gen_seed = f.seed;
        }
        cfg.instance = s;
        have = true;
    };

    // run: seeded ensemble with traces and a summary
    auto* runc = app.add_subcommand("run", "run a seeded ensemble; write traces and a summary");
    InstanceFlags r_inst;
    add_instance_flags(runc, r_inst);
    std::string r_config, r_out;
    int r_runs = 1;
    std::uint64_t r_seed_base = 1;
    std::int64_t r_every = 1, r_max_steps = -1;
    double r_eps = 0, r_delta = 0, r_zeta = 0, r_alpha = 0, r_beta = 0;
    bool r_no_stop = false, r_z = false, r_no_csv = false, r_no_json = false;
    runc->add_option("--config", r_config, "experiment config JSON; flags override it");
    runc->add_option("--runs", r_runs, "number of independent runs");
    runc->add_option("--seed-base", r_seed_base, "per-run seed = seed base + run index");
    runc->add_option("--checkpoint-every", r_every, "steps between checkpoints");
    runc->add_option("--max-steps", r_max_steps, "step cap (negative: run to termination)");
    runc->add_option("--epsilon", r_eps, "override epsilon");
    runc->add_option("--delta", r_delta, "override delta");
    runc->add_option("--zeta", r_zeta, "override zeta");
    runc->add_option("--alpha", r_alpha, "override alpha");
    runc->add_option("--beta", r_beta, "override beta");
    runc->add_flag("--no-stop-check", r_no_stop, "disable the stop-condition monitor");
    runc->add_flag("--z", r_z, "record self-correction diagnostics at checkpoints");
    runc->add_option("--out", r_out, "output directory");
    runc->add_flag("--no-csv", r_no_csv, "skip per-run trace CSVs");
    runc->add_flag("--no-json", r_no_json, "skip the summary JSON");
    runc->callback([&] {
        hg::ExperimentConfig cfg;
        bool have = false;
        if (!r_config.empty()) {
            cfg = hg::config_from_json(
                nlohmann::json::parse(hg::detail::read_file(r_config)));
            have = true;
        }
        apply_instance_flags(runc, r_inst, cfg, have);
        hg::require_input(have, "run needs --config or an instance (--gen or --file)");
        if (runc->count("--runs")) cfg.runs = r_runs;
        if (runc->count("--seed-base")) cfg.seed_base = r_seed_base;
        if (runc->count("--checkpoint-every")) cfg.checkpoint_every = r_every;
        if (runc->count("--max-steps")) cfg.max_steps = r_max_steps;
        if (runc->count("--epsilon")) cfg.epsilon = r_eps;
        if (runc->count("--delta")) cfg.delta = r_delta;
        if (runc->count("--zeta")) cfg.zeta = r_zeta;
        if (runc->count("--alpha")) cfg.alpha = r_alpha;
        if (runc->count("--beta")) cfg.beta = r_beta;
        if (r_no_stop) cfg.monitor_stop = false;
        if (r_z) cfg.monitor_z = true;
        if (runc->count("--out")) cfg.output_dir = r_out;
        if (r_no_csv) cfg.format_csv = false;
        if (r_no_json) cfg.format_json = false;
        const auto res = hg::cmd_run(cfg);
        if (!res.params.ordering_warning.empty())
            std::cerr << "warning: " << res.params.ordering_warning << "\n";
        for (const auto& f : res.files) std::cout << "wrote " << f << "\n";
        if (!cfg.format_json) {
            std::cout << res.summary.dump(2) << "\n";
            return;
        }
        const auto& term = res.summary.at("terminal_size");
        std::cout << "terminal |I|: mean=" << term.at("mean").get<double>()
                  << " median=" << term.at("median").get<double>()
                  << " min=" << term.at("min").get<double>()
                  << " max=" << term.at("max").get<double>() << "\n"
                  << "prediction scale N (log N / D)^(1/(r-1)) = "
                  << res.summary.at("prediction_scale").get<double>() << ", ratio = "
                  << res.summary.at("terminal_mean_over_prediction").get<double>() << "\n";
        const auto& stop = res.summary.at("stop");
        if (stop.at("checked").get<bool>())
            std::cout << "stop violations: " << stop.at("violating_runs").get<std::int64_t>()
                      << "/" << cfg.runs << " runs (before i_max="
                      << stop.at("i_max").get<std::int64_t>() << ": "
                      << stop.at("violating_runs_before_imax").get<std::int64_t>() << ")\n";
    });

    // traj: predicted trajectories on a t-grid
    auto* traj = app.add_subcommand("traj", "emit the predicted trajectory table");
    int t_r = 3, t_points = 201, t_grid = 10'000;
    std::int64_t t_n = 0, t_d = 0;
    double t_eps = 0, t_delta = std::nan(""), t_zeta = std::nan("");
    double t_alpha = std::nan(""), t_beta = std::nan("");
    bool t_vareq = false, t_search = false;
    std::string t_out;
    traj->add_option("--r", t_r, "uniformity")->required();
    traj->add_option("--n", t_n, "vertex count N")->required();
    traj->add_option("--d", t_d, "degree D")->required();
    traj->add_option("--epsilon", t_eps, "epsilon")->required();
    traj->add_option("--delta", t_delta, "delta (default epsilon/10)");
    traj->add_option("--zeta", t_zeta, "zeta (default delta/10)");
    traj->add_option("--alpha", t_alpha, "alpha (default 1, or searched)");
    traj->add_option("--beta", t_beta, "beta (default 0, or searched)");
    traj->add_flag("--search", t_search, "search (alpha, beta) before emitting");
    traj->add_flag("--check-vareq", t_vareq, "append the variation-equation report");
    traj->add_option("--points", t_points, "grid rows");
    traj->add_option("--grid", t_grid, "variation-equation grid points");
    traj->add_option("--out", t_out, "output path (default stdout)");
    traj->callback([&] {
        const double delta = std::isnan(t_delta) ? t_eps / 10 : t_delta;
        const double zeta = std::isnan(t_zeta) ? delta / 10 : t_zeta;
        double alpha = t_alpha, beta = t_beta;
        if (t_search && (std::isnan(alpha) || std::isnan(beta))) {
            const auto base =
                hg::TrajectoryParams::make(t_r, t_n, t_d, t_eps, delta, zeta, 1, 0, true);
            const auto found = hg::search_alpha_beta(base);
            if (std::isnan(alpha)) alpha = found.alpha;
            if (std::isnan(beta)) beta = found.beta;
            std::cerr << "search: alpha=" << alpha << " beta=" << beta << "\n";
        }
        if (std::isnan(alpha)) alpha = 1;
        if (std::isnan(beta)) beta = 0;
        const auto prm =
            hg::TrajectoryParams::make(t_r, t_n, t_d, t_eps, delta, zeta, alpha, beta, true);
        if (!prm.ordering_warning.empty())
            std::cerr << "warning: " << prm.ordering_warning << "\n";
        emit(hg::trajectory_table_csv(prm, t_points, t_vareq, t_grid), t_out);
    });

    // gowers: uniformity norms of terminal sets of the k-AP process
    auto* gow = app.add_subcommand("gowers", "uniformity-norm statistics of terminal sets");
    hg::GowersExperiment g_exp;
    std::string gw_out;
    gow->add_option("--n", g_exp.ns, "prime moduli (repeatable)")->required();
    gow->add_option("--k", g_exp.k, "progression length");
    gow->add_option("--d", g_exp.d, "norm order; must satisfy 2^(d-1) = k-1");
    gow->add_option("--runs", g_exp.runs, "runs per modulus");
    gow->add_option("--seed-base", g_exp.seed_base, "per-run seed = seed base + run index");
    gow->add_option("--zeta", g_exp.zeta, "stopping horizon parameter");
    gow->add_option("--budget", g_exp.budget, "operation cap for the norm");
    gow->add_option("--out", gw_out, "output path (default stdout)");
    gow->callback([&] { emit(hg::cmd_gowers_experiment(g_exp).dump(2) + "\n", gw_out); });

    // count: contained-copies statistics against the first-moment prediction
    auto* cnt = app.add_subcommand("count", "count family sets inside the evolving set");
    InstanceFlags c_inst;
    add_instance_flags(cnt, c_inst);
    std::string c_config, c_fam_tpl, c_fam_file, c_out;
    int c_base_n = 0, c_runs = 1;
    std::int64_t c_i = 0;
    std::uint64_t c_seed_base = 1;
    double c_zeta = 0;
    cnt->add_option("--config", c_config, "experiment config JSON; flags override it");
    cnt->add_option("--family-template", c_fam_tpl, "counting family: named template copies");
    cnt->add_option("--family-file", c_fam_file, "counting family: template or family file");
    cnt->add_option("--base-n", c_base_n, "base vertex count for template copies");
    cnt->add_option("--i", c_i, "process steps before counting")->required();
    cnt->add_option("--runs", c_runs, "number of independent runs");
    cnt->add_option("--seed-base", c_seed_base, "per-run seed = seed base + run index");
    cnt->add_option("--zeta", c_zeta, "override zeta (widens the stopping horizon)");
    cnt->add_option("--out", c_out, "output path (default stdout)");
    cnt->callback([&] {
        hg::ExperimentConfig cfg;
        bool have = false;
        if (!c_config.empty()) {
            cfg = hg::config_from_json(
                nlohmann::json::parse(hg::detail::read_file(c_config)));
            have = true;
        }
        apply_instance_flags(cnt, c_inst, cfg, have);
        hg::require_input(have, "count needs --config or an instance (--gen or --file)");
        if (cnt->count("--runs")) cfg.runs = c_runs;
        if (cnt->count("--seed-base")) cfg.seed_base = c_seed_base;
        if (cnt->count("--zeta")) cfg.zeta = c_zeta;
        hg::CountSpec fam;
        fam.template_name = c_fam_tpl;
        fam.path = c_fam_file;
        fam.base_n = c_base_n;
        emit(hg::cmd_count_experiment(cfg, fam, c_i).dump(2) + "\n", c_out);
    });

    // balance: strict balancedness and the degree-condition predictor
    auto* bal = app.add_subcommand("balance", "strict balance check for a template");
    std::string b_tpl, b_tpl_file;
    bal->add_option("--template", b_tpl, "named template");
    bal->add_option("--template-file", b_tpl_file, "template file");
    bal->callback([&] {
        const hg::Template t = load_template(b_tpl, b_tpl_file);
        const auto v = hg::balance_check(t, b_tpl.empty() ? b_tpl_file : b_tpl);
        const auto dc = hg::degcond_predictor(t);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : dc.rows)
            rows.push_back(nlohmann::json{{"a", row.a},
                                          {"v_a", row.v_a},
                                          {"lhs_exponent", row.lhs_exponent.str()},
                                          {"rhs_exponent", row.rhs_exponent.str()},
                                          {"ok", row.ok}});
        std::cout << nlohmann::json{{"template", v.template_id},
                                    {"k", v.k},
                                    {"v_h", v.v_h},
                                    {"e_h", v.e_h},
                                    {"strictly_balanced", v.strictly_balanced},
                                    {"witness", v.witness},
                                    {"density_ratio", v.density_ratio.str()},
                                    {"degcond", rows},
                                    {"degcond_all_ok", dc.all_ok}}
                         .dump(2)
                  << "\n";
    });

    // turan: lower-bound exponents for the template's forbidden-copies count
    auto* tur = app.add_subcommand("turan", "extremal exponents for a template");
    std::string u_tpl, u_tpl_file;
    bool u_force = false;
    tur->add_option("--template", u_tpl, "named template");
    tur->add_option("--template-file", u_tpl_file, "template file");
    tur->add_flag("--force", u_force, "skip the strict-balance hypothesis check");
    tur->callback([&] {
        const hg::Template t = load_template(u_tpl, u_tpl_file);
        const auto e = hg::turan_exponent(t, !u_force);
        std::cout << nlohmann::json{{"template", u_tpl.empty() ? u_tpl_file : u_tpl},
                                    {"power", e.power.str()},
                                    {"power_value", e.power.value()},
                                    {"log_power", e.log_power.str()},
                                    {"log_power_value", e.log_power.value()}}
                         .dump(2)
                  << "\n";
    });

    // check: audit a saved trace against the open-vertex band
    auto* chk = app.add_subcommand("check", "audit a saved trace CSV against its band");
    std::string k_trace;
    chk->add_option("--trace", k_trace, "trace CSV written by the run command")->required();
    chk->callback([&] {
        const auto audit = hg::audit_trace_csv(hg::detail::read_file(k_trace));
        std::cout << "rows: " << audit.rows << "\nviolations: " << audit.violations
                  << "\nworst deviation/band: " << audit.worst_ratio << " at i="
                  << audit.worst_step << "\n";
        if (audit.violations > 0) {
            std::cout << "violating steps:";
            for (const auto i : audit.violating_steps) std::cout << " " << i;
            std::cout << "\n";
            rc = 3;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const hg::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const hg::HypothesisError& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return 3;
    } catch (const hg::ResourceError& e) {
        std::cerr << "resource budget exceeded: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
