// Acceptance gate: one check per criterion, each printing a single PASS or
// FAIL line with the measured numbers. Exit status is the failure count.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hygreedy/analysis.hpp"
#include "hygreedy/generators.hpp"
#include "hygreedy/harness.hpp"
#include "hygreedy/process.hpp"
#include "hygreedy/rng.hpp"
#include "hygreedy/trajectory.hpp"

using namespace hygreedy;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

template <class Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
    const auto start = Clock::now();
    bool ok = false;
    std::string detail;
    try {
        detail = fn(ok);
    } catch (const std::exception& ex) {
        ok = false;
        detail = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof(buf), " [%.1fs]", secs);
    report(id, name, ok, detail + buf);
}

std::string fmt(double x, int digits = 4) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return buf;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Pooled per-vertex degree samples, kept as counting histograms per

// checkpoint step and live-edge size.
struct DegreeHists {
    std::map<std::int64_t, std::array<std::vector<std::int64_t>, 2>> by_step;

    void add(std::int64_t i, int slot, std::int64_t d) {
        auto& h = by_step[i][slot];
        if (d >= static_cast<std::int64_t>(h.size())) h.resize(d + 1, 0);
        ++h[d];
    }

    static double hist_median(const std::vector<std::int64_t>& h) {
        std::int64_t total = 0;
        for (std::int64_t c : h) total += c;
        if (total == 0) return 0;
        const std::int64_t lo_rank = (total + 1) / 2, hi_rank = total / 2 + 1;
        double lo = -1, hi = -1;
        std::int64_t seen = 0;
        for (std::size_t d = 0; d < h.size(); ++d) {
            seen += h[d];
            if (lo < 0 && seen >= lo_rank) lo = static_cast<double>(d);
            if (hi < 0 && seen >= hi_rank) {
                hi = static_cast<double>(d);
                break;
            }
        }
        return 0.5 * (lo + hi);
    }
};

// Shared ensemble for the tracking and stopping criteria: traces plus pooled
// open-vertex degree histograms at aligned checkpoints in the q >= 0.3 range.
struct TrackedEnsemble {
    Hypergraph h;
    TrajectoryParams prm;
    std::vector<RunTrace> traces;
    std::vector<DegreeHists> per_run;  // merged after the ensemble finishes
    DegreeHists pooled;

    TrackedEnsemble(Hypergraph hg, const TrajectoryParams& p, int runs,
                    std::int64_t cadence)
        : h(std::move(hg)), prm(p), per_run(runs) {
        EnsembleOptions opt;
        opt.runs = runs;
        opt.seed_base = 1;
        opt.checkpoint_every = cadence;
        opt.monitored = true;
        opt.stop_families = stop_points;
        opt.on_checkpoint = [this, cadence](int idx, const ProcessState& st,
                                            const CheckpointRow& row) {
            if (row.i % cadence != 0) return;
            if (q_of(prm, scaled_time(prm, row.i)) < 0.3) return;
            for (Vertex v : st.open_vertices()) {
                per_run[idx].add(row.i, 0, st.live_degree(2, v));
                per_run[idx].add(row.i, 1, st.live_degree(prm.r, v));
            }
        };
        traces = run_ensemble(h, prm, opt);
        for (const auto& hists : per_run)
            for (const auto& [i, pair] : hists.by_step)
                for (int slot = 0; slot < 2; ++slot) {
                    auto& dst = pooled.by_step[i][slot];
                    if (dst.size() < pair[slot].size()) dst.resize(pair[slot].size(), 0);
                    for (std::size_t d = 0; d < pair[slot].size(); ++d)
                        dst[d] += pair[slot][d];
                }
        per_run.clear();
    }

    // Worst over aligned q >= 0.3 checkpoints of the ensemble median of
    // ||V| - Nq|/Nq; every run passes through this range before terminating.
    std::pair<double, std::int64_t> worst_open_median(std::int64_t cadence) const {
        std::map<std::int64_t, std::vector<double>> devs;
        for (const auto& tr : traces)
            for (const auto& row : tr.checkpoints) {
                if (row.i % cadence != 0) continue;
                const double q = q_of(prm, scaled_time(prm, row.i));
                if (q < 0.3) continue;
                const double nq = static_cast<double>(prm.n) * q;
                devs[row.i].push_back(std::abs(row.open - nq) / nq);
            }
        double worst = 0;
        std::int64_t worst_i = 0;
        for (auto& [i, v] : devs) {
            const double m = median_of(v);
            if (m > worst) {
                worst = m;
                worst_i = i;
            }
        }
        return {worst, worst_i};
    }

    // Worst |pooled median d_ell - s_ell(t)| / band over the same checkpoints,
    // band = 0.2 max(s_ell, 0.1 D^((ell-1)/(r-1))).
    std::pair<double, std::string> worst_degree_median() const {
        double worst = 0;
        std::string where = "-";
        for (const auto& [i, pair] : pooled.by_step) {
            const double t = scaled_time(prm, i);
            for (int slot = 0; slot < 2; ++slot) {
                const int ell = slot == 0 ? 2 : prm.r;
                const double med = DegreeHists::hist_median(pair[slot]);
                const double s = s_of(prm, ell, t);
                const double floor_scale =
                    0.1 * std::pow(static_cast<double>(prm.d),
                                   static_cast<double>(ell - 1) / (prm.r - 1));
                const double band = 0.2 * std::max(s, floor_scale);
                const double rel = std::abs(med - s) / band;
                if (rel > worst) {
                    worst = rel;
                    where = "l=" + std::to_string(ell) + " i=" + std::to_string(i) +
                            " med=" + fmt(med) + " s=" + fmt(s);
                }
            }
        }
        return {worst, where};
    }

    // Fraction of runs whose aligned q >= 0.3 checkpoints all satisfied the
    // monitored point-count band.
    double clean_run_fraction(std::int64_t cadence) const {
        int clean = 0;
        for (const auto& tr : traces) {
            bool ok = true;
            for (const auto& row : tr.checkpoints) {
                if (row.i % cadence != 0 || !row.stop_checked) continue;
                if (q_of(prm, scaled_time(prm, row.i)) < 0.3) continue;
                ok = ok && row.stop_ok;
            }
            clean += ok;
        }
        return static_cast<double>(clean) / static_cast<double>(traces.size());
    }
};

TrajectoryParams default_params(const Hypergraph& h) {
    return derive_params(h, ExperimentConfig{});
}

}  // namespace

int main() {
    std::unique_ptr<TrackedEnsemble> ap_ens;   // 3-AP process, N = 4999
    std::unique_ptr<TrackedEnsemble> tri_ens;  // triangle process over K_40

    criterion(1, "engine matches the from-scratch transition oracle", [&](bool& ok) {
        Rng rng(20240901);
        int trials = 0;
        for (; trials < 1000; ++trials) {
            const Vertex n = 6 + static_cast<Vertex>(rng.below(9));  // 6..14
            const int r = 3 + static_cast<int>(rng.below(2));
            const std::int64_t total = binomial(n, r);
            const std::int64_t m =
                1 + static_cast<std::int64_t>(rng.below(std::min<std::int64_t>(30, total)));
            const Hypergraph h = random_uniform(n, r, m, rng.next());
            const std::int64_t prefix = static_cast<std::int64_t>(rng.below(n + 1));
            ProcessState st(h, rng.next());
            for (std::int64_t j = 0; j < prefix && st.open_count() > 0; ++j) st.step();
            const ReferenceView got = engine_view(st);
            const ReferenceView want = reference_transition(h, st.independent_set());
            if (got.open != want.open || got.live != want.live) break;
        }
        ok = trials == 1000;
        return std::to_string(trials) + "/1000 random prefixes identical";
    });

    criterion(2, "open-vertex counts track Nq", [&](bool& ok) {
        Hypergraph ap = k_ap(4999, 3);
        require_input(ap.degree_stats().min_degree == 7497,
                      "unexpected degree for the 3-AP instance");
        const TrajectoryParams ap_prm = default_params(ap);
        ap_ens = std::make_unique<TrackedEnsemble>(std::move(ap), ap_prm, 20, 5);
        Hypergraph k40 = template_copies(template_by_name("triangle"), 40);
        require_input(k40.vertex_count() == 780 && k40.degree_stats().min_degree == 38,
                      "unexpected triangle-instance shape");
        const TrajectoryParams tri_prm = default_params(k40);
        tri_ens = std::make_unique<TrackedEnsemble>(std::move(k40), tri_prm, 20, 5);
        const auto [ap_worst, ap_i] = ap_ens->worst_open_median(5);
        const auto [tri_worst, tri_i] = tri_ens->worst_open_median(5);
        ok = ap_worst <= 0.10 && tri_worst <= 0.15;
        return "worst median rel dev " + fmt(ap_worst) + " at i=" + std::to_string(ap_i) +
               " (3-AP, tol 0.10); " + fmt(tri_worst) + " at i=" + std::to_string(tri_i) +
               " (K_40, tol 0.15)";
    });

    criterion(3, "open-vertex degrees track s_ell", [&](bool& ok) {
        require_input(ap_ens && tri_ens, "tracking ensembles missing");
        const auto [ap_rel, ap_where] = ap_ens->worst_degree_median();
        const auto [tri_rel, tri_where] = tri_ens->worst_degree_median();
        ok = ap_rel <= 1.0 && tri_rel <= 1.0;
        return "worst |median-s|/band " + fmt(ap_rel) + " (3-AP, " + ap_where + "); " +
               fmt(tri_rel) + " (K_40, " + tri_where + ")";
    });

    criterion(4, "diamond copy-instance closed forms", [&](bool& ok) {
        ok = true;
        std::string detail;
        for (int n : {8, 10}) {
            const Hypergraph h = template_copies(template_by_name("diamond"), n);
            const auto& ds = h.degree_stats();
            const std::int64_t want_d = 5 * (n - 2) * (n - 3) / 2;
            const std::int64_t want_d3 = 3 * (n - 3);
            const std::int64_t got_d3 = h.max_set_degree(3);
            ok = ok && ds.regular && ds.min_degree == want_d && got_d3 == want_d3;
            detail += "n=" + std::to_string(n) + ": D=" + std::to_string(ds.min_degree) +
                      "/" + std::to_string(want_d) + " Delta_3=" + std::to_string(got_d3) +
                      "/" + std::to_string(want_d3) + "  ";
        }
        return detail;
    });

    criterion(5, "balance verdicts and extremal exponents", [&](bool& ok) {
        const auto diamond = balance_check(template_by_name("diamond"));
        ok = !diamond.strictly_balanced && !diamond.witness.empty();
        for (const char* name : {"k3", "c4", "c6", "k4"})
            ok = ok && balance_check(template_by_name(name)).strictly_balanced;
        const auto c4 = turan_exponent(template_by_name("c4"));
        const auto k3 = turan_exponent(template_by_name("k3"));
        ok = ok && c4.power == Rational(4, 3) && c4.log_power == Rational(1, 3);
        ok = ok && k3.power == Rational(3, 2) && k3.log_power == Rational(1, 2);
        int agree = 0, total = 0;
        for (const char* name :
             {"k3", "c4", "c5", "c6", "k4", "k5", "diamond", "tripartite222", "k4_3"}) {
            const Template t = template_by_name(name);
            ++total;
            agree += degcond_predictor(t).all_ok == balance_check(t).strictly_balanced;
        }
        ok = ok && agree == total;
        return "diamond unbalanced with witness size " +
               std::to_string(diamond.witness.size()) + "; c4 exponent (" +
               c4.power.str() + "," + c4.log_power.str() + "); k3 (" + k3.power.str() +
               "," + k3.log_power.str() + "); predictor agreement " +
               std::to_string(agree) + "/" + std::to_string(total);
    });

    criterion(6, "band-width inequality search", [&](bool& ok) {
        ok = true;
        std::string detail;
        for (int r : {3, 4, 5}) {
            auto base = TrajectoryParams::make(r, 1'000'000, 10'000, 0.3, 0.03, 0.05,
                                              1, 0, true);
            const auto found = search_alpha_beta(base);
            ok = ok && found.report.all_pass && found.report.worst_slack > 0;
            detail += "r=" + std::to_string(r) + ": alpha=" + std::to_string(found.alpha) +
                      " beta=" + std::to_string(found.beta) + " min slack " +
                      fmt(found.report.worst_slack, 3) + "; ";
            base.alpha = 0;
            base.beta = 0;
            // With alpha = beta = 0 the f_v inequality is violated already at
            // t = 0: f_v'(0) = 0 while the right side is 3 f_2(0) = 3.
            const double slack0 =
                f_v_of(base, 0).derivative - 3 * f_ell_of(base, 2, 0).value;
            ok = ok && slack0 < 0 && !check_variation_equations(base).all_pass;
        }
        return detail + "alpha=beta=0 violates the f_v inequality at t=0";
    });

    criterion(7, "uniformity-norm trend of terminal progression-free sets", [&](bool& ok) {
        GowersExperiment g;
        g.ns = {53, 101, 199};
        g.k = 3;
        g.d = 2;
        g.runs = 20;
        g.seed_base = 1;
        g.zeta = 2.0;
        const nlohmann::json out = cmd_gowers_experiment(g);
        std::vector<double> medians;
        double u1_worst = 0;
        for (const auto& row : out.at("per_n"))
            medians.push_back(row.at("norm").at("median").get<double>()),
                u1_worst = std::max(u1_worst, row.at("u1_max").get<double>());
        bool below = true, nonincreasing = true;
        for (std::size_t i = 0; i < medians.size(); ++i) {
            below = below && medians[i] < 0.8;
            if (i > 0) nonincreasing = nonincreasing && medians[i] <= medians[i - 1];
        }
        const bool u1_ok = u1_worst <= 1e-10;
        ok = below && nonincreasing && u1_ok;
        return "medians " + fmt(medians[0]) + "/" + fmt(medians[1]) + "/" +
               fmt(medians[2]) + " (need each < 0.8: " + (below ? "yes" : "no") +
               ", nonincreasing: " + (nonincreasing ? "yes" : "no") + "); max U1 " +
               fmt(u1_worst, 3) + (u1_ok ? " <= 1e-10" : " > 1e-10");
    });

    criterion(8, "contained-pair counts match the first-moment prediction",
              [&](bool& ok) {
        const Hypergraph host = template_copies(template_by_name("triangle"), 40);
        const Hypergraph pairs = template_copies(template_by_name("cherry"), 40);
        const std::int64_t i = 60;
        const double p = static_cast<double>(i) / host.vertex_count();
        const double prediction =
            static_cast<double>(pairs.edge_count()) * p * p;
        double mean = 0;
        const int runs = 300;
        for (int run_idx = 0; run_idx < runs; ++run_idx) {
            ProcessState st(host, 1 + static_cast<std::uint64_t>(run_idx));
            for (std::int64_t j = 0; j < i && st.open_count() > 0; ++j) st.step();
            require_input(st.step_count() == i, "run terminated before the target step");
            mean += static_cast<double>(
                count_contained(pairs, st.independent_set(), p).count);
        }
        mean /= runs;
        const double ratio = mean / prediction;
        ok = std::abs(ratio - 1.0) <= 0.15;
        return "|G|=" + std::to_string(pairs.edge_count()) + " mean X_G " + fmt(mean) +
               " prediction " + fmt(prediction) + " ratio " + fmt(ratio);
    });

    criterion(9, "two-step containment frequency", [&](bool& ok) {
        const Hypergraph h(5, std::vector<std::vector<Vertex>>{{0, 1, 2}}, 3);
        const auto rep = containment_frequency(h, {0, 1}, 2, 10'000, 1);
        const double exact = 0.1;
        const double se = std::sqrt(exact * (1 - exact) / 10'000);
        ok = std::abs(rep.frequency - exact) <= 3 * se;
        return "frequency " + fmt(rep.frequency) + " vs exact 0.1, |dev| " +
               fmt(std::abs(rep.frequency - exact), 3) + " <= 3se = " + fmt(3 * se, 3);
    });

    criterion(10, "trajectory numerical identities", [&](bool& ok) {
        double worst_pm = 0, worst_ode = 0, worst_f = 0, worst_q = 0;
        for (int r : {3, 4, 5}) {
            const auto prm =
                TrajectoryParams::make(r, 1'000'000, 10'000, 0.3, 0.03, 0.4, 2, 1, true);
            const double dinv =
                std::pow(static_cast<double>(prm.d), -1.0 / (prm.r - 1));
            for (int g = 1; g <= 12; ++g) {
                const double t = prm.t_max * g / 12.0;
                const double h = 1e-5;
                for (int ell = 2; ell <= r; ++ell) {
                    const double s = s_of(prm, ell, t);
                    const double recon =
                        (ell <= r - 1 ? s_pm_of(prm, ell, t, Sign::plus)
                                      : static_cast<double>(prm.d)) -
                        s_pm_of(prm, ell, t, Sign::minus);
                    worst_pm = std::max(worst_pm, std::abs(recon - s) /
                                                      std::max(std::abs(s), 1e-6));
                    const double ds =
                        (s_of(prm, ell, t + h) - s_of(prm, ell, t - h)) / (2 * h);
                    const double creation =
                        ell <= r - 1 ? ell * s_of(prm, ell + 1, t) : 0.0;
                    const double rhs = dinv *
                                       (creation - (ell - 1) * s * s_of(prm, 2, t)) /
                                       q_of(prm, t);
                    worst_ode = std::max(worst_ode, std::abs(ds - rhs) /
                                                        std::max(std::abs(rhs), 1e-6));
                    const auto fl = f_ell_of(prm, ell, t);
                    const double dfl = (f_ell_of(prm, ell, t + h).value -
                                        f_ell_of(prm, ell, t - h).value) /
                                       (2 * h);
                    worst_f = std::max(worst_f, std::abs(dfl - fl.derivative) /
                                                    std::max(std::abs(fl.derivative), 1.0));
                }
                const auto fv = f_v_of(prm, t);
                const double dfv =
                    (f_v_of(prm, t + h).value - f_v_of(prm, t - h).value) / (2 * h);
                worst_f = std::max(worst_f, std::abs(dfv - fv.derivative) /
                                                std::max(std::abs(fv.derivative), 1.0));
            }
        }
        for (double zeta : {0.003, 0.05, 0.4}) {
            for (int r : {3, 4, 5}) {
                const auto prm =
                    TrajectoryParams::make(r, 1'000'000, 10'000, 0.3, 0.03, zeta, 1, 0,
                                            true);
                const double lhs = q_of(prm, prm.t_max);
                const double rhs =
                    std::pow(static_cast<double>(prm.n), -std::pow(prm.zeta, r - 1));
                worst_q = std::max(worst_q, std::abs(lhs - rhs) / rhs);
            }
        }
        ok = worst_pm <= 1e-7 && worst_ode <= 1e-5 && worst_f <= 1e-6 && worst_q <= 1e-9;
        return "s=s^+-s^- rel " + fmt(worst_pm, 3) + " (tol 1e-7); ODE rel " +
               fmt(worst_ode, 3) + " (1e-5); f' rel " + fmt(worst_f, 3) +
               " (1e-6); q(t_max) rel " + fmt(worst_q, 3) + " (1e-9)";
    });

    criterion(11, "stopping-condition sanity at the start and in ensembles",
              [&](bool& ok) {
        ok = true;
        std::string detail = "full check at i=0:";
        struct Case {
            std::string label;
            Hypergraph h;
        };
        std::vector<Case> cases;
        cases.push_back({"K_40", template_copies(template_by_name("triangle"), 40)});
        cases.push_back({"Z_499", k_ap(499, 3)});
        cases.push_back({"Z_53", k_ap(53, 3)});
        cases.push_back({"Z_101", k_ap(101, 3)});
        cases.push_back({"Z_199", k_ap(199, 3)});
        cases.push_back({"Z_127/5", k_ap(127, 5)});
        for (const auto& c : cases) {
            const TrajectoryParams prm = default_params(c.h);
            ProcessState st(c.h, 1);
            const bool pass = stop_check(prm, st, stop_all).ok();
            ok = ok && pass;
            detail += " " + c.label + (pass ? "+" : "-");
        }
        require_input(ap_ens != nullptr, "tracking ensemble missing");
        {
            // Dynamic families only at N = 4999: the crude-bound enumerations
            // scale with N D^2 and are out of desk range there.
            ProcessState st(ap_ens->h, 1);
            const bool pass =
                stop_check(ap_ens->prm, st, stop_points | stop_vertexdegree).ok();
            ok = ok && pass;
            detail += " Z_4999(dyn)";
            detail += pass ? "+" : "-";
        }
        const double clean = ap_ens->clean_run_fraction(5);
        ok = ok && clean >= 0.90;
        detail += "; clean point-band runs " + fmt(100 * clean, 3) + "% (need >= 90%)";
        return detail;
    });

    std::printf("%d of 11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
