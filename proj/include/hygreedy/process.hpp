#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "hygreedy/common.hpp"
#include "hygreedy/hypergraph.hpp"
#include "hygreedy/rng.hpp"
#include "hygreedy/trajectory.hpp"

namespace hygreedy {

struct StepRecord {
    Vertex chosen = -1;
    std::vector<Vertex> closed;                    // C minus the chosen vertex
    std::vector<std::int64_t> shrunk_to;           // indexed by new size
    std::vector<std::int64_t> removed_closure;     // indexed by size at removal
    std::vector<std::int64_t> removed_domination;  // indexed by size at removal
};

struct CheckpointRow {
    std::int64_t i = 0;
    std::int64_t open = 0;
    std::vector<double> mean_d;        // index ell-2, ell in 2..r, over open vertices
    std::vector<std::int64_t> max_d;   // same indexing
    std::vector<std::int64_t> min_d;
    std::vector<std::int64_t> live_by_size;  // index ell-2
    std::int64_t live_total = 0;
    bool stop_checked = false;
    bool stop_ok = true;
    bool has_z = false;
    double z_v = 0;
    std::vector<double> z_plus;   // index ell-2, ell in 2..r-1
    std::vector<double> z_minus;  // index ell-2, ell in 2..r
};

struct RunTrace {
    std::vector<CheckpointRow> checkpoints;
    std::int64_t terminal_size = 0;
    std::int64_t final_step = 0;
    std::int64_t stop_step = -1;  // first monitored checkpoint that violated
    bool completed = false;       // open set exhausted
};

// Incremental state of the random greedy independent set process. Live edges
// are residuals of original edges: a vertex only ever leaves an edge when it
// is chosen, so the residual is pins minus the independent set, tracked with
// an alive flag and a current-size field.
class ProcessState {
  public:
    ProcessState(const Hypergraph& h, std::uint64_t seed)
        : h_(&h), seed_(seed), rng_(seed) {
        const Vertex n = h.vertex_count();
        rmax_ = std::max(2, h.max_edge_size());
        open_list_.resize(n);
        pos_.resize(n);
        for (Vertex v = 0; v < n; ++v) {
            open_list_[v] = v;
            pos_[v] = v;
        }
        in_i_.assign(n, 0);
        frozen_.assign(n, 0);
        alive_.assign(h.edge_count(), 1);
        size_.resize(h.edge_count());
        for (std::int64_t e = 0; e < h.edge_count(); ++e)
            size_[e] = static_cast<std::uint8_t>(h.edge_size(e));
        live_by_size_.assign(rmax_ + 1, 0);
        curr_.assign(rmax_ - 1, std::vector<std::int32_t>(n, 0));
        dplus_.assign(std::max(0, rmax_ - 2), std::vector<std::int32_t>(n, 0));
        dminus_.assign(rmax_ - 1, std::vector<std::int32_t>(n, 0));
        if (h.uniformity() >= 2) {
            live_by_size_[rmax_] = h.edge_count();
            for (Vertex v = 0; v < n; ++v)
                curr_[rmax_ - 2][v] = static_cast<std::int32_t>(h.degree(v));
        } else {
            init_mixed_sizes();
        }
    }

    const Hypergraph& hypergraph() const { return *h_; }
    std::uint64_t seed() const { return seed_; }
    std::int64_t step_count() const { return step_count_; }
    std::int64_t open_count() const { return static_cast<std::int64_t>(open_list_.size()); }
    const std::vector<Vertex>& open_vertices() const { return open_list_; }
    const std::vector<Vertex>& independent_set() const { return independent_set_; }
    bool is_open(Vertex v) const { return pos_[v] >= 0; }
    bool in_independent_set(Vertex v) const { return in_i_[v] != 0; }
    bool is_frozen(Vertex v) const { return frozen_[v] != 0; }
    bool edge_alive(std::int64_t e) const { return alive_[e] != 0; }
    int live_size(std::int64_t e) const { return size_[e]; }
    int max_size() const { return rmax_; }

    std::int64_t live_total() const {
        std::int64_t sum = 0;
        for (int s = 2; s <= rmax_; ++s) sum += live_by_size_[s];
        return sum;
    }

    std::int64_t live_count_of_size(int s) const {
        require_input(s >= 2 && s <= rmax_, "size out of range");
        return live_by_size_[s];
    }

    // Cumulative creations of ell-edges at v (2 <= ell <= r-1).
    std::int64_t d_plus(int ell, Vertex v) const {
        require_input(ell >= 2 && ell <= rmax_ - 1, "d_plus needs 2 <= ell <= r-1");
        return dplus_[ell - 2][v];
    }

    // Cumulative destructions of ell-edges at v (2 <= ell <= r).
    std::int64_t d_minus(int ell, Vertex v) const {
        require_input(ell >= 2 && ell <= rmax_, "d_minus needs 2 <= ell <= r");
        return dminus_[ell - 2][v];
    }

    // Current number of live ell-edges containing v.
    std::int64_t live_degree(int ell, Vertex v) const {
        require_input(ell >= 2 && ell <= rmax_, "live_degree needs 2 <= ell <= r");
        return curr_[ell - 2][v];
    }

    // Writes the current members of a live edge into out (capacity >= r);
    // returns the count, which equals live_size(e) for alive edges.
    int residual(std::int64_t e, Vertex* out) const {
        int k = 0;
        for (Vertex w : h_->edge(e))
            if (!in_i_[w]) out[k++] = w;
        return k;
    }

    StepRecord step() {
        require_input(!open_list_.empty(), "process already terminated");
        StepRecord rec;
        rec.shrunk_to.assign(rmax_ + 1, 0);
        rec.removed_closure.assign(rmax_ + 1, 0);
        rec.removed_domination.assign(rmax_ + 1, 0);

        const Vertex v = open_list_[rng_.below(open_list_.size())];
        rec.chosen = v;
        close_vertex(v);
        in_i_[v] = 1;
        independent_set_.push_back(v);

        // Closure set: the other endpoint of every live 2-edge at v.
        for (std::int32_t e : h_->incident(v)) {
            if (!alive_[e] || size_[e] != 2) continue;
            for (Vertex w : h_->edge(e))
                if (!in_i_[w]) {
                    rec.closed.push_back(w);
                    break;
                }
        }
        for (Vertex u : rec.closed) close_vertex(u);

        // Freezing above happened before any accounting: C members no longer
        // receive tracker updates this step.
        for (Vertex u : rec.closed)
            for (std::int32_t e : h_->incident(u))
                if (alive_[e]) remove_edge(e, rec.removed_closure);

        shrunk_buf_.clear();
        for (std::int32_t e : h_->incident(v)) {
            if (!alive_[e]) continue;
            shrink_edge(e, rec.shrunk_to);
            shrunk_buf_.push_back(e);
        }

        for (std::int32_t e : shrunk_buf_) domination_sweep(e, rec.removed_domination);

        ++step_count_;
        return rec;
    }

    CheckpointRow snapshot() const {
        CheckpointRow row;
        row.i = step_count_;
        row.open = open_count();
        row.mean_d.assign(rmax_ - 1, 0.0);
        row.max_d.assign(rmax_ - 1, 0);
        row.min_d.assign(rmax_ - 1, 0);
        row.live_by_size.assign(rmax_ - 1, 0);
        for (int s = 2; s <= rmax_; ++s) {
            row.live_by_size[s - 2] = live_by_size_[s];
            row.live_total += live_by_size_[s];
        }
        for (int ell = 2; ell <= rmax_; ++ell) {
            std::int64_t sum = 0;
            std::int64_t mx = 0;
            std::int64_t mn = open_list_.empty() ? 0 : std::numeric_limits<std::int64_t>::max();
            for (Vertex v : open_list_) {
                const std::int64_t d = curr_[ell - 2][v];
                sum += d;
                mx = std::max(mx, d);
                mn = std::min(mn, d);
            }
            row.mean_d[ell - 2] = open_list_.empty()
                                      ? 0.0
                                      : static_cast<double>(sum) / open_list_.size();
            row.max_d[ell - 2] = mx;
            row.min_d[ell - 2] = open_list_.empty() ? 0 : mn;
        }
        return row;
    }

    // Recomputes every structural invariant from scratch; throws on breakage.
    // Pairwise domination checking is quadratic in the live edge count.
    void validate(bool pairwise_domination = true) const {
        const Vertex n = h_->vertex_count();
        if (static_cast<std::int64_t>(independent_set_.size()) != step_count_)
            throw std::logic_error("|I| != step count");
        for (Vertex v : independent_set_)
            if (pos_[v] >= 0 || !in_i_[v] || !frozen_[v])
                throw std::logic_error("independent set member not closed/frozen");
        for (Vertex v = 0; v < n; ++v) {
            if ((pos_[v] >= 0) == (frozen_[v] != 0))
                throw std::logic_error("open iff unfrozen violated");
            if (pos_[v] >= 0 && open_list_[pos_[v]] != v)
                throw std::logic_error("open position table corrupt");
        }
        for (std::int64_t e = 0; e < h_->edge_count(); ++e) {
            bool all_in = true;
            for (Vertex w : h_->edge(e)) all_in = all_in && in_i_[w];
            if (all_in) throw std::logic_error("independent set contains an original edge");
            if (!alive_[e]) continue;
            int res = 0;
            for (Vertex w : h_->edge(e)) {
                if (in_i_[w]) continue;
                ++res;
                if (pos_[w] < 0)
                    throw std::logic_error("live edge contains a closed vertex");
            }
            if (res != size_[e] || res < 2)
                throw std::logic_error("live edge size field inconsistent");
        }
        if (pairwise_domination) check_no_containment();
        std::vector<std::int64_t> by_size(rmax_ + 1, 0);
        for (std::int64_t e = 0; e < h_->edge_count(); ++e)
            if (alive_[e]) ++by_size[size_[e]];
        for (int s = 2; s <= rmax_; ++s)
            if (by_size[s] != live_by_size_[s])
                throw std::logic_error("live size histogram inconsistent");
        for (Vertex v : open_list_) {
            for (int ell = 2; ell <= rmax_; ++ell) {
                std::int64_t count = 0;
                for (std::int32_t e : h_->incident(v))
                    if (alive_[e] && size_[e] == ell) ++count;
                if (count != curr_[ell - 2][v])
                    throw std::logic_error("live degree cache inconsistent");
                const std::int64_t plus = ell <= rmax_ - 1 ? dplus_[ell - 2][v] : 0;
                if (count != init_live_degree(ell, v) + plus - dminus_[ell - 2][v])
                    throw std::logic_error("tracker identity violated");
            }
        }
    }

    Rng& rng() { return rng_; }

  private:
    void close_vertex(Vertex v) {
        const std::int32_t p = pos_[v];
        const Vertex last = open_list_.back();
        open_list_[p] = last;
        pos_[last] = p;
        open_list_.pop_back();
        pos_[v] = -1;
        frozen_[v] = 1;
    }

    void remove_edge(std::int64_t e, std::vector<std::int64_t>& cause_tally) {
        const int s = size_[e];
        for (Vertex w : h_->edge(e)) {
            if (in_i_[w] || pos_[w] < 0) continue;
            ++dminus_[s - 2][w];
            --curr_[s - 2][w];
        }
        alive_[e] = 0;
        --live_by_size_[s];
        ++cause_tally[s];
    }

    void shrink_edge(std::int64_t e, std::vector<std::int64_t>& tally) {
        const int s = size_[e];
        if (s < 3) throw std::logic_error("attempted to shrink a 2-edge");
        for (Vertex w : h_->edge(e)) {
            if (in_i_[w] || pos_[w] < 0) continue;
            ++dplus_[s - 3][w];
            ++dminus_[s - 2][w];
            --curr_[s - 2][w];
            ++curr_[s - 3][w];
        }
        size_[e] = static_cast<std::uint8_t>(s - 1);
        --live_by_size_[s];
        ++live_by_size_[s - 1];
        ++tally[s - 1];
    }

    // Removes live edges whose residual strictly contains the residual of the
    // just-shrunk edge e. Candidates must contain the first two residual
    // members, found via the pair index or an incidence scan.
    void domination_sweep(std::int64_t e, std::vector<std::int64_t>& cause_tally) {
        std::array<Vertex, 256> buf;
        const int k = residual(e, buf.data());
        const auto dominated = [&](std::int64_t f) {
            if (f == e || !alive_[f] || size_[f] <= k) return false;
            for (int i = 0; i < k; ++i)
                if (!h_->edge_contains(f, buf[i])) return false;
            return true;
        };
        if (const PairIndex* pi = h_->pair_index()) {
            for (std::int32_t f : pi->bucket(buf[0], buf[1]))
                if (dominated(f)) remove_edge(f, cause_tally);
        } else {
            for (std::int32_t f : h_->incident(buf[0]))
                if (dominated(f)) remove_edge(f, cause_tally);
        }
    }

    void check_no_containment() const {
        std::vector<std::vector<Vertex>> residuals;
        std::array<Vertex, 256> buf;
        for (std::int64_t e = 0; e < h_->edge_count(); ++e) {
            if (!alive_[e]) continue;
            const int k = residual(e, buf.data());
            residuals.emplace_back(buf.begin(), buf.begin() + k);
        }
        for (std::size_t i = 0; i < residuals.size(); ++i)
            for (std::size_t j = 0; j < residuals.size(); ++j) {
                if (i == j) continue;
                if (std::includes(residuals[j].begin(), residuals[j].end(),
                                  residuals[i].begin(), residuals[i].end()))
                    throw std::logic_error("live edge contained in another live edge");
            }
    }

    std::int64_t init_live_degree(int ell, Vertex v) const {
        if (init_curr_.empty()) {
            // Uniform input: every edge starts live at full size.
            return ell == rmax_ ? h_->degree(v) : 0;
        }
        return init_curr_[ell - 2][v];
    }

    // Mixed-size input: drop edges dominated already at start, then count
    // initial live degrees per size.
    void init_mixed_sizes() {
        const std::int64_t m = h_->edge_count();
        for (std::int64_t e = 0; e < m; ++e) {
            const auto se = h_->edge(e);
            bool dom = false;
            for (std::size_t i = 0; i < se.size() && !dom; ++i)
                for (std::size_t j = i + 1; j < se.size() && !dom; ++j) {
                    auto candidates = h_->pair_index()
                                          ? h_->pair_index()->bucket(se[i], se[j])
                                          : h_->incident(se[i]);
                    for (std::int32_t f : candidates) {
                        if (f == e || h_->edge_size(f) >= h_->edge_size(e)) continue;
                        bool inside = true;
                        for (Vertex w : h_->edge(f))
                            inside = inside && std::binary_search(se.begin(), se.end(), w);
                        if (inside) {
                            dom = true;
                            break;
                        }
                    }
                }
            if (dom) alive_[e] = 0;
        }
        for (std::int64_t e = 0; e < m; ++e) {
            if (!alive_[e]) continue;
            ++live_by_size_[size_[e]];
            for (Vertex w : h_->edge(e)) ++curr_[size_[e] - 2][w];
        }
        init_curr_ = curr_;
    }

    const Hypergraph* h_;
    std::uint64_t seed_;
    Rng rng_;
    std::int64_t step_count_ = 0;
    int rmax_ = 2;
    std::vector<Vertex> open_list_;
    std::vector<std::int32_t> pos_;
    std::vector<std::uint8_t> in_i_;
    std::vector<std::uint8_t> frozen_;
    std::vector<Vertex> independent_set_;
    std::vector<std::uint8_t> alive_;
    std::vector<std::uint8_t> size_;
    std::vector<std::int64_t> live_by_size_;
    std::vector<std::vector<std::int32_t>> curr_;
    std::vector<std::vector<std::int32_t>> dplus_;
    std::vector<std::vector<std::int32_t>> dminus_;
    std::vector<std::vector<std::int32_t>> init_curr_;  // empty for uniform input
    std::vector<std::int32_t> shrunk_buf_;
};

// From-scratch oracle: the (open set, live residual family) implied by
// playing the independent set I against the original hypergraph.
struct ReferenceView {
    std::vector<Vertex> open;
    std::vector<std::vector<Vertex>> live;
};

inline ReferenceView reference_transition(const Hypergraph& h,
                                          const std::vector<Vertex>& independent) {
    const Vertex n = h.vertex_count();
    std::vector<std::uint8_t> in_i(n, 0);
    for (Vertex v : independent) {
        require_input(v >= 0 && v < n, "independent set vertex out of range");
        require_input(!in_i[v], "independent set repeats a vertex");
        in_i[v] = 1;
    }
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        bool all = true;
        for (Vertex w : h.edge(e)) all = all && in_i[w];
        require_input(!all, "vertex list is not independent");
    }
    ReferenceView view;
    std::vector<std::uint8_t> open(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        if (in_i[v]) continue;
        bool closed = false;
        for (std::int32_t e : h.incident(v)) {
            int outside = 0;
            for (Vertex w : h.edge(e))
                if (!in_i[w]) ++outside;
            if (outside == 1) {
                closed = true;
                break;
            }
        }
        open[v] = !closed;
        if (!closed) view.open.push_back(v);
    }
    std::vector<std::vector<Vertex>> candidates;
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        std::vector<Vertex> res;
        bool viable = true;
        for (Vertex w : h.edge(e)) {
            if (in_i[w]) continue;
            viable = viable && open[w];
            res.push_back(w);
        }
        if (viable && res.size() >= 2) candidates.push_back(std::move(res));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool minimal = true;
        for (std::size_t j = 0; j < candidates.size() && minimal; ++j) {
            if (i == j || candidates[j].size() >= candidates[i].size()) continue;
            minimal = !std::includes(candidates[i].begin(), candidates[i].end(),
                                     candidates[j].begin(), candidates[j].end());
        }
        if (minimal) view.live.push_back(candidates[i]);
    }
    return view;
}

inline ReferenceView engine_view(const ProcessState& st) {
    ReferenceView view;
    view.open = st.open_vertices();
    std::sort(view.open.begin(), view.open.end());
    std::array<Vertex, 256> buf;
    const auto& h = st.hypergraph();
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        if (!st.edge_alive(e)) continue;
        const int k = st.residual(e, buf.data());
        view.live.emplace_back(buf.begin(), buf.begin() + k);
    }
    std::sort(view.live.begin(), view.live.end());
    return view;
}

// Stop-condition families, selectable because the crude-bound enumerations
// are far more expensive than the dynamic ones.
inline constexpr unsigned stop_points = 1u;
inline constexpr unsigned stop_vertexdegree = 2u;
inline constexpr unsigned stop_setdegree = 4u;
inline constexpr unsigned stop_codegree = 8u;
inline constexpr unsigned stop_all = 15u;

struct FamilyVerdict {
    bool checked = false;
    bool ok = true;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::string witness;
};

struct StopReport {
    FamilyVerdict points;
    FamilyVerdict vertexdegree;
    FamilyVerdict setdegree;
    FamilyVerdict codegree;

    bool ok() const {
        return points.ok && vertexdegree.ok && setdegree.ok && codegree.ok;
    }
};

// Predicted centers and band widths at scaled time t, shared by the monitor,
// the diagnostics and the trace writer.
struct TrajectoryBands {
    double t = 0;
    double q = 1;
    double nq = 0;
    double fv_band = 0;                // N D^-delta f_v
    std::vector<double> s_plus;        // index ell-2, valid to r-1
    std::vector<double> s_minus;       // index ell-2, valid to r
    std::vector<double> degree_band;   // D^((ell-1)/(r-1)-delta) f_ell
};

inline TrajectoryBands expected_bands(const TrajectoryParams& prm, double t) {
    TrajectoryBands b;
    b.t = t;
    b.q = q_of(prm, t);
    const double nd = static_cast<double>(prm.n);
    const double dd = static_cast<double>(prm.d);
    b.nq = nd * b.q;
    b.fv_band = nd * std::pow(dd, -prm.delta) * f_v_of(prm, t).value;
    b.s_plus.assign(prm.r - 1, 0.0);
    b.s_minus.assign(prm.r - 1, 0.0);
    b.degree_band.assign(prm.r - 1, 0.0);
    for (int ell = 2; ell <= prm.r; ++ell) {
        if (ell <= prm.r - 1) b.s_plus[ell - 2] = s_pm_of(prm, ell, t, Sign::plus);
        b.s_minus[ell - 2] = s_pm_of(prm, ell, t, Sign::minus);
        b.degree_band[ell - 2] =
            std::pow(dd, static_cast<double>(ell - 1) / (prm.r - 1) - prm.delta) *
            f_ell_of(prm, ell, t).value;
    }
    return b;
}

namespace detail {

// Witness strings are built lazily: these run over every open vertex.
template <class MakeWitness>
inline void note_slack(FamilyVerdict& fam, double slack, MakeWitness&& make_witness) {
    if (slack < fam.worst_slack) fam.worst_slack = slack;
    if (slack < 0 && fam.ok) {
        fam.ok = false;
        fam.witness = make_witness();
    }
}

inline void check_points(const TrajectoryParams&, const ProcessState& st,
                         const TrajectoryBands& bands, FamilyVerdict& fam) {
    fam.checked = true;
    const double dev = std::abs(static_cast<double>(st.open_count()) - bands.nq);
    note_slack(fam, bands.fv_band - dev, [&] {
        return "|V|=" + std::to_string(st.open_count()) + " vs Nq=" +
               std::to_string(bands.nq) + " band=" + std::to_string(bands.fv_band);
    });
}

inline void check_vertexdegree(const TrajectoryParams& prm, const ProcessState& st,
                               const TrajectoryBands& bands, FamilyVerdict& fam) {
    fam.checked = true;
    for (int ell = 2; ell <= prm.r; ++ell) {
        const double band = bands.degree_band[ell - 2];
        for (Vertex v : st.open_vertices()) {
            if (ell <= prm.r - 1) {
                const double dev =
                    std::abs(static_cast<double>(st.d_plus(ell, v)) - bands.s_plus[ell - 2]);
                note_slack(fam, band - dev, [&] {
                    return "d_" + std::to_string(ell) + "^+(" + std::to_string(v) +
                           ")=" + std::to_string(st.d_plus(ell, v));
                });
            }
            const double dev =
                std::abs(static_cast<double>(st.d_minus(ell, v)) - bands.s_minus[ell - 2]);
            note_slack(fam, band - dev, [&] {
                return "d_" + std::to_string(ell) + "^-(" + std::to_string(v) +
                       ")=" + std::to_string(st.d_minus(ell, v));
            });
        }
    }
}

inline void check_setdegree(const TrajectoryParams& prm, const ProcessState& st,
                            FamilyVerdict& fam) {
    fam.checked = true;
    const auto& h = st.hypergraph();
    std::map<std::pair<int, std::vector<Vertex>>, std::int64_t> counts;
    std::array<Vertex, 256> buf;
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        if (!st.edge_alive(e)) continue;
        const int b = st.residual(e, buf.data());
        std::vector<int> idx;
        for (int a = 2; a < b; ++a) {
            idx.assign(a, 0);
            for (int i = 0; i < a; ++i) idx[i] = i;
            for (;;) {
                std::vector<Vertex> sub(a);
                for (int i = 0; i < a; ++i) sub[i] = buf[idx[i]];
                ++counts[{b, std::move(sub)}];
                int i = a - 1;
                while (i >= 0 && idx[i] == b - a + i) --i;
                if (i < 0) break;
                ++idx[i];
                for (int j = i + 1; j < a; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
    }
    for (const auto& [key, count] : counts) {
        const int b = key.first;
        const int a = static_cast<int>(key.second.size());
        const double slack = setdegree_threshold(prm, a, b) - static_cast<double>(count);
        note_slack(fam, slack, [&] {
            return "d_{A^" + std::to_string(b) + "}=" + std::to_string(count) +
                   " with |A|=" + std::to_string(a);
        });
    }
}

inline void check_codegree(const TrajectoryParams& prm, const ProcessState& st,
                           FamilyVerdict& fam) {
    fam.checked = true;
    const auto& h = st.hypergraph();
    std::unordered_map<std::uint64_t, std::int64_t> counts;
    std::array<Vertex, 256> buf_e, buf_f;
    std::vector<std::int32_t> at_u;
    for (Vertex u : st.open_vertices()) {
        at_u.clear();
        for (std::int32_t e : h.incident(u))
            if (st.edge_alive(e)) at_u.push_back(e);
        for (std::size_t i = 0; i < at_u.size(); ++i)
            for (std::size_t j = i + 1; j < at_u.size(); ++j) {
                const std::int64_t e = at_u[i], f = at_u[j];
                const int a = st.residual(e, buf_e.data());
                const int a2 = st.residual(f, buf_f.data());
                // Process each intersecting pair at its smallest common vertex.
                Vertex min_common = -1;
                int k = 0;
                int x = 0, y = 0;
                while (x < a && y < a2) {
                    if (buf_e[x] < buf_f[y]) ++x;
                    else if (buf_e[x] > buf_f[y]) ++y;
                    else {
                        if (min_common < 0) min_common = buf_e[x];
                        ++k;
                        ++x;
                        ++y;
                    }
                }
                if (min_common != u) continue;
                for (int p = 0; p < a; ++p) {
                    if (std::binary_search(buf_f.data(), buf_f.data() + a2, buf_e[p]))
                        continue;
                    for (int s = 0; s < a2; ++s) {
                        if (std::binary_search(buf_e.data(), buf_e.data() + a, buf_f[s]))
                            continue;
                        const auto pack = [&](Vertex v, Vertex v2, int sa, int sa2) {
                            return (static_cast<std::uint64_t>(v) << 40) |
                                   (static_cast<std::uint64_t>(v2) << 16) |
                                   (static_cast<std::uint64_t>(sa) << 11) |
                                   (static_cast<std::uint64_t>(sa2) << 6) |
                                   static_cast<std::uint64_t>(k);
                        };
                        ++counts[pack(buf_e[p], buf_f[s], a, a2)];
                        ++counts[pack(buf_f[s], buf_e[p], a2, a)];
                    }
                }
            }
    }
    for (const auto& [key, count] : counts) {
        const int k = static_cast<int>(key & 63);
        const int a2 = static_cast<int>(key >> 6 & 31);
        const int a = static_cast<int>(key >> 11 & 31);
        const double slack = codegree_threshold(prm, a, a2, k) - static_cast<double>(count);
        note_slack(fam, slack, [&] {
            return "c_{" + std::to_string(a) + "," + std::to_string(a2) + "->" +
                   std::to_string(k) + "}=" + std::to_string(count);
        });
    }
}

}  // namespace detail

inline void require_params_match(const TrajectoryParams& prm, const ProcessState& st) {
    const auto& h = st.hypergraph();
    require_input(h.uniformity() == prm.r, "params uniformity does not match instance");
    require_input(h.vertex_count() == prm.n, "params N does not match instance");
    const auto& ds = h.degree_stats();
    require_input(ds.regular && ds.min_degree == prm.d,
                  "params D does not match a regular instance degree");
}

inline StopReport stop_check(const TrajectoryParams& prm, const ProcessState& st,
                             unsigned families = stop_all) {
    require_params_match(prm, st);
    StopReport report;
    const double t = scaled_time(prm, st.step_count());
    const TrajectoryBands bands = expected_bands(prm, t);
    if (families & stop_points) detail::check_points(prm, st, bands, report.points);
    if (families & stop_vertexdegree)
        detail::check_vertexdegree(prm, st, bands, report.vertexdegree);
    if (families & stop_setdegree) detail::check_setdegree(prm, st, report.setdegree);
    if (families & stop_codegree) detail::check_codegree(prm, st, report.codegree);
    return report;
}

// Centered deviations: negative values mean the corresponding one-sided
// stopping inequality holds with room to spare.
struct ZDiagnostics {
    double z_v = 0;
    std::vector<double> z_plus_max;   // index ell-2, ell in 2..r-1
    std::vector<double> z_minus_max;  // index ell-2, ell in 2..r
};

inline ZDiagnostics z_diagnostics(const TrajectoryParams& prm, const ProcessState& st) {
    require_params_match(prm, st);
    const double t = scaled_time(prm, st.step_count());
    const TrajectoryBands bands = expected_bands(prm, t);
    ZDiagnostics z;
    z.z_v = static_cast<double>(st.open_count()) - bands.nq - bands.fv_band;
    z.z_plus_max.assign(std::max(0, prm.r - 2), 0.0);
    z.z_minus_max.assign(prm.r - 1, 0.0);
    for (int ell = 2; ell <= prm.r; ++ell) {
        const double band = bands.degree_band[ell - 2];
        double worst_plus = -std::numeric_limits<double>::infinity();
        double worst_minus = -std::numeric_limits<double>::infinity();
        if (st.open_count() == 0) {
            worst_plus = ell <= prm.r - 1 ? -bands.s_plus[ell - 2] - band : 0;
            worst_minus = -bands.s_minus[ell - 2] - band;
        }
        for (Vertex v : st.open_vertices()) {
            if (ell <= prm.r - 1)
                worst_plus = std::max(worst_plus, static_cast<double>(st.d_plus(ell, v)) -
                                                      bands.s_plus[ell - 2] - band);
            worst_minus = std::max(worst_minus, static_cast<double>(st.d_minus(ell, v)) -
                                                    bands.s_minus[ell - 2] - band);
        }
        if (ell <= prm.r - 1) z.z_plus_max[ell - 2] = worst_plus;
        z.z_minus_max[ell - 2] = worst_minus;
    }
    return z;
}

struct RunOptions {
    std::int64_t max_steps = -1;  // negative: run to termination
    std::int64_t checkpoint_every = 1;
    bool monitored = false;
    const TrajectoryParams* params = nullptr;
    unsigned stop_families = stop_points | stop_vertexdegree;
    bool halt_on_violation = false;
    bool with_z = false;
    std::vector<StepRecord>* events = nullptr;
    // Invoked at every checkpoint with the live state, e.g. to sample
    // per-vertex degrees that the aggregate rows do not keep.
    std::function<void(const ProcessState&, const CheckpointRow&)> on_checkpoint;
};

inline RunTrace run(ProcessState& st, const RunOptions& opt) {
    require_input(opt.checkpoint_every >= 1, "checkpoint_every must be >= 1");
    if (opt.monitored || opt.with_z)
        require_input(opt.params != nullptr,
                      "monitored runs need trajectory parameters");
    RunTrace trace;
    auto checkpoint = [&] {
        CheckpointRow row = st.snapshot();
        if (opt.monitored) {
            row.stop_checked = true;
            row.stop_ok = stop_check(*opt.params, st, opt.stop_families).ok();
            if (!row.stop_ok && trace.stop_step < 0) trace.stop_step = row.i;
        }
        if (opt.with_z) {
            const ZDiagnostics z = z_diagnostics(*opt.params, st);
            row.has_z = true;
            row.z_v = z.z_v;
            row.z_plus = z.z_plus_max;
            row.z_minus = z.z_minus_max;
        }
        const bool bad = row.stop_checked && !row.stop_ok;
        if (opt.on_checkpoint) opt.on_checkpoint(st, row);
        trace.checkpoints.push_back(std::move(row));
        return bad;
    };
    bool violated = checkpoint();
    std::int64_t steps_done = 0;
    while (st.open_count() > 0 && (opt.max_steps < 0 || steps_done < opt.max_steps)) {
        if (violated && opt.halt_on_violation) break;
        StepRecord rec = st.step();
        if (opt.events) opt.events->push_back(std::move(rec));
        ++steps_done;
        if (st.step_count() % opt.checkpoint_every == 0)
            violated = checkpoint() || violated;
    }
    if (trace.checkpoints.back().i != st.step_count()) checkpoint();
    trace.terminal_size = static_cast<std::int64_t>(st.independent_set().size());
    trace.final_step = st.step_count();
    trace.completed = st.open_count() == 0;
    return trace;
}

namespace detail {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace detail

// Data portion of the trace CSV; callers may prepend comment lines.
inline std::string trace_to_csv(const RunTrace& trace, const TrajectoryParams& prm) {
    std::string out = "i,t,open,Nq,fv_bound";
    const int r = prm.r;
    for (int ell = 2; ell <= r; ++ell) out += ",mean_d" + std::to_string(ell);
    for (int ell = 2; ell <= r; ++ell) out += ",max_d" + std::to_string(ell);
    out += ",live_edges,stop_ok\n";
    for (const auto& row : trace.checkpoints) {
        const double t = scaled_time(prm, row.i);
        const double q = q_of(prm, t);
        const double fv_band = static_cast<double>(prm.n) *
                               std::pow(static_cast<double>(prm.d), -prm.delta) *
                               f_v_of(prm, t).value;
        out += std::to_string(row.i) + "," + detail::format_double(t) + "," +
               std::to_string(row.open) + "," +
               detail::format_double(static_cast<double>(prm.n) * q) + "," +
               detail::format_double(fv_band);
        for (int ell = 2; ell <= r; ++ell)
            out += "," + detail::format_double(row.mean_d[ell - 2]);
        for (int ell = 2; ell <= r; ++ell)
            out += "," + std::to_string(row.max_d[ell - 2]);
        out += "," + std::to_string(row.live_total) + "," +
               (row.stop_checked && !row.stop_ok ? std::string("0") : std::string("1")) +
               "\n";
    }
    return out;
}

}  // namespace hygreedy
