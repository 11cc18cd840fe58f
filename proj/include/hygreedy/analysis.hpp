#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "hygreedy/combinatorics.hpp"
#include "hygreedy/common.hpp"
#include "hygreedy/families.hpp"
#include "hygreedy/hypergraph.hpp"
#include "hygreedy/process.hpp"
#include "hygreedy/rational.hpp"

namespace hygreedy {

namespace detail {

struct GowersChunk {
    double sum = 0;
    double comp = 0;
    __int128 exact = 0;
};

inline void neumaier_add(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
    else
        comp += (x - t) + sum;
    sum = t;
}

}  // namespace detail

// Gowers U^d norm of nu_I - 1 where nu_I = (N/|I|) 1_I, by the direct sum
// over (x, h) in Z_N^(d+1) of the product of (nu_I - 1) over the 2^d cube
// vertices x + w.h. When (N-1)^(2^d) fits in 64 bits the sum is computed in
// exact integer arithmetic (the factor values scaled by |I| are integers);
// otherwise compensated double summation is used. Work is chunked over h with
// a fixed reduction order, so results are identical for any thread count.
inline double gowers_norm(std::vector<Vertex> members, std::int64_t n, int d,
                          double budget = 4e9) {
    require_input(n >= 1, "gowers_norm needs N >= 1");
    require_input(d >= 1, "gowers_norm needs d >= 1");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    require_input(!members.empty(), "gowers_norm: the set is empty");
    for (Vertex v : members)
        require_input(v >= 0 && v < n, "gowers_norm: vertex out of range");
    const std::int64_t a = static_cast<std::int64_t>(members.size());
    const int cube = 1 << d;
    const double work = std::pow(static_cast<double>(n), d + 1) * cube;
    if (work > budget)
        throw ResourceError("gowers_norm needs N^(d+1) 2^d = " + std::to_string(work) +
                            " operations, over the budget of " + std::to_string(budget));
    // (N-1)^(2^d) must fit in int64 for the exact integer path.
    const bool exact =
        n <= 2 || cube * std::log2(static_cast<double>(n - 1)) < 62.0;

    // Factor tables, doubled so x + offset needs no modulo.
    std::vector<std::int64_t> ivals(2 * n);
    std::vector<double> dvals(2 * n);
    for (std::int64_t v = 0; v < n; ++v) {
        const bool in = std::binary_search(members.begin(), members.end(),
                                           static_cast<Vertex>(v));
        ivals[v] = ivals[v + n] = in ? n - a : -a;
        dvals[v] = dvals[v + n] = static_cast<double>(ivals[v]) / static_cast<double>(a);
    }

    std::int64_t h_total = 1;
    for (int i = 0; i < d; ++i) h_total *= n;
    const std::int64_t chunk_size = 1024;
    const std::int64_t chunks = (h_total + chunk_size - 1) / chunk_size;
    std::vector<detail::GowersChunk> partials(chunks);
    std::atomic<std::int64_t> next{0};

    auto worker = [&] {
        std::vector<std::int64_t> h(d), offs(cube);
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= chunks) break;
            detail::GowersChunk part;
            const std::int64_t h_begin = c * chunk_size;
            const std::int64_t h_end = std::min(h_begin + chunk_size, h_total);
            std::int64_t code = h_begin;
            for (int i = 0; i < d; ++i) {
                h[i] = code % n;
                code /= n;
            }
            for (std::int64_t hi = h_begin; hi < h_end; ++hi) {
                offs[0] = 0;
                for (int w = 1; w < cube; ++w) {
                    const int bit = std::countr_zero(static_cast<unsigned>(w));
                    std::int64_t o = offs[w & (w - 1)] + h[bit];
                    if (o >= n) o -= n;
                    offs[w] = o;
                }
                if (exact) {
                    for (std::int64_t x = 0; x < n; ++x) {
                        std::int64_t prod = 1;
                        for (int w = 0; w < cube; ++w) prod *= ivals[x + offs[w]];
                        part.exact += prod;
                    }
                } else {
                    for (std::int64_t x = 0; x < n; ++x) {
                        double prod = 1;
                        for (int w = 0; w < cube; ++w) prod *= dvals[x + offs[w]];
                        detail::neumaier_add(part.sum, part.comp, prod);
                    }
                }
                // Increment h with carries for the next iteration.
                for (int i = 0; i < d; ++i) {
                    if (++h[i] < n) break;
                    h[i] = 0;
                }
            }
            partials[c] = part;
        }
    };

    const int workers = std::min<std::int64_t>(thread_count(), chunks);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double mean;
    if (exact) {
        __int128 total = 0;
        for (const auto& part : partials) total += part.exact;
        // The integer sum is scaled by |I|^(2^d).
        double scaled = static_cast<double>(total);
        mean = scaled / std::pow(static_cast<double>(a), cube) /
               std::pow(static_cast<double>(n), d + 1);
    } else {
        double sum = 0, comp = 0;
        for (const auto& part : partials) {
            detail::neumaier_add(sum, comp, part.sum);
            detail::neumaier_add(sum, comp, part.comp);
        }
        mean = (sum + comp) / std::pow(static_cast<double>(n), d + 1);
    }
    return std::pow(std::abs(mean), 1.0 / cube);
}

// Uniform access to the sets of a Hypergraph or a LabeledFamily.
struct FamilyView {
    std::int64_t count = 0;
    Vertex n = 0;
    std::function<std::span<const Vertex>(std::int64_t)> set;

    explicit FamilyView(const Hypergraph& h)
        : count(h.edge_count()), n(h.vertex_count()),
          set([&h](std::int64_t i) { return h.edge(i); }) {}
    explicit FamilyView(const LabeledFamily& f)
        : count(f.size()), n(f.n), set([&f](std::int64_t i) { return f.set(i); }) {}
};

struct IntersectionProfile {
    std::vector<std::int64_t> histogram;  // index x = |set cap I|
    std::vector<double> prediction;       // |F| C(s, x) p^x, when uniform
    double p = 0;
};

inline IntersectionProfile intersection_profile(const FamilyView& f,
                                                const std::vector<Vertex>& members) {
    std::vector<std::uint8_t> in(f.n, 0);
    for (Vertex v : members) {
        require_input(v >= 0 && v < f.n, "intersection_profile: vertex out of range");
        in[v] = 1;
    }
    int max_size = 0;
    for (std::int64_t i = 0; i < f.count; ++i)
        max_size = std::max(max_size, static_cast<int>(f.set(i).size()));
    IntersectionProfile out;
    out.histogram.assign(max_size + 1, 0);
    out.p = f.n ? static_cast<double>(members.size()) / f.n : 0;
    bool uniform = true;
    for (std::int64_t i = 0; i < f.count; ++i) {
        const auto sp = f.set(i);
        uniform = uniform && static_cast<int>(sp.size()) == max_size;
        int x = 0;
        for (Vertex v : sp) x += in[v];
        ++out.histogram[x];
    }
    if (uniform && f.count > 0) {
        out.prediction.assign(max_size + 1, 0);
        for (int x = 0; x <= max_size; ++x)
            out.prediction[x] = static_cast<double>(f.count) *
                                static_cast<double>(binomial(max_size, x)) *
                                std::pow(out.p, x);
    }
    return out;
}

inline IntersectionProfile intersection_profile(const LabeledFamily& f,
                                                const std::vector<Vertex>& members) {
    return intersection_profile(FamilyView(f), members);
}

inline IntersectionProfile intersection_profile(const Hypergraph& h,
                                                const std::vector<Vertex>& members) {
    return intersection_profile(FamilyView(h), members);
}

namespace detail {

// Max number of family sets containing any fixed a-subset (label-counted).
inline std::int64_t family_max_set_degree(const FamilyView& f, int a) {
    std::vector<std::string> keys;
    std::vector<int> idx(a);
    for (std::int64_t i = 0; i < f.count; ++i) {
        const auto sp = f.set(i);
        const int s = static_cast<int>(sp.size());
        if (s < a) continue;
        for (int j = 0; j < a; ++j) idx[j] = j;
        for (;;) {
            std::string key(a * sizeof(Vertex), '\0');
            for (int j = 0; j < a; ++j)
                std::memcpy(key.data() + j * sizeof(Vertex), &sp[idx[j]], sizeof(Vertex));
            keys.push_back(std::move(key));
            int j = a - 1;
            while (j >= 0 && idx[j] == s - a + j) --j;
            if (j < 0) break;
            ++idx[j];
            for (int q = j + 1; q < a; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
    std::sort(keys.begin(), keys.end());
    std::int64_t best = 0, run = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        run = (i > 0 && keys[i] == keys[i - 1]) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

}  // namespace detail

struct ContainmentReport {
    std::int64_t count = 0;        // sets fully inside I
    std::int64_t family_size = 0;
    int s = 0;
    double p = 0;
    double prediction = 0;         // |G| p^s
    double ratio = 0;              // count / prediction
    std::vector<std::int64_t> delta;  // Delta_a(G), index a-1, a = 1..s-1
    std::vector<double> delta_ratio;  // Delta_a / (p^a |G|)
    bool size_hypothesis_ok = false;  // prediction >= threshold
};

// X_G and its first-moment prediction |G| p^s. p is supplied by the caller
// (the natural choice is i/N after i process steps).
inline ContainmentReport count_contained(const FamilyView& f,
                                         const std::vector<Vertex>& members, double p,
                                         double size_threshold = 10.0) {
    require_input(f.count > 0, "count_contained needs a non-empty family");
    const int s = static_cast<int>(f.set(0).size());
    for (std::int64_t i = 0; i < f.count; ++i)
        require_input(static_cast<int>(f.set(i).size()) == s,
                      "count_contained needs a uniform family");
    std::vector<std::uint8_t> in(f.n, 0);
    for (Vertex v : members) {
        require_input(v >= 0 && v < f.n, "count_contained: vertex out of range");
        in[v] = 1;
    }
    ContainmentReport rep;
    rep.family_size = f.count;
    rep.s = s;
    rep.p = p;
    for (std::int64_t i = 0; i < f.count; ++i) {
        bool inside = true;
        for (Vertex v : f.set(i)) inside = inside && in[v];
        rep.count += inside;
    }
    rep.prediction = static_cast<double>(f.count) * std::pow(p, s);
    rep.ratio = rep.prediction > 0 ? static_cast<double>(rep.count) / rep.prediction : 0;
    rep.size_hypothesis_ok = rep.prediction >= size_threshold;
    for (int a = 1; a <= s - 1; ++a) {
        const std::int64_t da = detail::family_max_set_degree(f, a);
        rep.delta.push_back(da);
        const double denom = std::pow(p, a) * static_cast<double>(f.count);
        rep.delta_ratio.push_back(denom > 0 ? static_cast<double>(da) / denom : 0);
    }
    return rep;
}

inline ContainmentReport count_contained(const LabeledFamily& f,
                                         const std::vector<Vertex>& members, double p,
                                         double size_threshold = 10.0) {
    return count_contained(FamilyView(f), members, p, size_threshold);
}

inline ContainmentReport count_contained(const Hypergraph& h,
                                         const std::vector<Vertex>& members, double p,
                                         double size_threshold = 10.0) {
    return count_contained(FamilyView(h), members, p, size_threshold);
}

struct FrequencyReport {
    double frequency = 0;
    double std_error = 0;
    double prediction = 0;
    std::int64_t successes = 0;
    std::int64_t runs = 0;
};

// Empirical probability that a fixed independent set S lies inside I(j),
// over `runs` seeded process runs. Runs that terminate before step j without
// having absorbed S count as failures; once S is inside I it stays there.
inline FrequencyReport containment_frequency(const Hypergraph& h,
                                             const std::vector<Vertex>& s, std::int64_t j,
                                             std::int64_t runs, std::uint64_t seed_base) {
    require_input(j >= 0 && j <= h.vertex_count(), "containment_frequency needs 0 <= j <= N");
    require_input(runs >= 1, "containment_frequency needs runs >= 1");
    std::vector<std::uint8_t> in_s(h.vertex_count(), 0);
    for (Vertex v : s) {
        require_input(v >= 0 && v < h.vertex_count(), "set vertex out of range");
        in_s[v] = 1;
    }
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        bool all = true;
        for (Vertex w : h.edge(e)) all = all && in_s[w];
        require_input(!all, "the fixed set contains an edge, so it can never be absorbed");
    }
    FrequencyReport rep;
    rep.runs = runs;
    rep.prediction = std::pow(static_cast<double>(j) / h.vertex_count(),
                              static_cast<double>(s.size()));
    if (s.empty()) rep.prediction = 1.0;
    for (std::int64_t k = 0; k < runs; ++k) {
        ProcessState st(h, seed_base + static_cast<std::uint64_t>(k));
        std::int64_t absorbed = 0;
        bool dead = false;
        while (st.step_count() < j && st.open_count() > 0 && !dead &&
               absorbed < static_cast<std::int64_t>(s.size())) {
            const StepRecord rec = st.step();
            if (in_s[rec.chosen]) ++absorbed;
            for (Vertex u : rec.closed)
                if (in_s[u]) dead = true;
        }
        if (absorbed == static_cast<std::int64_t>(s.size())) ++rep.successes;
    }
    rep.frequency = static_cast<double>(rep.successes) / runs;
    rep.std_error = std::sqrt(rep.frequency * (1 - rep.frequency) / runs);
    return rep;
}

struct BalanceVerdict {
    std::string template_id;
    int k = 0;
    int v_h = 0;
    int e_h = 0;
    bool strictly_balanced = false;
    std::vector<Vertex> witness;  // violating W, empty when balanced
    Rational density_ratio;       // (e_H - 1) / (v_H - k)
};

// Strict k-balancedness: every proper W with |W| > k must satisfy
// (e_{H[W]} - 1) / (|W| - k) < (e_H - 1) / (v_H - k), exactly in rationals.
inline BalanceVerdict balance_check(const Template& t, std::string id = "") {
    t.validate();
    require_input(t.v > t.k, "balance needs more vertices than the edge size");
    require_input(t.edge_count() >= 2, "balance needs at least 2 edges");
    require_input(t.v <= 24, "exhaustive balance check is limited to small templates");
    BalanceVerdict verdict;
    verdict.template_id = std::move(id);
    verdict.k = t.k;
    verdict.v_h = t.v;
    verdict.e_h = t.edge_count();
    verdict.density_ratio = Rational(t.edge_count() - 1, t.v - t.k);
    verdict.strictly_balanced = true;
    for (std::uint32_t mask = 1; mask + 1 < (1u << t.v); ++mask) {
        const int size = std::popcount(mask);
        if (size <= t.k) continue;
        int inside = 0;
        for (const auto& e : t.edges) {
            bool all = true;
            for (Vertex w : e) all = all && (mask >> w & 1);
            inside += all;
        }
        const Rational lhs(inside - 1, size - t.k);
        if (!(lhs < verdict.density_ratio)) {
            verdict.strictly_balanced = false;
            verdict.witness.clear();
            for (Vertex w = 0; w < t.v; ++w)
                if (mask >> w & 1) verdict.witness.push_back(w);
            return verdict;
        }
    }
    return verdict;
}

// v_a: minimum number of vertices spanned by a template edges.
inline int min_span(const Template& t, int a) {
    t.validate();
    require_input(t.v <= 31, "min_span is limited to small templates");
    require_input(a >= 2 && a <= t.edge_count(), "min_span needs 2 <= a <= e_H");
    const int e = t.edge_count();
    int best = t.v;
    std::vector<int> idx(a);
    for (int i = 0; i < a; ++i) idx[i] = i;
    for (;;) {
        std::uint32_t span = 0;
        for (int i = 0; i < a; ++i)
            for (Vertex w : t.edges[idx[i]]) span |= 1u << w;
        best = std::min(best, std::popcount(span));
        int i = a - 1;
        while (i >= 0 && idx[i] == e - a + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < a; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

struct TuranExponent {
    Rational power;      // k - (v_H - k)/(e_H - 1)
    Rational log_power;  // 1 / (e_H - 1)
};

inline TuranExponent turan_exponent(const Template& t, bool check = true) {
    t.validate();
    require_input(t.edge_count() >= 2, "turan exponent needs e_H >= 2");
    if (check) {
        const auto verdict = balance_check(t);
        require_hypothesis(verdict.strictly_balanced,
                           "the lower bound requires a strictly k-balanced template");
    }
    TuranExponent out;
    out.power = Rational(t.k) - Rational(t.v - t.k, t.edge_count() - 1);
    out.log_power = Rational(1, t.edge_count() - 1);
    return out;
}

struct DegcondRow {
    int a = 0;
    int v_a = 0;
    Rational lhs_exponent;  // exponent of Delta_a in n: v_H - v_a
    Rational rhs_exponent;  // (v_H - k)(e_H - a)/(e_H - 1)
    bool ok = false;        // lhs < rhs strictly
};

struct DegcondReport {
    std::vector<DegcondRow> rows;
    bool all_ok = true;
};

// Predicts whether the copy hypergraph of the template meets the set-degree
// hypothesis, via exact exponents: Delta_a grows like n^(v_H - v_a) while the
// admissible bound is D^((e_H-a)/(e_H-1)) with D of order n^(v_H-k).
inline DegcondReport degcond_predictor(const Template& t) {
    t.validate();
    require_input(t.edge_count() >= 2, "needs e_H >= 2");
    DegcondReport rep;
    for (int a = 2; a <= t.edge_count() - 1; ++a) {
        DegcondRow row;
        row.a = a;
        row.v_a = min_span(t, a);
        row.lhs_exponent = Rational(t.v - row.v_a);
        row.rhs_exponent =
            Rational(t.v - t.k) * Rational(t.edge_count() - a, t.edge_count() - 1);
        row.ok = row.lhs_exponent < row.rhs_exponent;
        rep.all_ok = rep.all_ok && row.ok;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace hygreedy
