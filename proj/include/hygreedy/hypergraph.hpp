#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "hygreedy/common.hpp"

namespace hygreedy {

namespace detail {

inline std::uint64_t fnv1a(const Vertex* data, int count) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < count; ++i) {
        std::uint64_t x = static_cast<std::uint64_t>(static_cast<std::uint32_t>(data[i]));
        for (int b = 0; b < 4; ++b) {
            h ^= (x >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

}  // namespace detail

// Edges of H that contain a given vertex pair, bucketed by colexicographic
// pair rank. Shared read-only accelerator for domination sweeps and for
// pair-degree statistics.
struct PairIndex {
    std::vector<std::uint32_t> offsets;  // size C(n,2)+1
    std::vector<std::int32_t> edges;     // edge ids, grouped by pair rank

    static std::int64_t rank(Vertex a, Vertex b) {
        // requires a < b
        return static_cast<std::int64_t>(b) * (b - 1) / 2 + a;
    }

    std::span<const std::int32_t> bucket(Vertex a, Vertex b) const {
        const std::int64_t r = rank(a, b);
        return {edges.data() + offsets[r], edges.data() + offsets[r + 1]};
    }
};

// Aggregate degree and condition statistics, computed lazily.
struct DegreeStats {
    std::int64_t min_degree = 0;
    std::int64_t max_degree = 0;
    double mean_degree = 0.0;
    bool regular = false;
    // init_size_degree[s][v] = number of original edges of size s containing v.
    // Index 0 corresponds to size 2.
    std::vector<std::vector<std::uint32_t>> init_size_degree;
};

struct ConditionReport {
    int r = 0;
    Vertex n = 0;
    std::int64_t m = 0;
    double d = 0.0;  // exact degree when regular, otherwise mean
    bool regular = false;
    double epsilon = 0.0;
    std::vector<std::int64_t> delta;       // delta[l] for l = 2..r-1; index by l
    std::vector<double> delta_threshold;   // D^{(r-l)/(r-1) - eps}
    std::vector<bool> delta_ok;
    std::int64_t gamma = 0;
    double gamma_threshold = 0.0;
    bool gamma_ok = false;
    bool degree_vs_n_ok = false;  // D > N^eps
    bool density_ok = false;      // N >= D^{1/(r-1) + eps}

    bool all_ok() const {
        for (std::size_t l = 2; l < delta_ok.size(); ++l)
            if (!delta_ok[l]) return false;
        return gamma_ok && degree_vs_n_ok && density_ok;
    }
};

// Finite hypergraph on vertices 0..n-1. Edges are distinct vertex sets of
// size >= 2, stored as strictly increasing id lists. Immutable after
// construction; all lazy indexes are built under a mutex so concurrent
// read-only use is safe.
class Hypergraph {
public:
    Hypergraph(Vertex n, const std::vector<std::vector<Vertex>>& edge_lists,
               int declared_uniformity = 0) {
        std::vector<Vertex> pins;
        std::vector<std::int64_t> offsets;
        offsets.reserve(edge_lists.size() + 1);
        offsets.push_back(0);
        for (const auto& e : edge_lists) {
            pins.insert(pins.end(), e.begin(), e.end());
            offsets.push_back(static_cast<std::int64_t>(pins.size()));
        }
        init(n, std::move(pins), std::move(offsets), declared_uniformity);
    }

    // Flat constructor for uniform hypergraphs: pins.size() must be a
    // multiple of uniform_size.
    Hypergraph(Vertex n, int uniform_size, std::vector<Vertex> pins) {
        require_input(uniform_size >= 2, "uniform edge size must be >= 2");
        require_input(pins.size() % static_cast<std::size_t>(uniform_size) == 0,
                      "pin array not a multiple of the uniform edge size");
        init(n, std::move(pins), {}, uniform_size);
    }

    Vertex vertex_count() const { return n_; }
    std::int64_t edge_count() const { return m_; }
    int uniformity() const { return uniformity_; }
    int max_edge_size() const { return max_size_; }
    std::int64_t pin_count() const { return static_cast<std::int64_t>(pins_.size()); }

    int edge_size(std::int64_t e) const {
        if (stride_ > 0) return stride_;
        return static_cast<int>(offsets_[e + 1] - offsets_[e]);
    }

    std::span<const Vertex> edge(std::int64_t e) const {
        const std::int64_t b = stride_ > 0 ? e * stride_ : offsets_[e];
        return {pins_.data() + b, pins_.data() + b + edge_size(e)};
    }

    std::span<const std::int32_t> incident(Vertex v) const {
        return {inc_edges_.data() + inc_offsets_[v], inc_edges_.data() + inc_offsets_[v + 1]};
    }

    std::int64_t degree(Vertex v) const {
        require_input(v >= 0 && v < n_, "vertex out of range");
        return inc_offsets_[v + 1] - inc_offsets_[v];
    }

    bool edge_contains(std::int64_t e, Vertex v) const {
        const auto sp = edge(e);
        return std::binary_search(sp.begin(), sp.end(), v);
    }

    // Number of edges of size exactly b that contain every vertex of a.
    // Returns 0 when b < |a|.
    std::int64_t set_degree(std::vector<Vertex> a, int b) const {
        require_input(!a.empty(), "set_degree needs a non-empty vertex set");
        std::sort(a.begin(), a.end());
        require_input(std::adjacent_find(a.begin(), a.end()) == a.end(),
                      "set_degree vertex set has repeats");
        require_input(a.front() >= 0 && a.back() < n_, "vertex out of range");
        if (b < static_cast<int>(a.size())) return 0;
        Vertex pivot = a[0];
        for (Vertex v : a)
            if (degree(v) < degree(pivot)) pivot = v;
        std::int64_t count = 0;
        for (std::int32_t e : incident(pivot)) {
            if (edge_size(e) != b) continue;
            bool all = true;
            for (Vertex v : a)
                if (v != pivot && !edge_contains(e, v)) { all = false; break; }
            if (all) ++count;
        }
        return count;
    }

    // Delta_a: maximum number of edges containing a common a-set.
    std::int64_t max_set_degree(int a) const {
        require_input(a >= 2, "max_set_degree needs a >= 2");
        if (uniformity_ > 0)
            require_input(a <= uniformity_ - 1, "max_set_degree needs a <= r-1");
        if (m_ == 0) return 0;
        if (a == 2 && pair_index() != nullptr) {
            const auto& pi = *pair_index();
            std::int64_t best = 0;
            for (std::size_t i = 0; i + 1 < pi.offsets.size(); ++i)
                best = std::max<std::int64_t>(best, pi.offsets[i + 1] - pi.offsets[i]);
            return best;
        }
        const int bits = std::bit_width(static_cast<std::uint32_t>(n_));
        if (a * bits <= 64) return max_subset_multiplicity_packed(a, bits);
        return max_subset_multiplicity_map(a);
    }

    // Ordered pairs (e, e') with |e| = a, |e'| = a2, |intersection| = k,
    // v in e \ e', v2 in e' \ e.
    std::int64_t codegree(Vertex v, Vertex v2, int a, int a2, int k) const {
        require_input(v != v2, "codegree needs two distinct vertices");
        require_input(v >= 0 && v < n_ && v2 >= 0 && v2 < n_, "vertex out of range");
        require_input(k >= 0 && k < a && k < a2, "codegree needs 0 <= k < a, a2");
        std::int64_t count = 0;
        for (std::int32_t e : incident(v)) {
            if (edge_size(e) != a || edge_contains(e, v2)) continue;
            const auto se = edge(e);
            for (std::int32_t e2 : incident(v2)) {
                if (edge_size(e2) != a2 || edge_contains(e2, v)) continue;
                const auto se2 = edge(e2);
                int inter = 0;
                std::size_t i = 0, j = 0;
                while (i < se.size() && j < se2.size()) {
                    if (se[i] < se2[j]) ++i;
                    else if (se[i] > se2[j]) ++j;
                    else { ++inter; ++i; ++j; }
                }
                if (inter == k) ++count;
            }
        }
        return count;
    }

    // Gamma: maximum over ordered vertex pairs (v, v') of the number of
    // ordered edge pairs sharing exactly r-1 vertices with v in e \ e' and
    // v' in e' \ e. Requires a uniform hypergraph with r >= 3.
    std::int64_t max_r1_codegree() const {
        require_input(uniformity_ >= 3, "max_r1_codegree needs uniform r >= 3");
        if (m_ == 0) return 0;
        const int r = uniformity_;
        if (r == 3 && pair_index() != nullptr)
            return gamma_from_buckets([this](std::int64_t b, std::vector<std::int32_t>& out) {
                const auto& pi = *pair_index();
                out.assign(pi.edges.begin() + pi.offsets[b], pi.edges.begin() + pi.offsets[b + 1]);
            }, pair_index()->offsets.size() - 1);
        return gamma_generic();
    }

    ConditionReport check_main_conditions(double epsilon) const {
        require_input(uniformity_ >= 3, "main conditions need uniform r >= 3");
        require_input(epsilon > 0.0, "epsilon must be positive");
        const int r = uniformity_;
        const auto& ds = degree_stats();
        ConditionReport rep;
        rep.r = r;
        rep.n = n_;
        rep.m = m_;
        rep.regular = ds.regular;
        rep.d = ds.regular ? static_cast<double>(ds.min_degree) : ds.mean_degree;
        rep.epsilon = epsilon;
        rep.delta.assign(r, 0);
        rep.delta_threshold.assign(r, 0.0);
        rep.delta_ok.assign(r, true);
        const double log_d = std::log(rep.d);
        for (int l = 2; l <= r - 1; ++l) {
            rep.delta[l] = max_set_degree(l);
            rep.delta_threshold[l] =
                std::exp((static_cast<double>(r - l) / (r - 1) - epsilon) * log_d);
            rep.delta_ok[l] = static_cast<double>(rep.delta[l]) < rep.delta_threshold[l];
        }
        rep.gamma = max_r1_codegree();
        rep.gamma_threshold = std::exp((1.0 - epsilon) * log_d);
        rep.gamma_ok = static_cast<double>(rep.gamma) < rep.gamma_threshold;
        rep.degree_vs_n_ok = rep.d > std::pow(static_cast<double>(n_), epsilon);
        rep.density_ok =
            static_cast<double>(n_) >= std::exp((1.0 / (r - 1) + epsilon) * log_d);
        return rep;
    }

    // Largest epsilon for which every hypothesis of check_main_conditions
    // holds, or a non-positive value when none does.
    double max_feasible_epsilon() const {
        require_input(uniformity_ >= 3, "main conditions need uniform r >= 3");
        const int r = uniformity_;
        const auto& ds = degree_stats();
        const double d = ds.regular ? static_cast<double>(ds.min_degree) : ds.mean_degree;
        require_input(d > 1.0, "degree too small to derive epsilon");
        const double log_d = std::log(d);
        const double log_n = std::log(static_cast<double>(n_));
        double cap = log_d / log_n;  // D > N^eps
        cap = std::min(cap, log_n / log_d - 1.0 / (r - 1));  // density
        for (int l = 2; l <= r - 1; ++l) {
            const std::int64_t dl = max_set_degree(l);
            if (dl > 0)
                cap = std::min(cap, static_cast<double>(r - l) / (r - 1) -
                                        std::log(static_cast<double>(dl)) / log_d);
        }
        const std::int64_t g = max_r1_codegree();
        if (g > 0) cap = std::min(cap, 1.0 - std::log(static_cast<double>(g)) / log_d);
        return cap;
    }

    const DegreeStats& degree_stats() const {
        std::call_once(caches_->stats_once, [this] { build_degree_stats(); });
        return caches_->degree_stats;
    }

    // nullptr when C(n,2) exceeds the indexable range.
    const PairIndex* pair_index() const {
        std::call_once(caches_->pair_once, [this] { build_pair_index(); });
        return caches_->pair_index_built ? &caches_->pair_index : nullptr;
    }

private:
    void init(Vertex n, std::vector<Vertex> pins, std::vector<std::int64_t> offsets,
              int declared_uniformity) {
        require_input(n >= 0, "negative vertex count");
        n_ = n;
        pins_ = std::move(pins);
        if (offsets.empty()) {
            stride_ = declared_uniformity;
            m_ = static_cast<std::int64_t>(pins_.size()) / stride_;
        } else {
            offsets_ = std::move(offsets);
            m_ = static_cast<std::int64_t>(offsets_.size()) - 1;
            stride_ = 0;
        }
        // Uniformity is the declared value, never inferred: a file declaring
        // itself non-uniform must round-trip unchanged.
        uniformity_ = declared_uniformity;
        max_size_ = declared_uniformity;
        for (std::int64_t e = 0; e < m_; ++e) {
            const int sz = edge_size(e);
            require_input(sz >= 2, "edge of size < 2 at index " + std::to_string(e));
            require_input(uniformity_ == 0 || sz == uniformity_,
                          "edge " + std::to_string(e) + " breaks declared uniformity");
            max_size_ = std::max(max_size_, sz);
            const auto sp = edge(e);
            require_input(sp.front() >= 0 && sp.back() < n_,
                          "vertex id out of range in edge " + std::to_string(e));
            for (std::size_t i = 1; i < sp.size(); ++i)
                require_input(sp[i - 1] < sp[i],
                              "edge " + std::to_string(e) + " is not strictly increasing");
        }
        reject_duplicates();
        build_incidence();
    }

    void reject_duplicates() {
        if (m_ < 2) return;
        std::vector<std::pair<std::uint64_t, std::int32_t>> keys(m_);
        for (std::int64_t e = 0; e < m_; ++e) {
            const auto sp = edge(e);
            keys[e] = {detail::fnv1a(sp.data(), static_cast<int>(sp.size())) ^
                           (static_cast<std::uint64_t>(sp.size()) << 56),
                       static_cast<std::int32_t>(e)};
        }
        std::sort(keys.begin(), keys.end());
        for (std::int64_t i = 0; i + 1 < m_; ++i) {
            if (keys[i].first != keys[i + 1].first) continue;
            const auto a = edge(keys[i].second);
            const auto b = edge(keys[i + 1].second);
            if (a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin()))
                throw InputError("duplicate edge set at indices " +
                                 std::to_string(keys[i].second) + ", " +
                                 std::to_string(keys[i + 1].second));
        }
    }

    void build_incidence() {
        inc_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (Vertex v : pins_) ++inc_offsets_[static_cast<std::size_t>(v) + 1];
        for (Vertex v = 0; v < n_; ++v) inc_offsets_[v + 1] += inc_offsets_[v];
        inc_edges_.resize(pins_.size());
        std::vector<std::int64_t> cursor(inc_offsets_.begin(), inc_offsets_.end() - 1);
        for (std::int64_t e = 0; e < m_; ++e)
            for (Vertex v : edge(e))
                inc_edges_[cursor[v]++] = static_cast<std::int32_t>(e);
    }

    void build_degree_stats() const {
        DegreeStats ds;
        ds.min_degree = n_ > 0 ? INT64_MAX : 0;
        std::int64_t total = 0;
        for (Vertex v = 0; v < n_; ++v) {
            const std::int64_t d = inc_offsets_[v + 1] - inc_offsets_[v];
            ds.min_degree = std::min(ds.min_degree, d);
            ds.max_degree = std::max(ds.max_degree, d);
            total += d;
        }
        ds.mean_degree = n_ > 0 ? static_cast<double>(total) / n_ : 0.0;
        ds.regular = n_ > 0 && ds.min_degree == ds.max_degree;
        const int sizes = std::max(0, max_size_ - 1);
        ds.init_size_degree.assign(sizes, {});
        for (auto& row : ds.init_size_degree) row.assign(n_, 0);
        for (std::int64_t e = 0; e < m_; ++e) {
            const int s = edge_size(e);
            for (Vertex v : edge(e)) ++ds.init_size_degree[s - 2][v];
        }
        caches_->degree_stats = std::move(ds);
    }

    void build_pair_index() const {
        const std::int64_t npairs = static_cast<std::int64_t>(n_) * (n_ - 1) / 2;
        std::int64_t entries = 0;
        for (std::int64_t e = 0; e < m_; ++e) {
            const std::int64_t s = edge_size(e);
            entries += s * (s - 1) / 2;
        }
        if (npairs + 1 > (std::int64_t{1} << 31) || entries >= UINT32_MAX) {
            caches_->pair_index_built = false;
            return;
        }
        PairIndex pi;
        pi.offsets.assign(npairs + 1, 0);
        for (std::int64_t e = 0; e < m_; ++e) {
            const auto sp = edge(e);
            for (std::size_t i = 0; i < sp.size(); ++i)
                for (std::size_t j = i + 1; j < sp.size(); ++j)
                    ++pi.offsets[PairIndex::rank(sp[i], sp[j]) + 1];
        }
        for (std::int64_t p = 0; p < npairs; ++p) pi.offsets[p + 1] += pi.offsets[p];
        pi.edges.resize(entries);
        std::vector<std::uint32_t> cursor(pi.offsets.begin(), pi.offsets.end() - 1);
        for (std::int64_t e = 0; e < m_; ++e) {
            const auto sp = edge(e);
            for (std::size_t i = 0; i < sp.size(); ++i)
                for (std::size_t j = i + 1; j < sp.size(); ++j)
                    pi.edges[cursor[PairIndex::rank(sp[i], sp[j])]++] =
                        static_cast<std::int32_t>(e);
        }
        caches_->pair_index = std::move(pi);
        caches_->pair_index_built = true;
    }

    std::int64_t max_subset_multiplicity_packed(int a, int bits) const {
        std::vector<std::uint64_t> keys;
        std::vector<int> idx(a);
        for (std::int64_t e = 0; e < m_; ++e) {
            const auto sp = edge(e);
            const int s = static_cast<int>(sp.size());
            if (s < a) continue;
            for (int i = 0; i < a; ++i) idx[i] = i;
            for (;;) {
                std::uint64_t key = 0;
                for (int i = 0; i < a; ++i)
                    key = (key << bits) | static_cast<std::uint64_t>(sp[idx[i]]);
                keys.push_back(key);
                int i = a - 1;
                while (i >= 0 && idx[i] == s - a + i) --i;
                if (i < 0) break;
                ++idx[i];
                for (int j = i + 1; j < a; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        if (keys.empty()) return 0;
        std::sort(keys.begin(), keys.end());
        std::int64_t best = 1, run = 1;
        for (std::size_t i = 1; i < keys.size(); ++i) {
            run = keys[i] == keys[i - 1] ? run + 1 : 1;
            best = std::max(best, run);
        }
        return best;
    }

    std::int64_t max_subset_multiplicity_map(int a) const {
        std::map<std::vector<Vertex>, std::int64_t> counts;
        std::vector<int> idx(a);
        std::vector<Vertex> sub(a);
        std::int64_t best = 0;
        for (std::int64_t e = 0; e < m_; ++e) {
            const auto sp = edge(e);
            const int s = static_cast<int>(sp.size());
            if (s < a) continue;
            for (int i = 0; i < a; ++i) idx[i] = i;
            for (;;) {
                for (int i = 0; i < a; ++i) sub[i] = sp[idx[i]];
                best = std::max(best, ++counts[sub]);
                int i = a - 1;
                while (i >= 0 && idx[i] == s - a + i) --i;
                if (i < 0) break;
                ++idx[i];
                for (int j = i + 1; j < a; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        return best;
    }

    template <class BucketFn>
    std::int64_t gamma_from_buckets(const BucketFn& fill, std::size_t bucket_count) const {
        std::vector<std::uint64_t> pair_keys;
        std::vector<std::int32_t> bucket;
        for (std::size_t b = 0; b < bucket_count; ++b) {
            fill(static_cast<std::int64_t>(b), bucket);
            if (bucket.size() < 2) continue;
            for (std::int32_t e : bucket)
                for (std::int32_t e2 : bucket) {
                    if (e == e2) continue;
                    const Vertex v = residual_vertex(e, e2);
                    const Vertex v2 = residual_vertex(e2, e);
                    pair_keys.push_back((static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) |
                                        static_cast<std::uint32_t>(v2));
                }
        }
        if (pair_keys.empty()) return 0;
        std::sort(pair_keys.begin(), pair_keys.end());
        std::int64_t best = 1, run = 1;
        for (std::size_t i = 1; i < pair_keys.size(); ++i) {
            run = pair_keys[i] == pair_keys[i - 1] ? run + 1 : 1;
            best = std::max(best, run);
        }
        return best;
    }

    // The single vertex of e not contained in e2 (edges sharing r-1 vertices).
    Vertex residual_vertex(std::int64_t e, std::int64_t e2) const {
        for (Vertex v : edge(e))
            if (!edge_contains(e2, v)) return v;
        return -1;
    }

    std::int64_t gamma_generic() const {
        const int r = uniformity_;
        const int bits = std::bit_width(static_cast<std::uint32_t>(n_));
        require_input((r - 1) * bits <= 64, "instance too large for codegree grouping");
        std::vector<std::pair<std::uint64_t, std::int32_t>> keyed;
        std::vector<int> idx(r - 1);
        for (std::int64_t e = 0; e < m_; ++e) {
            const auto sp = edge(e);
            for (int drop = 0; drop < r; ++drop) {
                std::uint64_t key = 0;
                for (int i = 0; i < r; ++i)
                    if (i != drop) key = (key << bits) | static_cast<std::uint64_t>(sp[i]);
                keyed.emplace_back(key, static_cast<std::int32_t>(e));
            }
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<std::int32_t> bucket;
        std::vector<std::uint64_t> pair_keys;
        std::size_t i = 0;
        while (i < keyed.size()) {
            std::size_t j = i;
            while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
            if (j - i >= 2) {
                for (std::size_t x = i; x < j; ++x)
                    for (std::size_t y = i; y < j; ++y) {
                        if (x == y) continue;
                        const Vertex v = residual_vertex(keyed[x].second, keyed[y].second);
                        const Vertex v2 = residual_vertex(keyed[y].second, keyed[x].second);
                        pair_keys.push_back(
                            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) |
                            static_cast<std::uint32_t>(v2));
                    }
            }
            i = j;
        }
        if (pair_keys.empty()) return 0;
        std::sort(pair_keys.begin(), pair_keys.end());
        std::int64_t best = 1, run = 1;
        for (std::size_t k = 1; k < pair_keys.size(); ++k) {
            run = pair_keys[k] == pair_keys[k - 1] ? run + 1 : 1;
            best = std::max(best, run);
        }
        return best;
    }

    Vertex n_ = 0;
    std::int64_t m_ = 0;
    int uniformity_ = 0;
    int max_size_ = 0;
    int stride_ = 0;  // > 0 for flat uniform storage
    std::vector<Vertex> pins_;
    std::vector<std::int64_t> offsets_;       // empty when stride_ > 0
    std::vector<std::int64_t> inc_offsets_;
    std::vector<std::int32_t> inc_edges_;

    // Heap block so the hypergraph stays movable despite the once flags.
    struct LazyCaches {
        std::once_flag stats_once;
        DegreeStats degree_stats;
        std::once_flag pair_once;
        PairIndex pair_index;
        bool pair_index_built = false;
    };
    std::unique_ptr<LazyCaches> caches_ = std::make_unique<LazyCaches>();
};

// All x-subsets of the edges of H, deduplicated and sorted.
inline std::vector<std::vector<Vertex>> shadow(const Hypergraph& h, int x) {
    require_input(x >= 1, "shadow needs x >= 1");
    std::vector<std::vector<Vertex>> out;
    std::vector<int> idx(x);
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        const auto sp = h.edge(e);
        const int s = static_cast<int>(sp.size());
        if (s < x) continue;
        for (int i = 0; i < x; ++i) idx[i] = i;
        for (;;) {
            std::vector<Vertex> sub(x);
            for (int i = 0; i < x; ++i) sub[i] = sp[idx[i]];
            out.push_back(std::move(sub));
            int i = x - 1;
            while (i >= 0 && idx[i] == s - x + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < x; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace hygreedy
