#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "hygreedy/combinatorics.hpp"
#include "hygreedy/common.hpp"
#include "hygreedy/families.hpp"
#include "hygreedy/hypergraph.hpp"
#include "hygreedy/rng.hpp"

namespace hygreedy {

namespace detail {

// Enumerates all injections [t.v] -> [n] and collects the image of the
// template edge set; copies equal as sets collapse to one hyperedge.
inline std::vector<std::vector<Vertex>> enumerate_copies(const Template& t, int n) {
    std::vector<std::vector<Vertex>> copies;
    std::vector<Vertex> image(t.v);
    std::vector<char> used(n, 0);
    std::vector<Vertex> scratch(t.k);
    auto recurse = [&](auto&& self, int depth) -> void {
        if (depth == t.v) {
            std::vector<Vertex> edge_ids(t.edges.size());
            for (std::size_t e = 0; e < t.edges.size(); ++e) {
                for (int i = 0; i < t.k; ++i) scratch[i] = image[t.edges[e][i]];
                std::sort(scratch.begin(), scratch.end());
                edge_ids[e] = static_cast<Vertex>(subset_rank(scratch));
            }
            std::sort(edge_ids.begin(), edge_ids.end());
            copies.push_back(std::move(edge_ids));
            return;
        }
        for (Vertex w = 0; w < n; ++w) {
            if (used[w]) continue;
            used[w] = 1;
            image[depth] = w;
            self(self, depth + 1);
            used[w] = 0;
        }
    };
    recurse(recurse, 0);
    std::sort(copies.begin(), copies.end());
    copies.erase(std::unique(copies.begin(), copies.end()), copies.end());
    return copies;
}

}  // namespace detail

// Hypergraph whose vertices are the k-subsets of [n] (colex-ranked) and whose
// hyperedges are the edge sets of all unlabeled copies of the template.
// An independent set here is exactly a template-free k-uniform host.
inline Hypergraph template_copies(const Template& t, int n) {
    t.validate();
    require_input(t.edge_count() >= 2, "template needs at least 2 edges");
    require_input(n >= t.v, "host has fewer vertices than the template");
    const std::int64_t ground = binomial(n, t.k);
    require_input(ground <= INT32_MAX, "host subset count too large");
    auto copies = detail::enumerate_copies(t, n);
    return Hypergraph(static_cast<Vertex>(ground), copies, t.edge_count());
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

namespace detail {

inline std::vector<Vertex> ap_set(std::int64_t n, std::int64_t a, std::int64_t d, int k) {
    std::vector<Vertex> s(k);
    for (int i = 0; i < k; ++i) s[i] = static_cast<Vertex>((a + i * d) % n);
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace detail

// All k-term arithmetic progressions in Z_N, deduplicated to vertex sets.
// For prime N > k each progression has exactly the (a,d) and reversed
// representation, so the hypergraph is k(N-1)/2-regular.
inline Hypergraph k_ap(std::int64_t n, int k) {
    require_input(k >= 3, "k_ap needs k >= 3");
    require_input(n > k, "k_ap needs N > k");
    require_input(is_prime(n), "k_ap needs prime N");
    int bits = 1;
    while ((std::int64_t{1} << bits) < n) ++bits;
    if (k * bits <= 63) {
        // Pack each sorted progression into one integer so the dedup sorts a
        // flat array instead of 25M tiny vectors at desk scale.
        std::vector<std::uint64_t> keys;
        keys.reserve(static_cast<std::size_t>(n) * (n - 1));
        for (std::int64_t a = 0; a < n; ++a)
            for (std::int64_t d = 1; d < n; ++d) {
                auto s = detail::ap_set(n, a, d, k);
                std::uint64_t key = 0;
                for (int i = 0; i < k; ++i) key = key << bits | static_cast<std::uint64_t>(s[i]);
                keys.push_back(key);
            }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        std::vector<Vertex> pins(keys.size() * k);
        const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
        for (std::size_t e = 0; e < keys.size(); ++e)
            for (int i = 0; i < k; ++i)
                pins[e * k + k - 1 - i] = static_cast<Vertex>(keys[e] >> (i * bits) & mask);
        return Hypergraph(static_cast<Vertex>(n), k, std::move(pins));
    }
    std::vector<std::vector<Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (std::int64_t a = 0; a < n; ++a)
        for (std::int64_t d = 1; d < n; ++d) edges.push_back(detail::ap_set(n, a, d, k));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Hypergraph(static_cast<Vertex>(n), edges, k);
}

// Label-counted variant: one labeled set per (a,d) parameterization.
inline LabeledFamily k_ap_labeled(std::int64_t n, int k) {
    require_input(k >= 3, "k_ap needs k >= 3");
    require_input(n > k, "k_ap needs N > k");
    require_input(is_prime(n), "k_ap needs prime N");
    LabeledFamily f;
    f.n = static_cast<Vertex>(n);
    f.uniform_size = k;
    for (std::int64_t a = 0; a < n; ++a)
        for (std::int64_t d = 1; d < n; ++d)
            f.add(std::to_string(a) + ":" + std::to_string(d), detail::ap_set(n, a, d, k));
    return f;
}

// Schur triples in Z_n: all {a,b,c} with three distinct elements and
// a+b = c under some assignment. The 2-codegree of x and -x scales with
// the degree, so the codegree hypothesis fails on this family.
inline Hypergraph sum_free(std::int64_t n) {
    require_input(n >= 5, "sum_free needs n >= 5");
    std::vector<std::vector<Vertex>> edges;
    for (std::int64_t a = 0; a < n; ++a)
        for (std::int64_t b = a + 1; b < n; ++b) {
            const std::int64_t c = (a + b) % n;
            if (c == a || c == b) continue;
            std::vector<Vertex> e = {static_cast<Vertex>(a), static_cast<Vertex>(b),
                                     static_cast<Vertex>(c)};
            std::sort(e.begin(), e.end());
            edges.push_back(std::move(e));
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Hypergraph(static_cast<Vertex>(n), edges, 3);
}

namespace detail {

// h has no coincidences when the 3^d dot products w.h over w in {-1,0,1}^d
// are pairwise distinct mod N.
inline bool no_coincidences(std::int64_t n, const std::vector<std::int64_t>& h) {
    const int d = static_cast<int>(h.size());
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    std::vector<char> seen(n, 0);
    for (std::int64_t it = 0; it < total; ++it) {
        std::int64_t dot = 0, code = it;
        for (int i = 0; i < d; ++i) {
            dot += (code % 3 - 1) * h[i];
            code /= 3;
        }
        dot = ((dot % n) + n) % n;
        if (seen[dot]) return false;
        seen[dot] = 1;
    }
    return true;
}

}  // namespace detail

// The labeled d-cube family over Z_N: for every x and every offset vector h
// without coincidences, the 2^d-element set {x + w.h : w in {0,1}^d}.
// Families are label-counted, one entry per (x,h).
inline LabeledFamily d_cube(std::int64_t n, int d) {
    require_input(d >= 1, "d_cube needs d >= 1");
    require_input(is_prime(n), "d_cube needs prime N");
    std::int64_t pow3 = 1;
    for (int i = 0; i < d; ++i) pow3 *= 3;
    require_input(pow3 <= n, "d_cube needs 3^d <= N: no offset vector can have " +
                                std::to_string(pow3) + " distinct signed sums in Z_" +
                                std::to_string(n));
    LabeledFamily f;
    f.n = static_cast<Vertex>(n);
    f.uniform_size = 1 << d;
    std::vector<std::int64_t> h(d, 0);
    std::vector<Vertex> verts(1 << d);
    for (;;) {
        if (detail::no_coincidences(n, h)) {
            for (std::int64_t x = 0; x < n; ++x) {
                for (int w = 0; w < (1 << d); ++w) {
                    std::int64_t dot = x;
                    for (int i = 0; i < d; ++i)
                        if (w >> i & 1) dot += h[i];
                    verts[w] = static_cast<Vertex>(((dot % n) + n) % n);
                }
                std::sort(verts.begin(), verts.end());
                std::string label = std::to_string(x);
                for (int i = 0; i < d; ++i) label += ":" + std::to_string(h[i]);
                f.add(std::move(label), verts);
            }
        }
        int i = 0;
        while (i < d && h[i] == n - 1) h[i++] = 0;
        if (i == d) break;
        ++h[i];
    }
    return f;
}

// M distinct uniformly random r-subsets of [N], deterministic under seed.
inline Hypergraph random_uniform(Vertex n, int r, std::int64_t m, std::uint64_t seed) {
    require_input(n >= 1 && r >= 2 && r <= n, "random_uniform needs 2 <= r <= N");
    const std::int64_t total = binomial(n, r);
    require_input(m >= 0 && m <= total,
                  "random_uniform: asked for " + std::to_string(m) + " edges but only " +
                      std::to_string(total) + " r-subsets exist");
    Rng rng(seed);
    std::vector<std::vector<Vertex>> edges;
    edges.reserve(m);
    if (total <= 2'000'000) {
        // Partial Fisher-Yates over the full colex enumeration.
        std::vector<std::int64_t> ranks(total);
        for (std::int64_t i = 0; i < total; ++i) ranks[i] = i;
        for (std::int64_t i = 0; i < m; ++i) {
            const std::int64_t j = i + static_cast<std::int64_t>(rng.below(total - i));
            std::swap(ranks[i], ranks[j]);
            edges.push_back(subset_unrank(ranks[i], r));
        }
    } else {
        std::unordered_set<std::string> seen;
        std::vector<Vertex> pick(r);
        std::int64_t attempts = 0;
        const std::int64_t cap = 64 * m + 1'000'000;
        while (static_cast<std::int64_t>(edges.size()) < m) {
            if (++attempts > cap)
                throw ResourceError("random_uniform rejection sampling exceeded its cap");
            for (int i = 0; i < r; ++i) {
                retry:
                pick[i] = static_cast<Vertex>(rng.below(n));
                for (int j = 0; j < i; ++j)
                    if (pick[j] == pick[i]) goto retry;
            }
            std::sort(pick.begin(), pick.end());
            std::string key(reinterpret_cast<const char*>(pick.data()),
                            pick.size() * sizeof(Vertex));
            if (seen.insert(std::move(key)).second) edges.push_back(pick);
        }
    }
    std::sort(edges.begin(), edges.end());
    return Hypergraph(n, edges, r);
}

}  // namespace hygreedy
