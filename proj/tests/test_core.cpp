// Exact-value tests for the combinatorial core: counting identities, colex
// ranking round trips, generator contracts, and the strict text formats.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hygreedy/combinatorics.hpp"
#include "hygreedy/families.hpp"
#include "hygreedy/generators.hpp"
#include "hygreedy/harness.hpp"
#include "hygreedy/hypergraph.hpp"
#include "hygreedy/io.hpp"

using namespace hygreedy;

namespace {

std::vector<std::vector<Vertex>> all_edges(const Hypergraph& h) {
    std::vector<std::vector<Vertex>> out;
    out.reserve(static_cast<std::size_t>(h.edge_count()));
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        const auto sp = h.edge(e);
        out.emplace_back(sp.begin(), sp.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("binomial matches hand values, clamps, and satisfies Pascal's rule",
          "[combinatorics]") {
    REQUIRE(binomial(0, 0) == 1);
    REQUIRE(binomial(5, 2) == 10);
    REQUIRE(binomial(52, 5) == 2598960);
    REQUIRE(binomial(10, 0) == 1);
    REQUIRE(binomial(10, 10) == 1);
    REQUIRE(binomial(4, 7) == 0);
    REQUIRE(binomial(7, -1) == 0);
    REQUIRE(binomial(200, 100) == std::numeric_limits<std::int64_t>::max());
    for (std::int64_t n = 1; n <= 20; ++n)
        for (std::int64_t k = 1; k <= n; ++k)
            REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST_CASE("colex subset ranking round-trips and matches hand ranks",
          "[combinatorics]") {
    const std::vector<Vertex> first = {0, 1, 2};
    REQUIRE(subset_rank(first) == 0);
    // C(2,1) + C(4,2) + C(5,3) = 2 + 6 + 10
    const std::vector<Vertex> mid = {2, 4, 5};
    REQUIRE(subset_rank(mid) == 18);
    const std::vector<Vertex> pair = {3, 7};
    REQUIRE(subset_rank(pair) == 3 + 21);

    for (std::int64_t rank = 0; rank < binomial(8, 3); ++rank) {
        const auto s = subset_unrank(rank, 3);
        REQUIRE(s.size() == 3);
        REQUIRE(s[0] < s[1]);
        REQUIRE(s[1] < s[2]);
        REQUIRE(s[2] < 8);
        REQUIRE(subset_rank(s) == rank);
    }
    REQUIRE_THROWS_AS(subset_unrank(-1, 3), InputError);
}

TEST_CASE("hypergraph accessors agree with a hand-built 3-chain", "[hypergraph]") {
    const Hypergraph h(5, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}}, 3);
    REQUIRE(h.vertex_count() == 5);
    REQUIRE(h.edge_count() == 3);
    REQUIRE(h.uniformity() == 3);
    REQUIRE(h.pin_count() == 9);

    REQUIRE(h.degree(0) == 1);
    REQUIRE(h.degree(2) == 3);
    std::int64_t handshake = 0;
    for (Vertex v = 0; v < 5; ++v) handshake += h.degree(v);
    REQUIRE(handshake == h.pin_count());

    // Every edge id appears in the incidence list of each of its pins.
    for (std::int64_t e = 0; e < h.edge_count(); ++e)
        for (Vertex v : h.edge(e)) {
            const auto inc = h.incident(v);
            REQUIRE(std::find(inc.begin(), inc.end(), e) != inc.end());
        }

    REQUIRE(h.edge_contains(0, 1));
    REQUIRE_FALSE(h.edge_contains(0, 3));
    REQUIRE(h.set_degree({1, 2}, 3) == 2);
    REQUIRE(h.set_degree({0, 4}, 3) == 0);
    REQUIRE(h.max_set_degree(2) == 2);

    // Exactly-k intersections: {0,1,2} meets {2,3,4} in one vertex and
    // {1,2,3} in two.
    REQUIRE(h.codegree(0, 3, 3, 3, 2) == 1);
    REQUIRE(h.codegree(0, 3, 3, 3, 1) == 1);
    REQUIRE(h.codegree(0, 4, 3, 3, 1) == 1);
    REQUIRE(h.codegree(0, 4, 3, 3, 2) == 0);

    const auto& ds = h.degree_stats();
    REQUIRE_FALSE(ds.regular);
    REQUIRE(ds.min_degree == 1);
    REQUIRE(ds.max_degree == 3);
    REQUIRE(ds.mean_degree == Catch::Approx(1.8));
}

TEST_CASE("hypergraph construction rejects malformed edge lists", "[hypergraph]") {
    REQUIRE_THROWS_AS(Hypergraph(3, {{0}}, 0), InputError);
    REQUIRE_THROWS_AS(Hypergraph(3, {{0, 0, 1}}, 3), InputError);
    REQUIRE_THROWS_AS(Hypergraph(3, {{1, 0, 2}}, 3), InputError);
    REQUIRE_THROWS_AS(Hypergraph(3, {{0, 1, 3}}, 3), InputError);
    REQUIRE_THROWS_AS(Hypergraph(3, {{0, 1}}, 3), InputError);   // declared size mismatch
    REQUIRE_THROWS_AS(Hypergraph(4, {{0, 1, 2}, {0, 1, 2}}, 3), InputError);
    REQUIRE_THROWS_AS(Hypergraph(5, 4, {0, 1, 2}), InputError);  // pins not a multiple
}

TEST_CASE("shadow deduplicates overlapping pairs", "[hypergraph]") {
    const Hypergraph h(4, {{0, 1, 2}, {1, 2, 3}}, 3);
    const auto pairs = shadow(h, 2);
    const std::vector<std::vector<Vertex>> want = {
        {0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
    REQUIRE(pairs == want);
}

TEST_CASE("crude-bound report and feasible epsilon on the triangle host",
          "[hypergraph]") {
    const Hypergraph h = template_copies(template_by_name("triangle"), 40);
    REQUIRE(h.vertex_count() == 780);
    REQUIRE(h.edge_count() == 9880);
    const auto& ds = h.degree_stats();
    REQUIRE(ds.regular);
    REQUIRE(ds.min_degree == 38);

    // Two host edges lie in at most one triangle, so Delta_2 = 1; it still
    // binds at exactly 1/2 because 1 < D^(1/2 - eps) needs eps < 1/2, and
    // that sits below the D > N^eps cap of log 38 / log 780 = 0.546...
    const double cap = h.max_feasible_epsilon();
    REQUIRE(cap == Catch::Approx(0.5).epsilon(1e-12));
    REQUIRE(cap < std::log(38.0) / std::log(780.0));
    REQUIRE(h.max_set_degree(2) == 1);
    // Distinct triangles of K_40 overlap in at most one host edge, so no edge
    // pair shares r-1 = 2 vertices.
    REQUIRE(h.max_r1_codegree() == 0);

    const auto ok = h.check_main_conditions(cap - 0.01);
    REQUIRE(ok.all_ok());
    REQUIRE(ok.d == Catch::Approx(38.0));
    const auto bad = h.check_main_conditions(cap + 0.05);
    REQUIRE_FALSE(bad.all_ok());
    REQUIRE_FALSE(bad.degree_vs_n_ok);
}

TEST_CASE("named templates have the documented shapes", "[families]") {
    const Template tri = template_by_name("triangle");
    REQUIRE(tri.v == 3);
    REQUIRE(tri.k == 2);
    REQUIRE(tri.edge_count() == 3);
    tri.validate();

    REQUIRE(template_by_name("c4").edge_count() == 4);
    REQUIRE(template_by_name("diamond").edge_count() == 5);
    REQUIRE(template_by_name("cherry").edge_count() == 2);
    const Template trip = template_by_name("tripartite222");
    REQUIRE(trip.v == 6);
    REQUIRE(trip.k == 3);
    REQUIRE(trip.edge_count() == 8);
    const Template k43 = template_by_name("k4_3");
    REQUIRE(k43.v == 4);
    REQUIRE(k43.k == 3);
    REQUIRE(k43.edge_count() == 4);
    REQUIRE_THROWS_AS(template_by_name("k7"), InputError);

    Template dup = tri;
    dup.edges.push_back({0, 1});
    REQUIRE_THROWS_AS(dup.validate(), InputError);
    Template rev = tri;
    rev.edges[0] = {1, 0};
    REQUIRE_THROWS_AS(rev.validate(), InputError);
}

TEST_CASE("template copies match closed-form counts", "[generators]") {
    // Triangles in K5: C(5,3) copies over C(5,2) ground vertices, each
    // ground vertex in exactly 3 of them.
    const Hypergraph k3k5 = template_copies(template_by_name("triangle"), 5);
    REQUIRE(k3k5.vertex_count() == 10);
    REQUIRE(k3k5.edge_count() == 10);
    REQUIRE(k3k5.uniformity() == 3);
    REQUIRE(k3k5.degree_stats().regular);
    REQUIRE(k3k5.degree_stats().min_degree == 3);

    // 4-cycles in K6: 6*5*4*3 / (2*4) = 45 copies on 15 ground vertices.
    const Hypergraph c4k6 = template_copies(template_by_name("c4"), 6);
    REQUIRE(c4k6.vertex_count() == 15);
    REQUIRE(c4k6.edge_count() == 45);
    REQUIRE(c4k6.uniformity() == 4);
    REQUIRE(c4k6.degree_stats().min_degree == 12);

    // Diamonds in K8: 8*7*6*5 / 4 = 420 copies, regular of degree
    // 5(n-2)(n-3)/2 = 75.
    const Hypergraph dia8 = template_copies(template_by_name("diamond"), 8);
    REQUIRE(dia8.vertex_count() == 28);
    REQUIRE(dia8.edge_count() == 420);
    REQUIRE(dia8.degree_stats().regular);
    REQUIRE(dia8.degree_stats().min_degree == 75);

    // K4 copies in the 3-uniform setting: each 4-subset of [5] is one copy.
    const Hypergraph k43 = template_copies(template_by_name("k4_3"), 5);
    REQUIRE(k43.vertex_count() == 10);
    REQUIRE(k43.edge_count() == 5);
    REQUIRE(k43.uniformity() == 4);
    REQUIRE(k43.degree_stats().min_degree == 2);

    REQUIRE_THROWS_AS(template_copies(template_by_name("triangle"), 2), InputError);
}

TEST_CASE("3-term progression hosts are regular with the hand-counted degree",
          "[generators]") {
    // In Z_p every pair {a,b} completes to an AP in exactly 3 ways, so the
    // edge count equals the pair count and D = 3 * C(p,2) * 3 / (3p).
    for (const std::int64_t p : {5, 7, 11}) {
        const Hypergraph h = k_ap(p, 3);
        REQUIRE(h.vertex_count() == p);
        REQUIRE(h.edge_count() == p * (p - 1) / 2);
        REQUIRE(h.uniformity() == 3);
        const auto& ds = h.degree_stats();
        REQUIRE(ds.regular);
        REQUIRE(ds.min_degree == 3 * (p - 1) / 2);
        REQUIRE(h.max_set_degree(2) == 3);
    }
    // p = 5 degenerates: every 3-subset of Z_5 is a progression.
    REQUIRE(k_ap(5, 3).edge_count() == binomial(5, 3));

    REQUIRE_THROWS_AS(k_ap(9, 3), InputError);   // composite
    REQUIRE_THROWS_AS(k_ap(3, 3), InputError);   // N <= k
    REQUIRE_THROWS_AS(k_ap(11, 2), InputError);  // k too small
}

TEST_CASE("packed progression dedup agrees with a direct enumeration",
          "[generators]") {
    // The generator packs sorted progressions into single integers before
    // deduplication; rebuild the same sets with plain vectors and compare.
    const std::int64_t n = 101;
    std::set<std::vector<Vertex>> brute;
    for (std::int64_t a = 0; a < n; ++a)
        for (std::int64_t d = 1; d < n; ++d) {
            std::vector<Vertex> s = {static_cast<Vertex>(a),
                                     static_cast<Vertex>((a + d) % n),
                                     static_cast<Vertex>((a + 2 * d) % n)};
            std::sort(s.begin(), s.end());
            brute.insert(s);
        }
    const Hypergraph h = k_ap(n, 3);
    REQUIRE(h.edge_count() == static_cast<std::int64_t>(brute.size()));
    const auto edges = all_edges(h);
    REQUIRE(std::equal(edges.begin(), edges.end(), brute.begin()));
}

TEST_CASE("4-term progression host matches a brute-force set count",
          "[generators]") {
    for (const std::int64_t p : {7, 13}) {
        std::set<std::vector<Vertex>> brute;
        for (std::int64_t a = 0; a < p; ++a)
            for (std::int64_t d = 1; d < p; ++d) {
                std::vector<Vertex> s(4);
                for (int i = 0; i < 4; ++i)
                    s[i] = static_cast<Vertex>((a + i * d) % p);
                std::sort(s.begin(), s.end());
                brute.insert(s);
            }
        const Hypergraph h = k_ap(p, 4);
        REQUIRE(h.edge_count() == static_cast<std::int64_t>(brute.size()));
        // Handshake: M * k = sum of degrees.
        std::int64_t total = 0;
        for (Vertex v = 0; v < p; ++v) total += h.degree(v);
        REQUIRE(total == 4 * h.edge_count());
    }
}

TEST_CASE("labeled progressions count each set once per parameterization",
          "[generators]") {
    const LabeledFamily f = k_ap_labeled(7, 3);
    REQUIRE(f.size() == 42);
    REQUIRE(f.uniform_size == 3);
    std::map<std::vector<Vertex>, int> mult;
    std::set<std::string> labels;
    for (std::int64_t i = 0; i < f.size(); ++i) {
        const auto sp = f.set(i);
        ++mult[std::vector<Vertex>(sp.begin(), sp.end())];
        labels.insert(f.labels[i]);
    }
    REQUIRE(labels.size() == 42);
    // Prime modulus: every progression has exactly the (a,d) and reversed
    // representation.
    for (const auto& [set, count] : mult) REQUIRE(count == 2);
    REQUIRE(mult.size() == 21);
}

TEST_CASE("Schur triple host matches the hand enumeration for Z_5",
          "[generators]") {
    const Hypergraph h = sum_free(5);
    const std::vector<std::vector<Vertex>> want = {
        {0, 1, 4}, {0, 2, 3}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
    REQUIRE(all_edges(h) == want);

    // Z_11: vertex 0 lies exactly in the triples {0, b, -b}.
    const Hypergraph h11 = sum_free(11);
    REQUIRE(h11.degree(0) == 5);
    REQUIRE_FALSE(h11.degree_stats().regular);
    REQUIRE_THROWS_AS(sum_free(4), InputError);
}

TEST_CASE("cube families enumerate offsets without coincidences", "[generators]") {
    const LabeledFamily pairs = d_cube(11, 1);
    REQUIRE(pairs.size() == 110);
    REQUIRE(pairs.uniform_size == 2);
    std::map<std::vector<Vertex>, int> mult;
    for (std::int64_t i = 0; i < pairs.size(); ++i) {
        const auto sp = pairs.set(i);
        ++mult[std::vector<Vertex>(sp.begin(), sp.end())];
    }
    // h and -h give the same pair.
    for (const auto& [set, count] : mult) REQUIRE(count == 2);

    // d = 2: count the valid offset pairs directly from the 9 signed sums.
    std::int64_t good = 0;
    for (std::int64_t h1 = 0; h1 < 11; ++h1)
        for (std::int64_t h2 = 0; h2 < 11; ++h2) {
            std::set<std::int64_t> sums;
            for (int s1 = -1; s1 <= 1; ++s1)
                for (int s2 = -1; s2 <= 1; ++s2)
                    sums.insert(((s1 * h1 + s2 * h2) % 11 + 11) % 11);
            good += sums.size() == 9;
        }
    const LabeledFamily cubes = d_cube(11, 2);
    REQUIRE(cubes.size() == 11 * good);
    REQUIRE(cubes.uniform_size == 4);
    for (std::int64_t i = 0; i < cubes.size(); ++i)
        REQUIRE(cubes.set_size(i) == 4);

    // 3^2 signed sums cannot be distinct mod 7.
    REQUIRE_THROWS_AS(d_cube(7, 2), InputError);
}

TEST_CASE("random uniform hosts are distinct, sorted, and seed-deterministic",
          "[generators]") {
    // m equal to the total subset count must produce every 3-subset.
    const Hypergraph full = random_uniform(5, 3, 10, 42);
    REQUIRE(full.edge_count() == 10);
    std::vector<std::int64_t> ranks;
    for (const auto& e : all_edges(full)) ranks.push_back(subset_rank(e));
    std::sort(ranks.begin(), ranks.end());
    for (std::int64_t rank = 0; rank < 10; ++rank) REQUIRE(ranks[rank] == rank);

    const Hypergraph a = random_uniform(10, 3, 20, 1);
    const Hypergraph b = random_uniform(10, 3, 20, 1);
    const Hypergraph c = random_uniform(10, 3, 20, 2);
    REQUIRE(all_edges(a) == all_edges(b));
    REQUIRE(all_edges(a) != all_edges(c));

    // Large ground set exercises the rejection path.
    const Hypergraph big = random_uniform(300, 3, 50, 7);
    REQUIRE(big.edge_count() == 50);
    const auto be = all_edges(big);
    REQUIRE(std::adjacent_find(be.begin(), be.end()) == be.end());
    for (const auto& e : be) {
        REQUIRE(e.size() == 3);
        REQUIRE(e[0] < e[1]);
        REQUIRE(e[1] < e[2]);
    }

    REQUIRE_THROWS_AS(random_uniform(5, 3, 11, 0), InputError);
    REQUIRE_THROWS_AS(random_uniform(5, 6, 1, 0), InputError);
}

TEST_CASE("hg1 text round-trips byte-exactly and rejects sloppy input", "[io]") {
    const Hypergraph h(5, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}}, 3);
    const std::string text = to_hg1(h);
    REQUIRE(text == "hg1 5 3 3\n0 1 2\n1 2 3\n2 3 4\n");
    const Hypergraph back = hypergraph_from_hg1(text);
    REQUIRE(to_hg1(back) == text);

    const std::string path = temp_path("hygreedy_core_io.hg1");
    write_hypergraph(h, path);
    const Hypergraph from_file = read_hypergraph(path);
    REQUIRE(to_hg1(from_file) == text);

    REQUIRE_THROWS_AS(hypergraph_from_hg1("hg1 5 1 3\n0 1 2"), InputError);
    REQUIRE_THROWS_AS(hypergraph_from_hg1("hg1 5 1 3\n0  1 2\n"), InputError);
    REQUIRE_THROWS_AS(hypergraph_from_hg1("hg1 5 1 3\n0 01 2\n"), InputError);
    REQUIRE_THROWS_AS(hypergraph_from_hg1("hg1 5 2 3\n0 1 2\n"), InputError);
    REQUIRE_THROWS_AS(hypergraph_from_hg1("hg1 5 1 3\n0 1 9\n"), InputError);
    REQUIRE_THROWS_AS(hypergraph_from_hg1("hg2 5 0 3\n"), InputError);
}

TEST_CASE("hypergraph json round-trips and validates keys", "[io]") {
    const Hypergraph h(4, {{0, 1}, {1, 2, 3}}, 0);
    const auto j = hypergraph_to_json(h);
    const Hypergraph back = hypergraph_from_json(j);
    REQUIRE(back.vertex_count() == 4);
    REQUIRE(all_edges(back) == all_edges(h));
    REQUIRE_THROWS_AS(hypergraph_from_json(nlohmann::json{{"n", 4}}), InputError);
}

TEST_CASE("labeled family and template files round-trip", "[io]") {
    const LabeledFamily f = k_ap_labeled(7, 3);
    const std::string fpath = temp_path("hygreedy_core_io.fam1");
    write_family(f, fpath);
    const LabeledFamily fback = read_family(fpath);
    REQUIRE(fback.size() == f.size());
    REQUIRE(fback.uniform_size == f.uniform_size);
    REQUIRE(fback.labels == f.labels);
    REQUIRE(fback.pins == f.pins);

    const Template t = template_by_name("diamond");
    const std::string tpath = temp_path("hygreedy_core_io.tmpl");
    write_template(t, tpath);
    const Template tback = read_template(tpath);
    REQUIRE(tback.v == t.v);
    REQUIRE(tback.k == t.k);
    REQUIRE(tback.edges == t.edges);

    const std::vector<Vertex> set = {0, 5, 9, 12};
    const std::string vpath = temp_path("hygreedy_core_io.set");
    write_vertex_set(set, vpath);
    REQUIRE(read_vertex_set(vpath) == set);
}
