#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hygreedy/common.hpp"

namespace hygreedy {

// A list of (label, vertex set) pairs over vertices 0..n-1. Unlike
// Hypergraph edges, identical sets may appear under distinct labels.
struct LabeledFamily {
    Vertex n = 0;
    int uniform_size = 0;  // 0 when sets have mixed sizes
    std::vector<std::string> labels;
    std::vector<std::int64_t> offsets{0};
    std::vector<Vertex> pins;

    std::int64_t size() const { return static_cast<std::int64_t>(labels.size()); }

    std::span<const Vertex> set(std::int64_t i) const {
        return {pins.data() + offsets[i], pins.data() + offsets[i + 1]};
    }

    int set_size(std::int64_t i) const {
        return static_cast<int>(offsets[i + 1] - offsets[i]);
    }

    void add(std::string label, std::span<const Vertex> vertices) {
        require_input(!vertices.empty(), "labeled set must be non-empty");
        require_input(label.find_first_of(" \t\n") == std::string::npos,
                      "label contains whitespace");
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            require_input(vertices[i] >= 0 && vertices[i] < n, "vertex out of range");
            if (i > 0)
                require_input(vertices[i - 1] < vertices[i],
                              "labeled set is not strictly increasing");
        }
        if (uniform_size != 0 && static_cast<int>(vertices.size()) != uniform_size)
            require_input(false, "set size breaks declared uniformity");
        labels.push_back(std::move(label));
        pins.insert(pins.end(), vertices.begin(), vertices.end());
        offsets.push_back(static_cast<std::int64_t>(pins.size()));
    }
};

// All x-subsets of the sets of F, tagged with the parent label.
inline std::vector<std::pair<std::string, std::vector<Vertex>>>
labeled_shadow(const LabeledFamily& f, int x) {
    require_input(x >= 1, "shadow needs x >= 1");
    std::vector<std::pair<std::string, std::vector<Vertex>>> out;
    std::vector<int> idx(x);
    for (std::int64_t e = 0; e < f.size(); ++e) {
        const auto sp = f.set(e);
        const int s = static_cast<int>(sp.size());
        if (s < x) continue;
        for (int i = 0; i < x; ++i) idx[i] = i;
        for (;;) {
            std::vector<Vertex> sub(x);
            for (int i = 0; i < x; ++i) sub[i] = sp[idx[i]];
            out.emplace_back(f.labels[e], std::move(sub));
            int i = x - 1;
            while (i >= 0 && idx[i] == s - x + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < x; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

// A small k-uniform template (pattern hypergraph) whose copies are counted
// inside complete host structures. Graphs use k = 2.
struct Template {
    int v = 0;  // vertices 0..v-1
    int k = 0;  // edge size
    std::vector<std::vector<Vertex>> edges;

    void validate() const {
        require_input(v >= 1, "template needs at least one vertex");
        require_input(k >= 2, "template edge size must be >= 2");
        std::vector<std::vector<Vertex>> seen;
        for (const auto& e : edges) {
            require_input(static_cast<int>(e.size()) == k, "template edge of wrong size");
            for (std::size_t i = 0; i < e.size(); ++i) {
                require_input(e[i] >= 0 && e[i] < v, "template vertex out of range");
                if (i > 0)
                    require_input(e[i - 1] < e[i], "template edge not strictly increasing");
            }
            seen.push_back(e);
        }
        std::sort(seen.begin(), seen.end());
        require_input(std::adjacent_find(seen.begin(), seen.end()) == seen.end(),
                      "duplicate template edge");
    }

    int edge_count() const { return static_cast<int>(edges.size()); }
};

inline Template clique_template(int s) {
    Template t;
    t.v = s;
    t.k = 2;
    for (Vertex a = 0; a < s; ++a)
        for (Vertex b = a + 1; b < s; ++b) t.edges.push_back({a, b});
    return t;
}

inline Template cycle_template(int s) {
    Template t;
    t.v = s;
    t.k = 2;
    for (Vertex a = 0; a < s; ++a) {
        Vertex b = (a + 1) % s;
        t.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(t.edges.begin(), t.edges.end());
    return t;
}

// K_4 minus an edge; the missing edge is {2, 3}.
inline Template diamond_template() {
    Template t;
    t.v = 4;
    t.k = 2;
    t.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};
    return t;
}

// Complete 3-partite 3-uniform template with parts {0,1}, {2,3}, {4,5}.
inline Template tripartite_222_template() {
    Template t;
    t.v = 6;
    t.k = 3;
    for (Vertex a = 0; a < 2; ++a)
        for (Vertex b = 2; b < 4; ++b)
            for (Vertex c = 4; c < 6; ++c) t.edges.push_back({a, b, c});
    return t;
}

// All 3-subsets of a 4-set.
inline Template clique_3uniform_template() {
    Template t;
    t.v = 4;
    t.k = 3;
    t.edges = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    return t;
}

}  // namespace hygreedy
