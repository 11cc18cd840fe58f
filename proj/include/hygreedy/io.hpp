#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hygreedy/common.hpp"
#include "hygreedy/families.hpp"
#include "hygreedy/hypergraph.hpp"

namespace hygreedy {

namespace detail {

// Canonical integer token: decimal digits, no sign, no leading zeros.
inline std::int64_t parse_canonical_int(std::string_view tok, const char* what) {
    require_input(!tok.empty(), std::string(what) + ": empty integer token");
    require_input(tok == "0" || tok[0] != '0',
                  std::string(what) + ": non-canonical integer '" + std::string(tok) + "'");
    std::int64_t value = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    require_input(res.ec == std::errc() && res.ptr == tok.data() + tok.size(),
                  std::string(what) + ": bad integer '" + std::string(tok) + "'");
    return value;
}

// Splits a line on single spaces; rejects doubled, leading, or trailing spaces.
inline std::vector<std::string_view> split_strict(std::string_view line, const char* what) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ' ') {
            require_input(i > start, std::string(what) + ": stray space");
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require_input(static_cast<bool>(in), "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string_view> split_lines(std::string_view text, const char* what) {
    require_input(!text.empty(), std::string(what) + ": empty file");
    require_input(text.back() == '\n', std::string(what) + ": missing final newline");
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            lines.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return lines;
}

}  // namespace detail

inline std::string to_hg1(const Hypergraph& h) {
    std::string out = "hg1 " + std::to_string(h.vertex_count()) + " " +
                      std::to_string(h.edge_count()) + " " +
                      std::to_string(h.uniformity()) + "\n";
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        const auto sp = h.edge(e);
        for (std::size_t i = 0; i < sp.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(sp[i]);
        }
        out += '\n';
    }
    return out;
}

inline Hypergraph hypergraph_from_hg1(std::string_view text) {
    const auto lines = detail::split_lines(text, "hg1");
    const auto head = detail::split_strict(lines[0], "hg1 header");
    require_input(head.size() == 4 && head[0] == "hg1", "hg1: bad header line");
    const std::int64_t n = detail::parse_canonical_int(head[1], "hg1 n");
    const std::int64_t m = detail::parse_canonical_int(head[2], "hg1 m");
    const std::int64_t r = detail::parse_canonical_int(head[3], "hg1 r");
    require_input(n >= 0 && n <= INT32_MAX, "hg1: vertex count out of range");
    require_input(r >= 0 && r <= 255, "hg1: uniformity out of range");
    require_input(static_cast<std::int64_t>(lines.size()) == m + 1,
                  "hg1: edge line count does not match header");
    std::vector<std::vector<Vertex>> edges;
    edges.reserve(m);
    for (std::int64_t e = 0; e < m; ++e) {
        const auto toks = detail::split_strict(lines[e + 1], "hg1 edge");
        std::vector<Vertex> verts(toks.size());
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const std::int64_t v = detail::parse_canonical_int(toks[i], "hg1 vertex");
            require_input(v >= 0 && v < n, "hg1: vertex id out of range");
            verts[i] = static_cast<Vertex>(v);
        }
        edges.push_back(std::move(verts));
    }
    return Hypergraph(static_cast<Vertex>(n), edges, static_cast<int>(r));
}

inline Hypergraph hypergraph_from_json(const nlohmann::json& j) {
    require_input(j.is_object() && j.contains("n") && j.contains("uniformity") &&
                      j.contains("edges"),
                  "hypergraph json needs keys n, uniformity, edges");
    const std::int64_t n = j.at("n").get<std::int64_t>();
    const int r = j.at("uniformity").get<int>();
    std::vector<std::vector<Vertex>> edges;
    for (const auto& je : j.at("edges")) {
        std::vector<Vertex> e;
        for (const auto& jv : je) e.push_back(jv.get<Vertex>());
        edges.push_back(std::move(e));
    }
    return Hypergraph(static_cast<Vertex>(n), edges, r);
}

inline nlohmann::json hypergraph_to_json(const Hypergraph& h) {
    nlohmann::json j;
    j["n"] = h.vertex_count();
    j["uniformity"] = h.uniformity();
    auto edges = nlohmann::json::array();
    for (std::int64_t e = 0; e < h.edge_count(); ++e) {
        const auto sp = h.edge(e);
        edges.push_back(std::vector<Vertex>(sp.begin(), sp.end()));
    }
    j["edges"] = std::move(edges);
    return j;
}

// Accepts the hg1 text format or its JSON mirror (sniffed on the first byte).
inline Hypergraph read_hypergraph(const std::string& path) {
    const std::string text = detail::read_file(path);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path + ": " + e.what());
        }
        return hypergraph_from_json(j);
    }
    return hypergraph_from_hg1(text);
}

inline void write_hypergraph(const Hypergraph& h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_input(static_cast<bool>(out), "cannot write " + path);
    out << to_hg1(h);
}

inline std::string to_fam1(const LabeledFamily& f) {
    std::string out = "fam1 " + std::to_string(f.n) + " " + std::to_string(f.size()) +
                      " " + std::to_string(f.uniform_size) + "\n";
    for (std::int64_t i = 0; i < f.size(); ++i) {
        out += f.labels[i];
        for (Vertex v : f.set(i)) {
            out += ' ';
            out += std::to_string(v);
        }
        out += '\n';
    }
    return out;
}

inline LabeledFamily family_from_fam1(std::string_view text) {
    const auto lines = detail::split_lines(text, "fam1");
    const auto head = detail::split_strict(lines[0], "fam1 header");
    require_input(head.size() == 4 && head[0] == "fam1", "fam1: bad header line");
    const std::int64_t n = detail::parse_canonical_int(head[1], "fam1 n");
    const std::int64_t m = detail::parse_canonical_int(head[2], "fam1 m");
    const std::int64_t s = detail::parse_canonical_int(head[3], "fam1 s");
    require_input(static_cast<std::int64_t>(lines.size()) == m + 1,
                  "fam1: set line count does not match header");
    LabeledFamily f;
    f.n = static_cast<Vertex>(n);
    f.uniform_size = static_cast<int>(s);
    for (std::int64_t i = 0; i < m; ++i) {
        const auto toks = detail::split_strict(lines[i + 1], "fam1 set");
        require_input(toks.size() >= 2, "fam1: set line needs a label and vertices");
        std::vector<Vertex> verts(toks.size() - 1);
        for (std::size_t t = 1; t < toks.size(); ++t)
            verts[t - 1] =
                static_cast<Vertex>(detail::parse_canonical_int(toks[t], "fam1 vertex"));
        f.add(std::string(toks[0]), verts);
    }
    return f;
}

inline LabeledFamily read_family(const std::string& path) {
    return family_from_fam1(detail::read_file(path));
}

inline void write_family(const LabeledFamily& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_input(static_cast<bool>(out), "cannot write " + path);
    out << to_fam1(f);
}

inline std::string to_tmpl(const Template& t) {
    std::string out = "tmpl " + std::to_string(t.v) + " " +
                      std::to_string(t.edge_count()) + " " + std::to_string(t.k) + "\n";
    for (const auto& e : t.edges) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(e[i]);
        }
        out += '\n';
    }
    return out;
}

inline Template template_from_tmpl(std::string_view text) {
    const auto lines = detail::split_lines(text, "tmpl");
    const auto head = detail::split_strict(lines[0], "tmpl header");
    require_input(head.size() == 4 && head[0] == "tmpl", "tmpl: bad header line");
    Template t;
    t.v = static_cast<int>(detail::parse_canonical_int(head[1], "tmpl v"));
    const std::int64_t e = detail::parse_canonical_int(head[2], "tmpl e");
    t.k = static_cast<int>(detail::parse_canonical_int(head[3], "tmpl k"));
    require_input(static_cast<std::int64_t>(lines.size()) == e + 1,
                  "tmpl: edge line count does not match header");
    for (std::int64_t i = 0; i < e; ++i) {
        const auto toks = detail::split_strict(lines[i + 1], "tmpl edge");
        std::vector<Vertex> verts(toks.size());
        for (std::size_t j = 0; j < toks.size(); ++j)
            verts[j] = static_cast<Vertex>(detail::parse_canonical_int(toks[j], "tmpl vertex"));
        t.edges.push_back(std::move(verts));
    }
    t.validate();
    return t;
}

inline Template read_template(const std::string& path) {
    return template_from_tmpl(detail::read_file(path));
}

inline void write_template(const Template& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_input(static_cast<bool>(out), "cannot write " + path);
    out << to_tmpl(t);
}

// One vertex id per line.
inline std::vector<Vertex> read_vertex_set(const std::string& path) {
    const auto text = detail::read_file(path);
    const auto lines = detail::split_lines(text, "vertex set");
    std::vector<Vertex> out;
    out.reserve(lines.size());
    for (const auto& line : lines)
        out.push_back(static_cast<Vertex>(detail::parse_canonical_int(line, "vertex set")));
    return out;
}

inline void write_vertex_set(const std::vector<Vertex>& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_input(static_cast<bool>(out), "cannot write " + path);
    for (Vertex v : set) out << v << "\n";
}

}  // namespace hygreedy
