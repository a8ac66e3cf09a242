#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "conlat/concept.hpp"
#include "conlat/context.hpp"
#include "conlat/engine.hpp"
#include "conlat/errors.hpp"
#include "conlat/io.hpp"
#include "conlat/oracle.hpp"

namespace conlat {

/// The concept digraph: a vertex table in (level, intent) order with ids
/// 0..n-1, and directed cover edges from each concept to its upper covers.
struct LatticeGraph {
    std::vector<FormalConcept> vertices;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

enum class LabelMode { full, sizes };

/// Builds the digraph: concepts sorted by (level, intent) become the vertex
/// table; evidence pairs are mapped through the renumbering and kept only
/// when they are true covers, i.e. no concept lies strictly between.
inline LatticeGraph build_lattice(const ConceptList& concepts, const EdgeEvidence& evidence) {
    LatticeGraph graph;

    std::vector<std::uint32_t> order(concepts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (concepts[a].level != concepts[b].level)
            return concepts[a].level < concepts[b].level;
        return lex_less(concepts[a].intent, concepts[b].intent);
    });
    std::vector<std::uint32_t> new_id(concepts.size());
    for (std::uint32_t pos = 0; pos < order.size(); ++pos) new_id[order[pos]] = pos;
    graph.vertices.reserve(concepts.size());
    for (std::uint32_t old : order) graph.vertices.push_back(concepts[old]);

    // vertex ids grouped by extent size; anything strictly between two
    // extents has a size strictly between theirs
    std::vector<std::size_t> extent_size(graph.vertices.size());
    std::size_t max_size = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        extent_size[v] = graph.vertices[v].extent.count();
        max_size = std::max(max_size, extent_size[v]);
    }
    std::vector<std::vector<std::uint32_t>> by_size(max_size + 1);
    for (std::size_t v = 0; v < graph.vertices.size(); ++v)
        by_size[extent_size[v]].push_back(static_cast<std::uint32_t>(v));

    for (auto [p_old, c_old] : evidence.pairs) {
        if (p_old >= concepts.size()) throw DanglingEdge(p_old);
        if (c_old >= concepts.size()) throw DanglingEdge(c_old);
        const std::uint32_t p = new_id[p_old];
        const std::uint32_t c = new_id[c_old];
        const ObjectSet& lo = graph.vertices[p].extent;
        const ObjectSet& hi = graph.vertices[c].extent;
        if (!(extent_size[p] < extent_size[c] && lo.is_subset_of(hi))) continue;
        bool between = false;
        for (std::size_t s = extent_size[p] + 1; s < extent_size[c] && !between; ++s) {
            for (std::uint32_t w : by_size[s]) {
                const ObjectSet& mid = graph.vertices[w].extent;
                if (lo.is_subset_of(mid) && mid.is_subset_of(hi)) {
                    between = true;
                    break;
                }
            }
        }
        if (!between) graph.edges.emplace_back(p, c);
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()),
                      graph.edges.end());
    return graph;
}

struct ValidationReport {
    std::vector<std::string> violations;
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
    bool ok() const { return violations.empty(); }
};

/// Structural checks on the digraph; on small contexts (|G| <= 10) the edge
/// set is additionally compared against the brute-force cover relation.
/// Violations are reported, not thrown.
inline ValidationReport validate_lattice(const LatticeGraph& graph, const FormalContext& ctx) {
    ValidationReport report;
    report.vertex_count = graph.vertices.size();
    report.edge_count = graph.edges.size();
    const std::size_t n = graph.vertices.size();

    for (auto [a, b] : graph.edges) {
        if (a >= n || b >= n) {
            report.violations.push_back("edge endpoint out of range");
            return report;
        }
        const auto& lo = graph.vertices[a].extent;
        const auto& hi = graph.vertices[b].extent;
        if (!(lo.count() < hi.count() && lo.is_subset_of(hi)))
            report.violations.push_back("edge " + std::to_string(a) + "->" +
                                        std::to_string(b) +
                                        " is not a strict extent containment");
        if (graph.vertices[b].level > graph.vertices[a].level + 1)
            report.violations.push_back("edge " + std::to_string(a) + "->" +
                                        std::to_string(b) + " skips more than one level");
    }

    // acyclicity by Kahn's algorithm
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::uint32_t>> above(n);
    for (auto [a, b] : graph.edges) {
        ++indegree[b];
        above[a].push_back(b);
    }
    std::vector<std::uint32_t> queue;
    for (std::size_t v = 0; v < n; ++v)
        if (indegree[v] == 0) queue.push_back(static_cast<std::uint32_t>(v));
    std::size_t sources = queue.size();
    std::size_t visited = 0;
    while (!queue.empty()) {
        std::uint32_t v = queue.back();
        queue.pop_back();
        ++visited;
        for (std::uint32_t u : above[v])
            if (--indegree[u] == 0) queue.push_back(u);
    }
    if (visited != n) report.violations.push_back("edge set contains a cycle");

    std::size_t sinks = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (above[v].empty()) ++sinks;
    if (n >= 1 && sources != 1)
        report.violations.push_back("expected exactly one source, found " +
                                    std::to_string(sources));
    if (n >= 1 && sinks != 1)
        report.violations.push_back("expected exactly one sink, found " +
                                    std::to_string(sinks));

    if (ctx.object_count() <= 10) {
        auto oracle_set = oracle::brute_force_concepts(ctx);
        auto oracle_covers = oracle::brute_force_covers(oracle_set);
        std::vector<std::pair<oracle::IdVec, oracle::IdVec>> expected;
        for (auto [i, j] : oracle_covers)
            expected.emplace_back(oracle_set.concepts[i].extent,
                                  oracle_set.concepts[j].extent);
        std::vector<std::pair<oracle::IdVec, oracle::IdVec>> actual;
        auto to_idvec = [](const ObjectSet& s) {
            oracle::IdVec v;
            s.for_each([&](std::size_t i) { v.push_back(static_cast<int>(i)); });
            return v;
        };
        for (auto [a, b] : graph.edges)
            actual.emplace_back(to_idvec(graph.vertices[a].extent),
                                to_idvec(graph.vertices[b].extent));
        std::sort(expected.begin(), expected.end());
        std::sort(actual.begin(), actual.end());
        if (expected != actual)
            report.violations.push_back("edges do not match the brute-force cover relation");
        if (graph.vertices.size() != oracle_set.size())
            report.violations.push_back("vertex count does not match the oracle concept count");
    }
    return report;
}

namespace lattice_detail {

inline std::string escape_label(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string sorted_name_list(const std::vector<std::string>& names,
                                    const std::vector<std::uint32_t>& ids) {
    std::vector<std::string> picked;
    picked.reserve(ids.size());
    for (auto id : ids) picked.push_back(names[id]);
    std::sort(picked.begin(), picked.end());
    std::string out = "{";
    for (std::size_t i = 0; i < picked.size(); ++i) {
        if (i) out += ',';
        out += picked[i];
    }
    out += '}';
    return out;
}

inline std::string vertex_label(const LatticeGraph& graph, const FormalContext& ctx,
                                std::size_t v, LabelMode mode) {
    const FormalConcept& c = graph.vertices[v];
    if (mode == LabelMode::sizes)
        return std::to_string(c.extent.count()) + "/" + std::to_string(c.intent.count());
    return sorted_name_list(ctx.objects(), c.extent.ids()) + " / " +
           sorted_name_list(ctx.attributes(), c.intent.ids());
}

} // namespace lattice_detail

/// Graphviz rendering, one node line per vertex and one edge line per edge,
/// directed from each concept to its upper cover. Byte-deterministic.
inline std::string export_dot(const LatticeGraph& graph, const FormalContext& ctx,
                              LabelMode mode = LabelMode::full) {
    std::string out = "digraph concept_lattice {\n  rankdir=BT;\n";
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        out += "  n" + std::to_string(v) + " [label=\"" +
               lattice_detail::escape_label(
                   lattice_detail::vertex_label(graph, ctx, v, mode)) +
               "\"];\n";
    }
    for (auto [a, b] : graph.edges)
        out += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
    out += "}\n";
    return out;
}

inline std::string export_graphml(const LatticeGraph& graph, const FormalContext& ctx) {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        "  <key id=\"level\" for=\"node\" attr.name=\"level\" attr.type=\"int\"/>\n"
        "  <key id=\"extent\" for=\"node\" attr.name=\"extent\" attr.type=\"string\"/>\n"
        "  <key id=\"intent\" for=\"node\" attr.name=\"intent\" attr.type=\"string\"/>\n"
        "  <graph id=\"concept_lattice\" edgedefault=\"directed\">\n";
    auto xml_escape = [](const std::string& s) {
        std::string r;
        for (char c : s) {
            switch (c) {
                case '&': r += "&amp;"; break;
                case '<': r += "&lt;"; break;
                case '>': r += "&gt;"; break;
                case '"': r += "&quot;"; break;
                default: r += c;
            }
        }
        return r;
    };
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        const FormalConcept& c = graph.vertices[v];
        out += "    <node id=\"n" + std::to_string(v) + "\">\n";
        out += "      <data key=\"level\">" + std::to_string(c.level) + "</data>\n";
        out += "      <data key=\"extent\">" +
               xml_escape(lattice_detail::sorted_name_list(ctx.objects(), c.extent.ids())) +
               "</data>\n";
        out += "      <data key=\"intent\">" +
               xml_escape(lattice_detail::sorted_name_list(ctx.attributes(), c.intent.ids())) +
               "</data>\n";
        out += "    </node>\n";
    }
    for (auto [a, b] : graph.edges)
        out += "    <edge source=\"n" + std::to_string(a) + "\" target=\"n" +
               std::to_string(b) + "\"/>\n";
    out += "  </graph>\n</graphml>\n";
    return out;
}

/// One line per concept: level, tab, sorted object names in braces, tab,
/// sorted attribute names in braces; lines ordered by (level, intent).
inline std::string export_concepts_tsv(const ConceptList& concepts, const FormalContext& ctx) {
    std::vector<std::uint32_t> order(concepts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (concepts[a].level != concepts[b].level)
            return concepts[a].level < concepts[b].level;
        return lex_less(concepts[a].intent, concepts[b].intent);
    });
    std::string out;
    for (std::uint32_t i : order) {
        const FormalConcept& c = concepts[i];
        out += std::to_string(c.level);
        out += '\t';
        out += lattice_detail::sorted_name_list(ctx.objects(), c.extent.ids());
        out += '\t';
        out += lattice_detail::sorted_name_list(ctx.attributes(), c.intent.ids());
        out += '\n';
    }
    return out;
}

/// Format inverse of export_concepts_tsv.
inline ConceptList parse_concepts_tsv(const FormalContext& ctx, std::string_view text) {
    std::unordered_map<std::string, std::size_t> object_ids;
    for (std::size_t g = 0; g < ctx.object_count(); ++g)
        object_ids.emplace(ctx.object_name(g), g);
    std::unordered_map<std::string, std::size_t> attribute_ids;
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m)
        attribute_ids.emplace(ctx.attribute_name(m), m);

    auto parse_braced = [&](std::string_view field, const auto& ids, auto& set,
                            std::size_t line_no) {
        field = io_detail::trim(field);
        if (field.size() < 2 || field.front() != '{' || field.back() != '}')
            throw MalformedLine(line_no);
        field.remove_prefix(1);
        field.remove_suffix(1);
        if (field.empty()) return;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = field.find(',', pos);
            std::string name(io_detail::trim(
                comma == std::string_view::npos ? field.substr(pos)
                                                : field.substr(pos, comma - pos)));
            auto it = ids.find(name);
            if (it == ids.end()) throw Error("unknown name in concepts file: " + name);
            set.set(it->second);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    };

    ConceptList out;
    auto lines = io_detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = lines[ln];
        if (io_detail::trim(line).empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = (t1 == std::string_view::npos) ? std::string_view::npos
                                                        : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos) throw MalformedLine(ln + 1);
        std::uint32_t level = 0;
        for (char ch : io_detail::trim(line.substr(0, t1))) {
            if (ch < '0' || ch > '9') throw MalformedLine(ln + 1);
            level = level * 10 + static_cast<std::uint32_t>(ch - '0');
        }
        FormalConcept c{ObjectSet(ctx.object_count()), AttributeSet(ctx.attribute_count()),
                        true, level};
        parse_braced(line.substr(t1 + 1, t2 - t1 - 1), object_ids, c.extent, ln + 1);
        parse_braced(line.substr(t2 + 1), attribute_ids, c.intent, ln + 1);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace conlat
