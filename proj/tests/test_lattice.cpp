#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "conlat/engine.hpp"
#include "conlat/lattice.hpp"
#include "test_support.hpp"

using namespace conlat;
namespace ct = conlat::test;

namespace {

std::size_t count_lines_with(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace

TEST_CASE("build_lattice on the diagonal 3x3 enumeration") {
    FormalContext ctx = ct::diagonal(3);
    auto result = enumerate_concepts(ctx, 1);
    LatticeGraph graph = build_lattice(result.concepts, result.evidence);
    REQUIRE(graph.vertices.size() == 5);
    CHECK(graph.edges.size() == 6);
    CHECK(graph.vertices[0].level == 1);
    CHECK(graph.vertices[0].extent.none()); // bottom gets id 0
    CHECK(validate_lattice(graph, ctx).ok());
}

TEST_CASE("build_lattice on degenerate shapes") {
    SECTION("single concept is both source and sink") {
        FormalContext ctx = ct::all_crosses(2, 2);
        auto result = enumerate_concepts(ctx, 1);
        LatticeGraph graph = build_lattice(result.concepts, result.evidence);
        CHECK(graph.vertices.size() == 1);
        CHECK(graph.edges.empty());
        CHECK(validate_lattice(graph, ctx).ok());
    }
    SECTION("chain context yields a path") {
        FormalContext ctx = ct::chain3();
        auto result = enumerate_concepts(ctx, 1);
        LatticeGraph graph = build_lattice(result.concepts, result.evidence);
        REQUIRE(graph.vertices.size() == 3);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> expected = {{0, 1}, {1, 2}};
        CHECK(graph.edges == expected);
    }
}

TEST_CASE("non-cover evidence is filtered out") {
    FormalContext ctx = ct::chain3();
    auto result = enumerate_concepts(ctx, 1);
    // bottom -> top is a strict containment but not a cover
    EdgeEvidence padded = result.evidence;
    padded.pairs.emplace_back(0, 2);
    LatticeGraph graph = build_lattice(result.concepts, padded);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> expected = {{0, 1}, {1, 2}};
    CHECK(graph.edges == expected);
}

TEST_CASE("evidence referencing unknown concepts is an error") {
    auto result = enumerate_concepts(ct::diagonal(3), 1);
    EdgeEvidence bad = result.evidence;
    bad.pairs.emplace_back(0, 99);
    CHECK_THROWS_AS(build_lattice(result.concepts, bad), DanglingEdge);
}

TEST_CASE("vertex ids are stable across rebuilds") {
    std::mt19937 rng(67);
    FormalContext ctx = ct::random_context(rng, 12, 8, 0.4);
    auto result = enumerate_concepts(ctx, 2);
    LatticeGraph first = build_lattice(result.concepts, result.evidence);
    LatticeGraph second = build_lattice(result.concepts, result.evidence);
    CHECK(first.vertices == second.vertices);
    CHECK(first.edges == second.edges);
}

TEST_CASE("validate_lattice flags fabricated defects") {
    FormalContext ctx = ct::diagonal(3);
    auto result = enumerate_concepts(ctx, 1);
    LatticeGraph graph = build_lattice(result.concepts, result.evidence);

    SECTION("edge between incomparable atoms") {
        LatticeGraph broken = graph;
        broken.edges.emplace_back(1, 2); // two atoms, no containment
        std::sort(broken.edges.begin(), broken.edges.end());
        ValidationReport report = validate_lattice(broken, ctx);
        CHECK_FALSE(report.ok());
        bool found = false;
        for (const auto& v : report.violations)
            if (v.find("strict extent containment") != std::string::npos) found = true;
        CHECK(found);
    }
    SECTION("missing edge breaks the oracle comparison") {
        LatticeGraph broken = graph;
        broken.edges.pop_back();
        ValidationReport report = validate_lattice(broken, ctx);
        CHECK_FALSE(report.ok());
        bool found = false;
        for (const auto& v : report.violations)
            if (v.find("cover relation") != std::string::npos) found = true;
        CHECK(found);
    }
    SECTION("counts are recounted") {
        ValidationReport report = validate_lattice(graph, ctx);
        CHECK(report.vertex_count == graph.vertices.size());
        CHECK(report.edge_count == graph.edges.size());
    }
}

TEST_CASE("validation passes on random engine output") {
    std::mt19937 rng(71);
    for (int round = 0; round < 10; ++round) {
        FormalContext ctx = ct::random_context(rng, 9, 9, 0.4);
        auto result = enumerate_concepts(ctx, 2);
        LatticeGraph graph = build_lattice(result.concepts, result.evidence);
        ValidationReport report = validate_lattice(graph, ctx);
        CAPTURE(report.violations);
        CHECK(report.ok());
    }
}

TEST_CASE("dot export") {
    FormalContext ctx = ct::diagonal(3);
    auto result = enumerate_concepts(ctx, 1);
    LatticeGraph graph = build_lattice(result.concepts, result.evidence);

    SECTION("counts and determinism") {
        std::string dot = export_dot(graph, ctx, LabelMode::full);
        CHECK(count_lines_with(dot, "[label=") == 5);
        CHECK(count_lines_with(dot, " -> ") == 6);
        CHECK(dot == export_dot(graph, ctx, LabelMode::full));
    }
    SECTION("full labels show the member names") {
        std::string dot = export_dot(graph, ctx, LabelMode::full);
        CHECK(dot.find("{} / {m1,m2,m3}") != std::string::npos);
        CHECK(dot.find("{g1,g2,g3} / {}") != std::string::npos);
    }
    SECTION("sizes labels show cardinalities") {
        std::string dot = export_dot(graph, ctx, LabelMode::sizes);
        CHECK(dot.find("n0 [label=\"0/3\"]") != std::string::npos);
        CHECK(dot.find("n4 [label=\"3/0\"]") != std::string::npos);
    }
    SECTION("single vertex graph") {
        FormalContext full = ct::all_crosses(2, 2);
        auto r = enumerate_concepts(full, 1);
        std::string dot = export_dot(build_lattice(r.concepts, r.evidence), full);
        CHECK(count_lines_with(dot, "[label=") == 1);
        CHECK(count_lines_with(dot, " -> ") == 0);
    }
    SECTION("distinct graphs produce distinct documents") {
        FormalContext other = ct::chain3();
        auto r = enumerate_concepts(other, 1);
        std::string a = export_dot(graph, ctx);
        std::string b = export_dot(build_lattice(r.concepts, r.evidence), other);
        CHECK(a != b);
    }
}

TEST_CASE("graphml export carries the node payloads") {
    FormalContext ctx = ct::chain3();
    auto result = enumerate_concepts(ctx, 1);
    LatticeGraph graph = build_lattice(result.concepts, result.evidence);
    std::string xml = export_graphml(graph, ctx);
    CHECK(count_lines_with(xml, "<node ") == 3);
    CHECK(count_lines_with(xml, "<edge ") == 2);
    CHECK(xml.find("<graph ") != std::string::npos);
    CHECK(xml.find("key=\"level\"") != std::string::npos);
    CHECK(xml.find("key=\"extent\"") != std::string::npos);
    CHECK(xml.find("key=\"intent\"") != std::string::npos);
}

TEST_CASE("concepts tsv export") {
    FormalContext ctx = ct::diagonal(3);
    auto result = enumerate_concepts(ctx, 1);
    std::string tsv = export_concepts_tsv(result.concepts, ctx);

    SECTION("bottom line is exact") {
        CHECK(tsv.rfind("1\t{}\t{m1,m2,m3}\n", 0) == 0);
    }
    SECTION("single concept context") {
        FormalContext full = ct::all_crosses(2, 2);
        auto r = enumerate_concepts(full, 1);
        CHECK(export_concepts_tsv(r.concepts, full) == "1\t{g1,g2}\t{m1,m2}\n");
    }
    SECTION("round trip preserves the list") {
        ConceptList parsed = parse_concepts_tsv(ctx, tsv);
        REQUIRE(parsed.size() == result.concepts.size());
        for (std::size_t i = 0; i < parsed.size(); ++i) {
            CHECK(parsed[i].level == result.concepts[i].level);
            CHECK(parsed[i].extent == result.concepts[i].extent);
            CHECK(parsed[i].intent == result.concepts[i].intent);
        }
    }
}

TEST_CASE("transitive closure of lattice edges is the containment order") {
    std::mt19937 rng(73);
    FormalContext ctx = ct::random_context(rng, 8, 8, 0.45);
    auto result = enumerate_concepts(ctx, 1);
    LatticeGraph graph = build_lattice(result.concepts, result.evidence);
    const std::size_t n = graph.vertices.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (auto [a, b] : graph.edges) reach[a][b] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool contained = graph.vertices[i].extent.count() < graph.vertices[j].extent.count() &&
                             graph.vertices[i].extent.is_subset_of(graph.vertices[j].extent);
            CHECK(reach[i][j] == contained);
        }
}
