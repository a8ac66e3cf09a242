#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "conlat/engine.hpp"
#include "conlat/errors.hpp"
#include "conlat/io.hpp"
#include "conlat/lattice.hpp"
#include "conlat/oracle.hpp"

namespace conlat::cli {

enum class InputFormat { objlist, cxt };

struct RunConfig {
    std::string input_path;
    InputFormat format = InputFormat::objlist;
    char separator = ',';
    unsigned workers = 0; // 0 = logical CPU count
    std::string out_path;
    std::string dot_path;
    std::string graphml_path;
    std::string stats_path;
    LabelMode labels = LabelMode::full;
    std::vector<unsigned> bench_workers{1, 2, 4, 8};
    unsigned repeat = 5;
};

namespace cli_detail {

inline unsigned effective_workers(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

inline FormalContext load_context(const RunConfig& cfg) {
    std::ifstream in(cfg.input_path);
    if (!in) throw Error("cannot open input file: " + cfg.input_path);
    return cfg.format == InputFormat::cxt ? parse_cxt(in)
                                          : parse_object_list(in, cfg.separator);
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
}

} // namespace cli_detail

/// Enumerates all concepts, writes the TSV and stats outputs, and reports
/// the totals on stdout.
inline int cmd_concepts(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        FormalContext ctx = cli_detail::load_context(cfg);
        auto result = enumerate_concepts(ctx, cli_detail::effective_workers(cfg));
        if (!cfg.out_path.empty())
            cli_detail::write_file(cfg.out_path, export_concepts_tsv(result.concepts, ctx));
        if (!cfg.stats_path.empty())
            cli_detail::write_file(cfg.stats_path, stats_report(result.stats).dump(2) + "\n");
        out << result.stats.total_concepts << " concepts, " << result.stats.iterations
            << " iterations\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

/// Enumerates, builds the cover digraph, and writes DOT (stdout when no
/// path is given) plus optional GraphML and TSV outputs.
inline int cmd_lattice(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        FormalContext ctx = cli_detail::load_context(cfg);
        auto result = enumerate_concepts(ctx, cli_detail::effective_workers(cfg));
        LatticeGraph graph = build_lattice(result.concepts, result.evidence);
        std::string dot = export_dot(graph, ctx, cfg.labels);
        if (cfg.dot_path.empty()) out << dot;
        else cli_detail::write_file(cfg.dot_path, dot);
        if (!cfg.graphml_path.empty())
            cli_detail::write_file(cfg.graphml_path, export_graphml(graph, ctx));
        if (!cfg.out_path.empty())
            cli_detail::write_file(cfg.out_path, export_concepts_tsv(result.concepts, ctx));
        if (!cfg.stats_path.empty())
            cli_detail::write_file(cfg.stats_path, stats_report(result.stats).dump(2) + "\n");
        err << graph.vertices.size() << " vertices, " << graph.edges.size() << " edges\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

/// Compares an enumeration result against the independent oracles and prints
/// one PASS/FAIL line per check. Split out so the reporting path can be
/// exercised on tampered results.
inline int report_validation(const EnumerationResult& result, const FormalContext& ctx,
                             std::ostream& out) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& name) {
        out << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    auto oracle_set = oracle::brute_force_concepts(ctx);
    auto oracle_covers = oracle::brute_force_covers(oracle_set);

    std::vector<oracle::OracleConcept> engine_pairs;
    for (const auto& c : result.concepts) {
        oracle::IdVec e, i;
        c.extent.for_each([&](std::size_t g) { e.push_back(static_cast<int>(g)); });
        c.intent.for_each([&](std::size_t m) { i.push_back(static_cast<int>(m)); });
        engine_pairs.push_back(oracle::OracleConcept{std::move(e), std::move(i)});
    }
    std::sort(engine_pairs.begin(), engine_pairs.end());
    check(engine_pairs == oracle_set.concepts,
          "concept set matches brute-force enumeration (" +
              std::to_string(oracle_set.size()) + " concepts)");

    LatticeGraph graph = build_lattice(result.concepts, result.evidence);
    std::vector<std::pair<oracle::IdVec, oracle::IdVec>> expected, actual;
    for (auto [i, j] : oracle_covers)
        expected.emplace_back(oracle_set.concepts[i].extent, oracle_set.concepts[j].extent);
    for (auto [a, b] : graph.edges) {
        oracle::IdVec lo, hi;
        graph.vertices[a].extent.for_each([&](std::size_t g) { lo.push_back(static_cast<int>(g)); });
        graph.vertices[b].extent.for_each([&](std::size_t g) { hi.push_back(static_cast<int>(g)); });
        actual.emplace_back(std::move(lo), std::move(hi));
    }
    std::sort(expected.begin(), expected.end());
    std::sort(actual.begin(), actual.end());
    check(expected == actual, "cover edges match brute-force covers (" +
                                  std::to_string(expected.size()) + " edges)");

    auto lectic = oracle::next_closure(ctx);
    std::vector<oracle::IdVec> engine_intents;
    for (const auto& c : engine_pairs) engine_intents.push_back(c.intent);
    std::vector<oracle::IdVec> lectic_sorted = lectic;
    std::sort(lectic_sorted.begin(), lectic_sorted.end());
    std::sort(engine_intents.begin(), engine_intents.end());
    check(lectic_sorted == engine_intents, "intent set matches NextClosure");

    auto levels = oracle::cover_bfs_levels(oracle_set, oracle_covers);
    std::size_t height = 0;
    for (auto l : levels) height = std::max(height, l);
    check(result.stats.iterations == height,
          "iterations equal oracle lattice height (" + std::to_string(height) + ")");

    ValidationReport report = validate_lattice(graph, ctx);
    for (const auto& v : report.violations) out << "  violation: " << v << "\n";
    check(report.ok(), "lattice structural validation");

    return failures == 0 ? 0 : 1;
}

/// Runs the engine and the oracles on the same input and cross-checks them.
/// Exit status 0 only when every check passes.
inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        FormalContext ctx = cli_detail::load_context(cfg);
        if (ctx.object_count() > oracle::kBruteForceGuard) {
            err << "error: context has " << ctx.object_count()
                << " objects; validate uses an exhaustive oracle and accepts at most "
                << oracle::kBruteForceGuard
                << ". Use the concepts/lattice commands for large inputs.\n";
            return 2;
        }
        auto result = enumerate_concepts(ctx, cli_detail::effective_workers(cfg));
        return report_validation(result, ctx, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

struct BenchRow {
    unsigned workers = 0;
    unsigned repeats = 0;
    double min_ms = 0.0;
    double mean_ms = 0.0;
    double max_ms = 0.0;
    std::uint32_t iterations = 0;
    std::uint64_t concepts = 0;
};

/// Repeats the enumeration for every requested worker count and aggregates
/// wall times over the repeats, the same averaging protocol the benchmark
/// tables use.
inline std::vector<BenchRow> run_bench(const FormalContext& ctx,
                                       const std::vector<unsigned>& worker_counts,
                                       unsigned repeat) {
    std::vector<BenchRow> rows;
    for (unsigned w : worker_counts) {
        BenchRow row;
        row.workers = w;
        row.repeats = repeat;
        double sum = 0.0;
        for (unsigned r = 0; r < repeat; ++r) {
            auto result = enumerate_concepts(ctx, w);
            double ms = result.stats.total_ms;
            if (r == 0 || ms < row.min_ms) row.min_ms = ms;
            if (r == 0 || ms > row.max_ms) row.max_ms = ms;
            sum += ms;
            row.iterations = result.stats.iterations;
            row.concepts = result.stats.total_concepts;
        }
        row.mean_ms = sum / repeat;
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json bench_table(const std::vector<BenchRow>& rows) {
    nlohmann::json table = nlohmann::json::object();
    for (const auto& r : rows) {
        table[std::to_string(r.workers)] = {
            {"repeats", r.repeats},   {"min_ms", r.min_ms},
            {"mean_ms", r.mean_ms},   {"max_ms", r.max_ms},
            {"iterations", r.iterations}, {"concepts", r.concepts}};
    }
    return table;
}

inline int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        FormalContext ctx = cli_detail::load_context(cfg);
        auto rows = run_bench(ctx, cfg.bench_workers, std::max(1u, cfg.repeat));

        out << std::left << std::setw(9) << "workers" << std::setw(7) << "runs"
            << std::setw(12) << "min_ms" << std::setw(12) << "mean_ms" << std::setw(12)
            << "max_ms" << std::setw(12) << "iterations" << "concepts\n";
        for (const auto& r : rows) {
            out << std::left << std::setw(9) << r.workers << std::setw(7) << r.repeats
                << std::setw(12) << std::fixed << std::setprecision(2) << r.min_ms
                << std::setw(12) << r.mean_ms << std::setw(12) << r.max_ms
                << std::setw(12) << r.iterations << r.concepts << "\n";
        }
        std::string table = bench_table(rows).dump(2) + "\n";
        if (!cfg.stats_path.empty()) cli_detail::write_file(cfg.stats_path, table);
        else out << table;
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace conlat::cli
