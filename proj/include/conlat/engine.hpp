#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "conlat/concept.hpp"
#include "conlat/context.hpp"
#include "conlat/seen_cache.hpp"

namespace conlat {

using ConceptList = std::vector<FormalConcept>;

/// Parent-to-child cover pairs recorded during expansion, as (lower, upper)
/// index pairs into the concept list they were produced with. Deduplicated
/// and sorted.
struct EdgeEvidence {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
};

struct IterationStats {
    std::uint32_t level = 0;
    std::uint64_t new_concepts = 0;
    double ms = 0.0;

    friend bool operator==(const IterationStats&, const IterationStats&) = default;
};

struct RunStats {
    unsigned workers = 1;
    std::uint32_t iterations = 0;
    std::uint64_t total_concepts = 0;
    std::uint64_t total_edges = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t peak_frontier = 0;
    double total_ms = 0.0;
    std::vector<IterationStats> per_iteration;

    friend bool operator==(const RunStats&, const RunStats&) = default;
};

struct EnumerationResult {
    ConceptList concepts;
    EdgeEvidence evidence;
    RunStats stats;
};

namespace engine_detail {

/// Per-worker reusable buffers. The key table is an epoch-stamped open
/// addressing set, so deduplicating one parent's candidate keys needs no
/// clearing between parents. Cache-line aligned: workers write their
/// scratch headers constantly and must not share lines.
struct alignas(64) ExpandScratch {
    std::vector<std::uint64_t> table_keys;
    std::vector<std::uint64_t> table_epochs;
    std::vector<std::uint64_t> distinct;
    std::vector<std::uint64_t> ordered;
    std::vector<std::uint64_t> maximal;
    std::uint64_t epoch = 0;
    unsigned table_log2 = 0;
    ObjectSet closure;
    ObjectSet all_objects;

    void reset_table(unsigned log2) {
        table_log2 = log2;
        table_keys.assign(std::size_t{1} << log2, 0);
        table_epochs.assign(std::size_t{1} << log2, 0);
        epoch = 0;
    }

    bool insert(std::uint64_t key) {
        const std::size_t mask = (std::size_t{1} << table_log2) - 1;
        std::size_t i = static_cast<std::size_t>(
            (key * 0x9E3779B97F4A7C15ull) >> (64 - table_log2));
        while (table_epochs[i] == epoch) {
            if (table_keys[i] == key) return false;
            i = (i + 1) & mask;
        }
        table_epochs[i] = epoch;
        table_keys[i] = key;
        return true;
    }

    void grow_if_crowded() {
        if (distinct.size() * 2 < table_keys.size()) return;
        reset_table(table_log2 + 1);
        epoch = 1;
        for (std::uint64_t k : distinct) insert(k);
    }
};

/// Computes down(B1) into scratch.closure, where B1 is given as a single
/// word (|M| <= 64).
inline void down_from_word(const FormalContext& ctx, std::uint64_t b1,
                           ExpandScratch& scratch) {
    scratch.closure = scratch.all_objects;
    auto words = scratch.closure.mutable_words();
    std::uint64_t rest = b1;
    while (rest) {
        const std::size_t m = static_cast<std::size_t>(std::countr_zero(rest));
        rest &= rest - 1;
        auto col = ctx.col(m).words();
        for (std::size_t i = 0; i < words.size(); ++i) words[i] &= col[i];
    }
}

// The upper covers of (A, B) are exactly the maximal elements of
// {B ^ row(x) : x outside A}: any candidate key strictly containing B1
// witnesses a concept strictly between (A, B) and (down(B1), B1), and for a
// cover every object of its extent outside A carries the cover's intent as
// its key. Cover extents are then down(B1) over the few surviving keys.

/// Emits every upper cover (A1, B1) of the parent exactly once.
/// Fast path for contexts with at most 64 attributes.
template <class Sink>
void expand_covers_small_m(const FormalContext& ctx, const FormalConcept& parent,
                           ExpandScratch& scratch, Sink&& sink) {
    const std::size_t m_count = ctx.attribute_count();
    const std::size_t g_count = ctx.object_count();
    const std::uint64_t intent_w =
        parent.intent.word_count() ? parent.intent.words()[0] : 0;
    const auto packed = ctx.packed_rows();

    if (scratch.table_log2 == 0) scratch.reset_table(10);
    ++scratch.epoch;
    auto& distinct = scratch.distinct;
    distinct.clear();

    const auto ext_words = parent.extent.words();
    for (std::size_t wi = 0; wi < ext_words.size(); ++wi) {
        std::uint64_t w = ~ext_words[wi];
        if (wi + 1 == ext_words.size() && (g_count & 63))
            w &= (std::uint64_t{1} << (g_count & 63)) - 1;
        while (w) {
            const std::size_t x = wi * 64 + std::countr_zero(w);
            w &= w - 1;
            const std::uint64_t key = packed[x] & intent_w;
            if (scratch.insert(key)) {
                distinct.push_back(key);
                scratch.grow_if_crowded();
            }
        }
    }
    if (distinct.empty()) return;

    // order by popcount descending so supersets are seen first
    auto& ordered = scratch.ordered;
    ordered.resize(distinct.size());
    std::uint32_t counts[65] = {};
    for (std::uint64_t k : distinct) ++counts[std::popcount(k)];
    std::uint32_t offsets[65];
    std::uint32_t sum = 0;
    for (int pc = 64; pc >= 0; --pc) {
        offsets[pc] = sum;
        sum += counts[pc];
    }
    for (std::uint64_t k : distinct) ordered[offsets[std::popcount(k)]++] = k;

    if (scratch.all_objects.universe_size() != g_count)
        scratch.all_objects = ObjectSet::full(g_count);

    auto& maximal = scratch.maximal;
    maximal.clear();
    for (std::uint64_t key : ordered) {
        bool covered = false;
        for (std::uint64_t m : maximal) {
            if ((key & ~m) == 0) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        maximal.push_back(key);

        down_from_word(ctx, key, scratch);
        AttributeSet intent(m_count);
        if (intent.word_count()) intent.mutable_words()[0] = key;
        sink(scratch.closure, std::move(intent));
    }
}

/// Same contract as expand_covers_small_m without the 64-attribute bound.
template <class Sink>
void expand_covers_general(const FormalContext& ctx, const FormalConcept& parent,
                           Sink&& sink) {
    std::unordered_map<AttributeSet, bool> seen;
    std::vector<AttributeSet> distinct;
    ObjectSet candidates = parent.extent;
    candidates.flip_all();
    candidates.for_each([&](std::size_t x) {
        AttributeSet b1 = parent.intent;
        b1 &= ctx.row(x);
        if (seen.emplace(b1, true).second) distinct.push_back(std::move(b1));
    });
    std::stable_sort(distinct.begin(), distinct.end(),
                     [](const AttributeSet& a, const AttributeSet& b) {
                         return a.count() > b.count();
                     });
    std::vector<const AttributeSet*> maximal;
    for (const AttributeSet& key : distinct) {
        bool covered = false;
        for (const AttributeSet* m : maximal) {
            if (key.is_subset_of(*m)) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        maximal.push_back(&key);
        ObjectSet a1 = ctx.down(key);
        sink(a1, AttributeSet(key));
    }
}

template <class Sink>
void expand_covers(const FormalContext& ctx, const FormalConcept& parent,
                   ExpandScratch& scratch, Sink&& sink) {
    if (ctx.attribute_count() <= 64)
        expand_covers_small_m(ctx, parent, scratch, sink);
    else
        expand_covers_general(ctx, parent, sink);
}

inline std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t n,
                                                        std::size_t parts,
                                                        std::size_t part) {
    const std::size_t base = n / parts;
    const std::size_t rem = n % parts;
    const std::size_t lo = part * base + std::min(part, rem);
    return {lo, lo + base + (part < rem ? 1 : 0)};
}

} // namespace engine_detail

/// Level-synchronous enumeration of all formal concepts. Starts from the
/// bottom concept and repeatedly expands the frontier of newly recorded
/// concepts across the given number of workers; a concept joins the next
/// frontier exactly when its intent enters the seen cache for the first
/// time, so every concept is expanded once. Returns the concepts sorted by
/// (level, intent), the cover-edge evidence recorded during expansion, and
/// run statistics.
inline EnumerationResult enumerate_concepts(const FormalContext& ctx, unsigned workers = 1) {
    using clock = std::chrono::steady_clock;
    const auto run_start = clock::now();
    if (workers < 1) workers = 1;

    SeenCache cache;
    ConceptList by_id;
    FormalConcept bottom = bottom_concept(ctx);
    cache.record_with_id(bottom.intent);
    by_id.push_back(std::move(bottom));

    std::vector<std::uint32_t> frontier{0};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::size_t> frontier_sizes{1};
    std::vector<double> iteration_ms;
    std::uint64_t cache_hits = 0;

    struct alignas(64) WorkerOut {
        std::vector<std::pair<std::uint32_t, FormalConcept>> fresh;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        std::uint64_t hits = 0;
    };
    std::vector<engine_detail::ExpandScratch> scratch(workers);

    std::uint32_t level = 1;
    while (!frontier.empty()) {
        const auto iter_start = clock::now();
        const std::size_t threads = std::min<std::size_t>(workers, frontier.size());
        std::vector<WorkerOut> outs(threads);

        auto work = [&](std::size_t t) {
            auto [lo, hi] = engine_detail::chunk_bounds(frontier.size(), threads, t);
            WorkerOut& out = outs[t];
            for (std::size_t i = lo; i < hi; ++i) {
                const std::uint32_t gid = frontier[i];
                const FormalConcept& parent = by_id[gid];
                if (is_top(ctx, parent)) continue;
                engine_detail::expand_covers(
                    ctx, parent, scratch[t],
                    [&](const ObjectSet& a1, AttributeSet&& b1) {
                        auto [fresh, cid] = cache.record_with_id(b1);
                        out.edges.emplace_back(gid, cid);
                        if (fresh) {
                            out.fresh.emplace_back(
                                cid, FormalConcept{a1, std::move(b1), true,
                                                   parent.level + 1});
                        } else {
                            ++out.hits;
                        }
                    });
            }
        };

        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(threads - 1);
            for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work, t);
            work(0);
            for (auto& th : pool) th.join();
        }

        // barrier reached: merge worker buffers in worker order
        std::vector<std::uint32_t> next;
        by_id.resize(cache.size());
        for (auto& out : outs) {
            for (auto& [cid, c] : out.fresh) {
                by_id[cid] = std::move(c);
                next.push_back(cid);
            }
            edges.insert(edges.end(), out.edges.begin(), out.edges.end());
            cache_hits += out.hits;
        }

        iteration_ms.push_back(
            std::chrono::duration<double, std::milli>(clock::now() - iter_start).count());
        if (!next.empty()) {
            frontier_sizes.push_back(next.size());
            ++level;
        }
        frontier = std::move(next);
    }

    // sort by (level, intent) and renumber; the evidence follows the permutation
    std::vector<std::uint32_t> order(by_id.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (by_id[a].level != by_id[b].level) return by_id[a].level < by_id[b].level;
        return lex_less(by_id[a].intent, by_id[b].intent);
    });
    std::vector<std::uint32_t> new_id(by_id.size());
    for (std::uint32_t pos = 0; pos < order.size(); ++pos) new_id[order[pos]] = pos;

    EnumerationResult result;
    result.concepts.reserve(by_id.size());
    for (std::uint32_t old : order) result.concepts.push_back(std::move(by_id[old]));
    result.evidence.pairs.reserve(edges.size());
    for (auto [p, c] : edges)
        result.evidence.pairs.emplace_back(new_id[p], new_id[c]);
    std::sort(result.evidence.pairs.begin(), result.evidence.pairs.end());
    result.evidence.pairs.erase(
        std::unique(result.evidence.pairs.begin(), result.evidence.pairs.end()),
        result.evidence.pairs.end());

    RunStats& stats = result.stats;
    stats.workers = workers;
    stats.iterations = level;
    stats.total_concepts = result.concepts.size();
    stats.total_edges = result.evidence.pairs.size();
    stats.cache_hits = cache_hits;
    stats.peak_frontier = *std::max_element(frontier_sizes.begin(), frontier_sizes.end());
    for (std::size_t k = 0; k < frontier_sizes.size(); ++k) {
        stats.per_iteration.push_back(IterationStats{
            static_cast<std::uint32_t>(k + 1), frontier_sizes[k], iteration_ms[k]});
    }
    stats.total_ms =
        std::chrono::duration<double, std::milli>(clock::now() - run_start).count();
    return result;
}

/// Machine-readable form of RunStats; round-trips through parse_stats.
inline nlohmann::json stats_report(const RunStats& stats) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& it : stats.per_iteration)
        per.push_back({{"level", it.level},
                       {"new_concepts", it.new_concepts},
                       {"ms", it.ms}});
    return nlohmann::json{{"workers", stats.workers},
                          {"iterations", stats.iterations},
                          {"total_concepts", stats.total_concepts},
                          {"total_edges", stats.total_edges},
                          {"cache_hits", stats.cache_hits},
                          {"peak_frontier", stats.peak_frontier},
                          {"total_ms", stats.total_ms},
                          {"per_iteration", per}};
}

inline RunStats parse_stats(const nlohmann::json& j) {
    RunStats s;
    s.workers = j.at("workers").get<unsigned>();
    s.iterations = j.at("iterations").get<std::uint32_t>();
    s.total_concepts = j.at("total_concepts").get<std::uint64_t>();
    s.total_edges = j.at("total_edges").get<std::uint64_t>();
    s.cache_hits = j.at("cache_hits").get<std::uint64_t>();
    s.peak_frontier = j.at("peak_frontier").get<std::uint64_t>();
    s.total_ms = j.at("total_ms").get<double>();
    for (const auto& it : j.at("per_iteration")) {
        s.per_iteration.push_back(IterationStats{it.at("level").get<std::uint32_t>(),
                                                 it.at("new_concepts").get<std::uint64_t>(),
                                                 it.at("ms").get<double>()});
    }
    return s;
}

} // namespace conlat
