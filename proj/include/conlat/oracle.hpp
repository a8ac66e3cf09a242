#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "conlat/context.hpp"
#include "conlat/errors.hpp"

// Reference implementations used for testing and validation only. They work
// on sorted id vectors instead of bitsets on purpose: a bug shared with the
// bitset engine would have to be two independent bugs.
namespace conlat::oracle {

using IdVec = std::vector<int>;

struct OracleConcept {
    IdVec extent;
    IdVec intent;
    friend bool operator==(const OracleConcept&, const OracleConcept&) = default;
    friend auto operator<=>(const OracleConcept&, const OracleConcept&) = default;
};

/// All concepts of a context, canonically ordered by (extent, intent).
struct OracleConceptSet {
    std::vector<OracleConcept> concepts;
    std::size_t size() const { return concepts.size(); }
};

namespace oracle_detail {

inline std::vector<IdVec> rows_of(const FormalContext& ctx) {
    std::vector<IdVec> rows(ctx.object_count());
    for (std::size_t g = 0; g < ctx.object_count(); ++g)
        for (std::size_t m = 0; m < ctx.attribute_count(); ++m)
            if (ctx.row(g).test(m)) rows[g].push_back(static_cast<int>(m));
    return rows;
}

inline std::vector<IdVec> cols_of(const FormalContext& ctx) {
    std::vector<IdVec> cols(ctx.attribute_count());
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m)
        for (std::size_t g = 0; g < ctx.object_count(); ++g)
            if (ctx.row(g).test(m)) cols[m].push_back(static_cast<int>(g));
    return cols;
}

inline IdVec intersect(const IdVec& a, const IdVec& b) {
    IdVec out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IdVec iota(std::size_t n) {
    IdVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return v;
}

/// Attributes common to the given objects; the full attribute list for
/// an empty object set.
inline IdVec up_of(const std::vector<IdVec>& rows, std::size_t attribute_count,
                   const IdVec& extent) {
    IdVec b = iota(attribute_count);
    for (int g : extent) b = intersect(b, rows[static_cast<std::size_t>(g)]);
    return b;
}

inline IdVec down_of(const std::vector<IdVec>& cols, std::size_t object_count,
                     const IdVec& intent) {
    IdVec a = iota(object_count);
    for (int m : intent) a = intersect(a, cols[static_cast<std::size_t>(m)]);
    return a;
}

inline bool strict_subset(const IdVec& a, const IdVec& b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace oracle_detail

inline constexpr std::size_t kBruteForceGuard = 20;

/// Exhaustively instantiates {(down(up(A)), up(A)) : A subset of G} and
/// deduplicates. Exponential in |G|; refuses anything past the guard.
inline OracleConceptSet brute_force_concepts(const FormalContext& ctx) {
    if (ctx.object_count() > kBruteForceGuard)
        throw TooLarge(ctx.object_count(), kBruteForceGuard);

    auto rows = oracle_detail::rows_of(ctx);
    auto cols = oracle_detail::cols_of(ctx);
    std::set<OracleConcept> seen;
    std::uint32_t limit = std::uint32_t{1} << ctx.object_count();
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        IdVec a;
        for (std::size_t g = 0; g < ctx.object_count(); ++g)
            if (mask & (std::uint32_t{1} << g)) a.push_back(static_cast<int>(g));
        IdVec intent = oracle_detail::up_of(rows, ctx.attribute_count(), a);
        IdVec extent = oracle_detail::down_of(cols, ctx.object_count(), intent);
        seen.insert(OracleConcept{std::move(extent), std::move(intent)});
    }
    OracleConceptSet out;
    out.concepts.assign(seen.begin(), seen.end());
    return out;
}

/// Cover pairs (c, u): extent(c) strictly below extent(u) with no concept
/// strictly between. Indices refer to positions in the given set.
inline std::vector<std::pair<std::size_t, std::size_t>>
brute_force_covers(const OracleConceptSet& concepts) {
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    const auto& cs = concepts.concepts;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = 0; j < cs.size(); ++j) {
            if (!oracle_detail::strict_subset(cs[i].extent, cs[j].extent)) continue;
            bool between = false;
            for (std::size_t k = 0; k < cs.size() && !between; ++k) {
                if (k == i || k == j) continue;
                between = oracle_detail::strict_subset(cs[i].extent, cs[k].extent) &&
                          oracle_detail::strict_subset(cs[k].extent, cs[j].extent);
            }
            if (!between) covers.emplace_back(i, j);
        }
    }
    return covers;
}

/// True when a precedes b in the lectic order with ascending attribute ids
/// as the base order: the smallest id on which the sets differ belongs to b.
inline bool lectic_less(const IdVec& a, const IdVec& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) { ++i; ++j; continue; }
        return a[i] > b[j];
    }
    return j < b.size();
}

/// Ganter's NextClosure: every intent exactly once, in lectic order.
inline std::vector<IdVec> next_closure(const FormalContext& ctx) {
    auto rows = oracle_detail::rows_of(ctx);
    auto cols = oracle_detail::cols_of(ctx);
    std::size_t m_count = ctx.attribute_count();

    auto closure = [&](const IdVec& b) {
        IdVec extent = oracle_detail::down_of(cols, ctx.object_count(), b);
        return oracle_detail::up_of(rows, m_count, extent);
    };

    std::vector<IdVec> intents;
    IdVec b = closure({});
    intents.push_back(b);
    IdVec all = oracle_detail::iota(m_count);
    while (b != all) {
        bool advanced = false;
        for (int m = static_cast<int>(m_count) - 1; m >= 0; --m) {
            if (std::binary_search(b.begin(), b.end(), m)) continue;
            IdVec seed;
            for (int x : b)
                if (x < m) seed.push_back(x);
            seed.push_back(m);
            IdVec d = closure(seed);
            // accept when the closure adds nothing below m
            bool canonical = true;
            for (int x : d) {
                if (x >= m) break;
                if (!std::binary_search(b.begin(), b.end(), x)) { canonical = false; break; }
            }
            if (canonical) {
                b = std::move(d);
                intents.push_back(b);
                advanced = true;
                break;
            }
        }
        if (!advanced) break; // unreachable for a well-formed context
    }
    return intents;
}

/// Shortest cover-chain distance from the bottom concept to every concept,
/// by BFS over the cover graph. The bottom sits at level 1.
inline std::vector<std::size_t> cover_bfs_levels(
    const OracleConceptSet& concepts,
    const std::vector<std::pair<std::size_t, std::size_t>>& covers) {
    const auto& cs = concepts.concepts;
    std::vector<std::vector<std::size_t>> above(cs.size());
    for (auto [lo, hi] : covers) above[lo].push_back(hi);

    std::size_t bottom = 0;
    for (std::size_t i = 1; i < cs.size(); ++i)
        if (cs[i].extent.size() < cs[bottom].extent.size()) bottom = i;

    std::vector<std::size_t> level(cs.size(), 0);
    level[bottom] = 1;
    std::vector<std::size_t> frontier{bottom};
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t v : frontier)
            for (std::size_t u : above[v])
                if (level[u] == 0) {
                    level[u] = level[v] + 1;
                    next.push_back(u);
                }
        frontier = std::move(next);
    }
    return level;
}

} // namespace conlat::oracle
