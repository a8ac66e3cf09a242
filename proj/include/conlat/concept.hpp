#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "conlat/bitset.hpp"
#include "conlat/context.hpp"
#include "conlat/errors.hpp"

namespace conlat {

/// A formal concept plus the two bookkeeping fields the enumeration needs:
/// the first-canonicity flag and the level (1 for the least concept).
struct FormalConcept {
    ObjectSet extent;
    AttributeSet intent;
    bool is_valid_neighbor = true;
    std::uint32_t level = 1;

    friend bool operator==(const FormalConcept& a, const FormalConcept& b) {
        return a.extent == b.extent && a.intent == b.intent &&
               a.is_valid_neighbor == b.is_valid_neighbor && a.level == b.level;
    }
};

/// One child emitted while expanding a parent, together with the candidate
/// object that generated it.
struct NeighborEmission {
    FormalConcept child;
    std::uint32_t generator;
};

/// All emissions produced from one parent, one per candidate object, in
/// ascending candidate order. Valid-flagged emissions are exactly the
/// parent's upper covers; intents repeat only across flags, never among
/// the valid ones.
struct NeighborBatch {
    std::vector<NeighborEmission> emissions;

    std::vector<FormalConcept> valid_children() const {
        std::vector<FormalConcept> out;
        for (const auto& e : emissions)
            if (e.child.is_valid_neighbor) out.push_back(e.child);
        return out;
    }
};

/// The least concept: extent = down(M), intent = up(extent), level 1.
inline FormalConcept bottom_concept(const FormalContext& ctx) {
    ObjectSet extent = ctx.down(AttributeSet::full(ctx.attribute_count()));
    AttributeSet intent = ctx.up(extent);
    return FormalConcept{std::move(extent), std::move(intent), true, 1};
}

/// True exactly when the extent is all of G.
inline bool is_top(const FormalContext& ctx, const FormalConcept& c) {
    return c.extent.count() == ctx.object_count();
}

/// Generates every upper-neighbor candidate of the parent with the min-set
/// validity test. For each candidate x outside the extent, in ascending id
/// order: B1 = intent ^ x-up, A1 = down(B1); the emission is valid when the
/// min-set meets A1 \ extent \ {x} nowhere, otherwise x leaves the min-set.
/// Children all carry level = parent.level + 1.
inline NeighborBatch upper_neighbors(const FormalContext& ctx, const FormalConcept& parent) {
    if (is_top(ctx, parent)) throw CalledOnTop();

    NeighborBatch batch;
    ObjectSet min_set = parent.extent;
    min_set.flip_all();

    // A1 is a pure function of B1, so close each distinct B1 only once.
    std::unordered_map<AttributeSet, ObjectSet, IdSetHash<AttributeTag>> closed;

    ObjectSet candidates = min_set;
    candidates.for_each([&](std::size_t x) {
        AttributeSet b1 = parent.intent;
        b1 &= ctx.row(x);
        auto it = closed.find(b1);
        if (it == closed.end()) it = closed.emplace(b1, ctx.down(b1)).first;
        const ObjectSet& a1 = it->second;

        ObjectSet blocking = a1;
        blocking.subtract(parent.extent);
        blocking.reset(x);
        blocking &= min_set;

        bool valid = blocking.none();
        if (!valid) min_set.reset(x);
        batch.emissions.push_back(NeighborEmission{
            FormalConcept{a1, std::move(b1), valid, parent.level + 1},
            static_cast<std::uint32_t>(x)});
    });
    return batch;
}

} // namespace conlat
