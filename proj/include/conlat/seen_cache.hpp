#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <utility>

#include "conlat/bitset.hpp"
#include "conlat/concept.hpp"

namespace conlat {

/// The persisted-concepts cache behind the second canonicity step: a sharded
/// concurrent set of canonical intents. record is a linearizable
/// insert-if-absent (entries are never removed during a run); is_canonical is
/// a pure membership query and may race with inserts, which is tolerated
/// because record is the authoritative gate. Each newly recorded intent also
/// receives a dense id, which the engine uses to address concepts.
class SeenCache {
public:
    SeenCache() : shards_(std::make_unique<Shard[]>(kShards)) {}

    /// True iff the intent has not been recorded. Does not insert.
    bool is_canonical(const AttributeSet& intent) const {
        const Shard& s = shard_of(intent);
        std::shared_lock lock(s.mutex);
        return s.entries.find(intent) == s.entries.end();
    }

    /// Inserts the intent if absent. Returns true exactly when this call
    /// performed the insert.
    bool record(const AttributeSet& intent) { return record_with_id(intent).first; }

    bool record(const FormalConcept& c) { return record(c.intent); }

    /// Like record, but also reports the dense id the intent is filed under.
    std::pair<bool, std::uint32_t> record_with_id(const AttributeSet& intent) {
        Shard& s = shard_of(intent);
        std::unique_lock lock(s.mutex);
        auto it = s.entries.find(intent);
        if (it != s.entries.end()) return {false, it->second};
        std::uint32_t id = next_id_.fetch_add(1, std::memory_order_relaxed);
        s.entries.emplace(intent, id);
        return {true, id};
    }

    std::size_t size() const { return next_id_.load(std::memory_order_relaxed); }

private:
    static constexpr std::size_t kShards = 256;

    struct alignas(64) Shard {
        mutable std::shared_mutex mutex;
        std::unordered_map<AttributeSet, std::uint32_t> entries;
    };

    Shard& shard_of(const AttributeSet& intent) const {
        return shards_[intent.hash() % kShards];
    }

    std::unique_ptr<Shard[]> shards_;
    std::atomic<std::uint32_t> next_id_{0};
};

} // namespace conlat
