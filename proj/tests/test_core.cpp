#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "conlat/concept.hpp"
#include "conlat/oracle.hpp"
#include "conlat/seen_cache.hpp"
#include "test_support.hpp"

using namespace conlat;
namespace ct = conlat::test;

namespace {

FormalConcept concept_from_extent(const FormalContext& ctx, const ObjectSet& extent,
                                  std::uint32_t level = 1) {
    AttributeSet intent = ctx.up(extent);
    return FormalConcept{ctx.down(intent), std::move(intent), true, level};
}

} // namespace

TEST_CASE("bottom concept") {
    SECTION("diagonal 3x3: nothing has every attribute") {
        FormalConcept b = bottom_concept(ct::diagonal(3));
        CHECK(b.extent.none());
        CHECK(b.intent == AttributeSet::full(3));
        CHECK(b.level == 1);
        CHECK(b.is_valid_neighbor);
    }
    SECTION("all crosses: bottom equals top") {
        FormalContext ctx = ct::all_crosses(2, 2);
        FormalConcept b = bottom_concept(ctx);
        CHECK(b.extent == ObjectSet::full(2));
        CHECK(b.intent == AttributeSet::full(2));
        CHECK(is_top(ctx, b));
    }
    SECTION("contranominal 3x3") {
        FormalConcept b = bottom_concept(ct::contranominal(3));
        CHECK(b.extent.none());
        CHECK(b.intent == AttributeSet::full(3));
    }
}

TEST_CASE("top detection") {
    FormalContext ctx = ct::diagonal(3);
    CHECK(is_top(ctx, concept_from_extent(ctx, ObjectSet::full(3))));
    CHECK_FALSE(is_top(ctx, concept_from_extent(ctx, ObjectSet::of(3, {0}))));
}

TEST_CASE("upper neighbors of the 3-chain bottom") {
    FormalContext ctx = ct::chain3();
    FormalConcept b = bottom_concept(ctx);
    REQUIRE(b.extent == ObjectSet::of(3, {0}));

    NeighborBatch batch = upper_neighbors(ctx, b);
    REQUIRE(batch.emissions.size() == 2);

    const auto& first = batch.emissions[0];
    CHECK(first.generator == 1);
    CHECK(first.child.is_valid_neighbor);
    CHECK(first.child.extent == ObjectSet::of(3, {0, 1}));
    CHECK(first.child.intent == AttributeSet::of(3, {1, 2}));
    CHECK(first.child.level == 2);

    const auto& second = batch.emissions[1];
    CHECK(second.generator == 2);
    CHECK_FALSE(second.child.is_valid_neighbor);
    CHECK(second.child.extent == ObjectSet::full(3));
    CHECK(second.child.intent == AttributeSet::of(3, {2}));
}

TEST_CASE("upper neighbors of the diagonal bottom are the three atoms") {
    FormalContext ctx = ct::diagonal(3);
    NeighborBatch batch = upper_neighbors(ctx, bottom_concept(ctx));
    REQUIRE(batch.emissions.size() == 3);
    for (const auto& e : batch.emissions) {
        CHECK(e.child.is_valid_neighbor);
        CHECK(e.child.extent == ObjectSet::of(3, {e.generator}));
        CHECK(e.child.intent == AttributeSet::of(3, {e.generator}));
    }
}

TEST_CASE("upper neighbors inside the contranominal lattice") {
    FormalContext ctx = ct::contranominal(3);
    FormalConcept parent = concept_from_extent(ctx, ObjectSet::of(3, {0}), 2);
    REQUIRE(parent.intent == AttributeSet::of(3, {1, 2}));

    NeighborBatch batch = upper_neighbors(ctx, parent);
    auto valid = batch.valid_children();
    REQUIRE(valid.size() == 2);
    std::set<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> got;
    for (const auto& c : valid) got.emplace(c.extent.ids(), c.intent.ids());
    CHECK(got.count({{0, 1}, {2}}) == 1);
    CHECK(got.count({{0, 2}, {1}}) == 1);
}

TEST_CASE("upper neighbors refuses the top concept") {
    FormalContext ctx = ct::diagonal(3);
    CHECK_THROWS_AS(upper_neighbors(ctx, concept_from_extent(ctx, ObjectSet::full(3))),
                    CalledOnTop);
}

TEST_CASE("every emission is a formal concept and grows strictly") {
    std::mt19937 rng(31);
    for (int round = 0; round < 25; ++round) {
        FormalContext ctx = ct::random_context(rng, 9, 8, 0.4);
        auto set = oracle::brute_force_concepts(ctx);
        for (const auto& oc : set.concepts) {
            if (oc.extent.size() == ctx.object_count()) continue;
            ObjectSet extent(ctx.object_count());
            for (int g : oc.extent) extent.set(static_cast<std::size_t>(g));
            FormalConcept parent = concept_from_extent(ctx, extent, 3);

            NeighborBatch batch = upper_neighbors(ctx, parent);
            for (const auto& e : batch.emissions) {
                CHECK(ctx.up(e.child.extent) == e.child.intent);
                CHECK(ctx.down(e.child.intent) == e.child.extent);
                CHECK(parent.extent.is_subset_of(e.child.extent));
                CHECK(parent.extent.count() < e.child.extent.count());
                CHECK(e.child.intent.is_subset_of(parent.intent));
                CHECK(e.child.intent.count() < parent.intent.count());
                CHECK(e.child.level == parent.level + 1);
            }
        }
    }
}

TEST_CASE("valid children are exactly the upper covers") {
    std::mt19937 rng(37);
    auto check_context = [](const FormalContext& ctx) {
        auto set = oracle::brute_force_concepts(ctx);
        auto covers = oracle::brute_force_covers(set);
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (set.concepts[i].extent.size() == ctx.object_count()) continue;
            ObjectSet extent(ctx.object_count());
            for (int g : set.concepts[i].extent) extent.set(static_cast<std::size_t>(g));
            FormalConcept parent{extent, AttributeSet(ctx.attribute_count()), true, 1};
            parent.intent = ctx.up(extent);

            std::set<std::vector<std::uint32_t>> expected;
            for (auto [lo, hi] : covers)
                if (lo == i) {
                    std::vector<std::uint32_t> ids;
                    for (int m : set.concepts[hi].intent)
                        ids.push_back(static_cast<std::uint32_t>(m));
                    expected.insert(ids);
                }

            std::set<std::vector<std::uint32_t>> got;
            for (const auto& c : upper_neighbors(ctx, parent).valid_children())
                got.insert(c.intent.ids());
            CHECK(got == expected);
        }
    };

    check_context(ct::diagonal(4));
    check_context(ct::contranominal(4));
    check_context(ct::chain3());
    for (int round = 0; round < 30; ++round) {
        std::uniform_int_distribution<std::size_t> size(1, 8);
        std::uniform_real_distribution<double> density(0.1, 0.9);
        check_context(ct::random_context(rng, size(rng), size(rng), density(rng)));
    }
}

TEST_CASE("upper neighbors is a pure function of context and parent") {
    std::mt19937 rng(41);
    FormalContext ctx = ct::random_context(rng, 10, 8, 0.35);
    FormalConcept b = bottom_concept(ctx);
    if (is_top(ctx, b)) return;
    NeighborBatch first = upper_neighbors(ctx, b);
    NeighborBatch second = upper_neighbors(ctx, b);
    REQUIRE(first.emissions.size() == second.emissions.size());
    for (std::size_t i = 0; i < first.emissions.size(); ++i) {
        CHECK(first.emissions[i].generator == second.emissions[i].generator);
        CHECK(first.emissions[i].child == second.emissions[i].child);
    }
}

TEST_CASE("seen cache membership is exact set equality") {
    SeenCache cache;
    AttributeSet m23 = AttributeSet::of(4, {1, 2});
    SECTION("everything is canonical against an empty cache") {
        CHECK(cache.is_canonical(m23));
        CHECK(cache.is_canonical(AttributeSet(4)));
    }
    SECTION("recorded intents stop being canonical") {
        CHECK(cache.record(m23));
        CHECK_FALSE(cache.is_canonical(m23));
    }
    SECTION("supersets stay distinct") {
        cache.record(AttributeSet::of(4, {0}));
        CHECK(cache.is_canonical(AttributeSet::of(4, {0, 1})));
    }
}

TEST_CASE("record is insert-if-absent") {
    SeenCache cache;
    AttributeSet intent = AttributeSet::of(3, {0});
    CHECK(cache.record(intent));
    CHECK_FALSE(cache.record(intent));
    CHECK(cache.size() == 1);

    FormalConcept c{ObjectSet(2), AttributeSet::of(3, {1}), true, 1};
    CHECK(cache.record(c));
    CHECK_FALSE(cache.record(c));
}

TEST_CASE("concurrent records of the same intent admit exactly one winner") {
    constexpr int kIntents = 500;
    constexpr int kThreads = 8;
    SeenCache cache;
    std::vector<std::vector<int>> winners(kThreads, std::vector<int>(kIntents, 0));

    std::vector<std::thread> pool;
    for (int t = 0; t < kThreads; ++t) {
        pool.emplace_back([&cache, &winners, t] {
            for (int i = 0; i < kIntents; ++i) {
                AttributeSet intent(32);
                for (int b = 0; b < 16; ++b)
                    if (((i + 1) >> b) & 1) intent.set(static_cast<std::size_t>(b));
                if (cache.record(intent)) winners[t][i] = 1;
            }
        });
    }
    for (auto& th : pool) th.join();

    for (int i = 0; i < kIntents; ++i) {
        int total = 0;
        for (int t = 0; t < kThreads; ++t) total += winners[t][i];
        CHECK(total == 1);
    }
}
