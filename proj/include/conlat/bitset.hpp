#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace conlat {

/// Fixed-universe bitset over integer ids. The Tag parameter keeps sets of
/// object ids and sets of attribute ids apart at compile time; mixing them
/// is a type error rather than a runtime surprise.
template <class Tag>
class IdSet {
public:
    IdSet() = default;

    explicit IdSet(std::size_t universe)
        : nbits_(universe), words_((universe + 63) / 64, 0) {}

    static IdSet full(std::size_t universe) {
        IdSet s(universe);
        for (auto& w : s.words_) w = ~std::uint64_t{0};
        s.trim();
        return s;
    }

    static IdSet of(std::size_t universe, std::initializer_list<std::size_t> ids) {
        IdSet s(universe);
        for (std::size_t i : ids) s.set(i);
        return s;
    }

    std::size_t universe_size() const { return nbits_; }
    std::size_t word_count() const { return words_.size(); }
    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> mutable_words() { return words_; }

    bool test(std::size_t i) const {
        assert(i < nbits_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i) {
        assert(i < nbits_);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(std::size_t i) {
        assert(i < nbits_);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += std::popcount(w);
        return n;
    }

    bool none() const {
        for (std::uint64_t w : words_) if (w) return false;
        return true;
    }

    bool any() const { return !none(); }

    IdSet& operator&=(const IdSet& o) {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    IdSet& operator|=(const IdSet& o) {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    /// Removes every element of o (set difference).
    IdSet& subtract(const IdSet& o) {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    /// Complement within the universe.
    void flip_all() {
        for (auto& w : words_) w = ~w;
        trim();
    }

    bool is_subset_of(const IdSet& o) const {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const IdSet& o) const {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    friend bool operator==(const IdSet& a, const IdSet& b) {
        return a.nbits_ == b.nbits_ && a.words_ == b.words_;
    }

    /// Orders sets as their ascending id sequences compare lexicographically.
    /// The set owning the lowest differing id sorts first; a set sorts before
    /// any of its proper supersets.
    friend bool lex_less(const IdSet& a, const IdSet& b) {
        assert(a.nbits_ == b.nbits_);
        for (std::size_t i = 0; i < a.words_.size(); ++i) {
            std::uint64_t diff = a.words_[i] ^ b.words_[i];
            if (diff) {
                std::uint64_t low = diff & (~diff + 1);
                return (a.words_[i] & low) != 0;
            }
        }
        return false;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                fn(i * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }

    std::vector<std::uint32_t> ids() const {
        std::vector<std::uint32_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ nbits_);
    }

private:
    void trim() {
        if (nbits_ & 63) words_.back() &= (std::uint64_t{1} << (nbits_ & 63)) - 1;
        if (nbits_ == 0 && !words_.empty()) words_.clear();
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct ObjectTag {};
struct AttributeTag {};

using ObjectSet = IdSet<ObjectTag>;
using AttributeSet = IdSet<AttributeTag>;

template <class Tag>
struct IdSetHash {
    std::size_t operator()(const IdSet<Tag>& s) const { return s.hash(); }
};

} // namespace conlat

template <class Tag>
struct std::hash<conlat::IdSet<Tag>> {
    std::size_t operator()(const conlat::IdSet<Tag>& s) const { return s.hash(); }
};
