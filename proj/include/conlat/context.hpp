#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "conlat/bitset.hpp"
#include "conlat/errors.hpp"

namespace conlat {

/// Immutable binary incidence between named objects and named attributes.
/// Both the row index (attributes per object) and the column index (objects
/// per attribute) are materialized on construction, so the derivation
/// operators are pure bitset folds. Names live only at the I/O boundary;
/// every operation works on integer ids.
class FormalContext {
public:
    FormalContext() = default;

    FormalContext(std::vector<std::string> objects,
                  std::vector<std::string> attributes,
                  std::vector<AttributeSet> rows)
        : objects_(std::move(objects)),
          attributes_(std::move(attributes)),
          rows_(std::move(rows)) {
        if (rows_.size() != objects_.size())
            throw Error("row count does not match object count");
        check_names(objects_);
        check_names(attributes_);
        cols_.assign(attributes_.size(), ObjectSet(objects_.size()));
        for (std::size_t g = 0; g < rows_.size(); ++g) {
            if (rows_[g].universe_size() != attributes_.size())
                throw Error("row universe does not match attribute count");
            rows_[g].for_each([&](std::size_t m) { cols_[m].set(g); });
        }
        if (attributes_.size() <= 64) {
            packed_rows_.reserve(rows_.size());
            for (const auto& r : rows_)
                packed_rows_.push_back(r.word_count() ? r.words()[0] : 0);
        }
    }

    std::size_t object_count() const { return objects_.size(); }
    std::size_t attribute_count() const { return attributes_.size(); }

    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& attributes() const { return attributes_; }
    const std::string& object_name(std::size_t g) const { return objects_.at(g); }
    const std::string& attribute_name(std::size_t m) const { return attributes_.at(m); }

    const AttributeSet& row(std::size_t g) const { return rows_.at(g); }
    const ObjectSet& col(std::size_t m) const { return cols_.at(m); }

    /// Rows packed into single words; only populated when |M| <= 64.
    std::span<const std::uint64_t> packed_rows() const { return packed_rows_; }

    /// A^up: attributes common to every object in A. up(empty) = M.
    AttributeSet up(const ObjectSet& a) const {
        AttributeSet r = AttributeSet::full(attribute_count());
        a.for_each([&](std::size_t g) { r &= rows_[g]; });
        return r;
    }

    /// B^down: objects sharing every attribute in B. down(empty) = G.
    ObjectSet down(const AttributeSet& b) const {
        ObjectSet r = ObjectSet::full(object_count());
        b.for_each([&](std::size_t m) { r &= cols_[m]; });
        return r;
    }

    /// up(down(B)); B is an intent exactly when this is a fixed point.
    AttributeSet closure_intent(const AttributeSet& b) const { return up(down(b)); }

    /// x^up for a single object.
    const AttributeSet& object_forming(std::size_t x) const {
        if (x >= rows_.size()) throw BadId(x);
        return rows_[x];
    }

    /// Named alias of down: all objects sharing the attributes of B.
    ObjectSet attribute_forming(const AttributeSet& b) const { return down(b); }

    friend bool operator==(const FormalContext& a, const FormalContext& b) {
        return a.objects_ == b.objects_ && a.attributes_ == b.attributes_ &&
               a.rows_ == b.rows_;
    }

private:
    static void check_names(const std::vector<std::string>& names) {
        std::unordered_set<std::string> seen;
        for (const auto& n : names) {
            if (n.empty()) throw Error("empty name");
            if (!seen.insert(n).second) throw Error("duplicate name: " + n);
        }
    }

    std::vector<std::string> objects_;
    std::vector<std::string> attributes_;
    std::vector<AttributeSet> rows_;
    std::vector<ObjectSet> cols_;
    std::vector<std::uint64_t> packed_rows_;
};

} // namespace conlat
