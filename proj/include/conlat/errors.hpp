#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conlat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Object name appears on more than one input line.
struct DuplicateObject : Error {
    explicit DuplicateObject(std::string name)
        : Error("duplicate object name: " + name), object(std::move(name)) {}
    std::string object;
};

/// Input line that cannot be tokenized (empty object or attribute token).
struct MalformedLine : Error {
    explicit MalformedLine(std::size_t line_number)
        : Error("malformed line " + std::to_string(line_number)), line(line_number) {}
    std::size_t line;
};

/// .cxt stream does not start with the "B" header.
struct BadMagic : Error {
    BadMagic() : Error("cxt header is not \"B\"") {}
};

/// .cxt declared dimensions disagree with the body.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(std::string what) : Error("cxt: " + std::move(what)) {}
};

/// Object or attribute id outside the context.
struct BadId : Error {
    explicit BadId(std::size_t id)
        : Error("id out of range: " + std::to_string(id)) {}
};

/// Upper-neighbor generation requested for the greatest concept.
struct CalledOnTop : Error {
    CalledOnTop() : Error("upper_neighbors called on the top concept") {}
};

/// Brute-force oracle refused an input beyond its exponential guard.
struct TooLarge : Error {
    explicit TooLarge(std::size_t objects, std::size_t guard)
        : Error("context has " + std::to_string(objects) +
                " objects; the brute-force oracle is limited to " +
                std::to_string(guard)) {}
};

/// Edge evidence refers to a concept that is not in the concept list.
struct DanglingEdge : Error {
    explicit DanglingEdge(std::size_t index)
        : Error("edge evidence references unknown concept " + std::to_string(index)) {}
};

} // namespace conlat
