#pragma once

#include <cctype>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "conlat/context.hpp"
#include "conlat/errors.hpp"

namespace conlat {

namespace io_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return lines;
}

inline std::string read_all(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace io_detail

/// Parses the object-list format: one object per non-blank line, the head
/// token names the object, the tail tokens are its attributes. The attribute
/// universe is the union of all attribute tokens in first-appearance order.
inline FormalContext parse_object_list(std::string_view text, char separator = ',') {
    std::vector<std::string> objects;
    std::vector<std::string> attributes;
    std::unordered_map<std::string, std::size_t> object_ids;
    std::unordered_map<std::string, std::size_t> attribute_ids;
    // attribute id sets per object, resolved to bitsets once the universe is known
    std::vector<std::vector<std::size_t>> row_ids;

    auto lines = io_detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = lines[ln];
        if (io_detail::trim(line).empty()) continue;

        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (true) {
            std::size_t sep = line.find(separator, pos);
            std::string_view raw = (sep == std::string_view::npos)
                                       ? line.substr(pos)
                                       : line.substr(pos, sep - pos);
            tokens.push_back(io_detail::trim(raw));
            if (sep == std::string_view::npos) break;
            pos = sep + 1;
        }

        if (tokens[0].empty()) throw MalformedLine(ln + 1);
        std::string obj(tokens[0]);
        if (object_ids.count(obj)) throw DuplicateObject(obj);

        std::vector<std::size_t> attrs;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            if (tokens[t].empty()) throw MalformedLine(ln + 1);
            std::string attr(tokens[t]);
            auto it = attribute_ids.find(attr);
            std::size_t id;
            if (it == attribute_ids.end()) {
                id = attributes.size();
                attribute_ids.emplace(attr, id);
                attributes.push_back(std::move(attr));
            } else {
                id = it->second;
            }
            attrs.push_back(id);
        }

        object_ids.emplace(obj, objects.size());
        objects.push_back(std::move(obj));
        row_ids.push_back(std::move(attrs));
    }

    std::vector<AttributeSet> rows;
    rows.reserve(objects.size());
    for (const auto& ids : row_ids) {
        AttributeSet r(attributes.size());
        for (std::size_t m : ids) r.set(m);
        rows.push_back(std::move(r));
    }
    return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

inline FormalContext parse_object_list(std::istream& in, char separator = ',') {
    return parse_object_list(io_detail::read_all(in), separator);
}

/// Inverse of parse_object_list. Attributes are listed per object in id
/// order, so the output re-parses to an identical context whenever the
/// context's attribute order is its own first-appearance order.
inline std::string serialize_object_list(const FormalContext& ctx, char separator = ',') {
    for (const auto& n : ctx.objects())
        if (n.find(separator) != std::string::npos)
            throw Error("object name contains the separator: " + n);
    for (const auto& n : ctx.attributes())
        if (n.find(separator) != std::string::npos)
            throw Error("attribute name contains the separator: " + n);

    std::string out;
    for (std::size_t g = 0; g < ctx.object_count(); ++g) {
        out += ctx.object_name(g);
        ctx.row(g).for_each([&](std::size_t m) {
            out += separator;
            out += ctx.attribute_name(m);
        });
        out += '\n';
    }
    return out;
}

/// Parses the Burmeister .cxt layout: literal "B", blank line, |G|, |M|,
/// blank line, |G| object names, |M| attribute names, |G| rows of 'X'/'.'.
inline FormalContext parse_cxt(std::string_view text) {
    auto lines = io_detail::split_lines(text);
    std::size_t idx = 0;
    auto next = [&]() -> std::string_view {
        if (idx >= lines.size()) throw DimensionMismatch("unexpected end of stream");
        return lines[idx++];
    };

    if (lines.empty() || io_detail::trim(lines[0]) != "B") throw BadMagic();
    ++idx;
    if (!io_detail::trim(next()).empty())
        throw DimensionMismatch("expected blank line after header");

    auto parse_count = [](std::string_view s) -> std::size_t {
        s = io_detail::trim(s);
        if (s.empty()) throw DimensionMismatch("missing count");
        std::size_t value = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw DimensionMismatch("count is not a number");
            value = value * 10 + static_cast<std::size_t>(c - '0');
        }
        return value;
    };

    std::size_t object_count = parse_count(next());
    std::size_t attribute_count = parse_count(next());
    if (!io_detail::trim(next()).empty())
        throw DimensionMismatch("expected blank line after counts");

    std::vector<std::string> objects;
    objects.reserve(object_count);
    for (std::size_t g = 0; g < object_count; ++g) objects.emplace_back(next());
    std::vector<std::string> attributes;
    attributes.reserve(attribute_count);
    for (std::size_t m = 0; m < attribute_count; ++m) attributes.emplace_back(next());

    std::vector<AttributeSet> rows;
    rows.reserve(object_count);
    for (std::size_t g = 0; g < object_count; ++g) {
        std::string_view line = next();
        if (line.size() != attribute_count)
            throw DimensionMismatch("row length does not match attribute count");
        AttributeSet r(attribute_count);
        for (std::size_t m = 0; m < attribute_count; ++m) {
            if (line[m] == 'X') r.set(m);
            else if (line[m] != '.') throw DimensionMismatch("row contains a character other than 'X' or '.'");
        }
        rows.push_back(std::move(r));
    }
    for (; idx < lines.size(); ++idx)
        if (!io_detail::trim(lines[idx]).empty())
            throw DimensionMismatch("trailing content after rows");

    return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

inline FormalContext parse_cxt(std::istream& in) {
    return parse_cxt(io_detail::read_all(in));
}

inline std::string serialize_cxt(const FormalContext& ctx) {
    std::string out = "B\n\n";
    out += std::to_string(ctx.object_count());
    out += '\n';
    out += std::to_string(ctx.attribute_count());
    out += "\n\n";
    for (const auto& n : ctx.objects()) { out += n; out += '\n'; }
    for (const auto& n : ctx.attributes()) { out += n; out += '\n'; }
    for (std::size_t g = 0; g < ctx.object_count(); ++g) {
        for (std::size_t m = 0; m < ctx.attribute_count(); ++m)
            out += ctx.row(g).test(m) ? 'X' : '.';
        out += '\n';
    }
    return out;
}

} // namespace conlat
