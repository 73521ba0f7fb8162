// The pgcol text format, bit-exact:
//   line 1: "pgcol 1"
//   line 2: "q n s" space-separated decimal
//   line 3: N space-separated colour ids in canonical point order
// LF line endings, trailing newline required. Colour ids are 0-based.
#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "pgc/colouring.hpp"

namespace pgc {

namespace detail {

inline std::vector<long long> parse_int_line(std::string_view line, int lineno,
                                             const std::string& code) {
    std::vector<long long> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ') {
            ++i;
            continue;
        }
        long long v = 0;
        auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v);
        if (ec != std::errc())
            throw FormatError(code, lineno, "line " + std::to_string(lineno) +
                                                ": expected an integer");
        out.push_back(v);
        i = ptr - line.data();
    }
    return out;
}

}  // namespace detail

inline Colouring parse_pgcol(std::string_view text) {
    if (text.empty() || text.back() != '\n')
        throw FormatError("MISSING_NEWLINE", 3, "pgcol files must end with a newline");
    std::vector<std::string_view> lines;
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t nl = text.find('\n', at);
        lines.push_back(text.substr(at, nl - at));
        at = nl + 1;
    }
    if (lines.size() != 3)
        throw FormatError("LINE_COUNT", static_cast<int>(lines.size()),
                          "pgcol files have exactly 3 lines, found " +
                              std::to_string(lines.size()));
    if (lines[0] != "pgcol 1")
        throw FormatError("BAD_MAGIC", 1, "line 1: expected 'pgcol 1'");
    std::vector<long long> header = detail::parse_int_line(lines[1], 2, "BAD_HEADER");
    if (header.size() != 3)
        throw FormatError("BAD_HEADER", 2, "line 2: expected 'q n s'");
    const long long q = header[0], n = header[1], s = header[2];
    if (!Field::supported(static_cast<int>(q)))
        throw FormatError("UNSUPPORTED_Q", 2, "line 2: unsupported field order " +
                                                  std::to_string(q));
    if (n < 1 || n > 62)
        throw FormatError("BAD_HEADER", 2, "line 2: rank out of range");
    if (s < 1)
        throw FormatError("BAD_HEADER", 2, "line 2: s must be positive");

    GeometryPtr g = build_geometry(static_cast<int>(q), static_cast<int>(n));
    std::vector<long long> body = detail::parse_int_line(lines[2], 3, "BAD_BODY");
    if (static_cast<int>(body.size()) != g->num_points())
        throw FormatError("LENGTH_MISMATCH", 3,
                          "line 3: expected " + std::to_string(g->num_points()) +
                              " colour ids, found " + std::to_string(body.size()));
    std::vector<int> colours(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] < 0 || body[i] >= s)
            throw FormatError("COLOUR_OUT_OF_RANGE", 3,
                              "line 3: colour id " + std::to_string(body[i]) +
                                  " not in [0," + std::to_string(s) + ")");
        colours[i] = static_cast<int>(body[i]);
    }
    return make_colouring(std::move(g), std::move(colours), static_cast<int>(s));
}

inline std::string serialize_pgcol(const Colouring& c) {
    std::string out = "pgcol 1\n";
    out += std::to_string(c.g().q()) + " " + std::to_string(c.g().n()) + " " +
           std::to_string(c.s) + "\n";
    for (std::size_t i = 0; i < c.colours.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(c.colours[i]);
    }
    out += '\n';
    return out;
}

}  // namespace pgc
