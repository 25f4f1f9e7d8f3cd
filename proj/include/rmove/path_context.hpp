#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rmove/error.hpp"
#include "rmove/ids.hpp"

namespace rmove {

inline constexpr std::string_view kUpMark = "\xE2\x86\x91";   // ↑
inline constexpr std::string_view kDownMark = "\xE2\x86\x93"; // ↓

/// One intermediate node on a leaf-to-leaf path. `up` marks nodes left by an
/// upward move (below the lowest common ancestor); the ancestor itself and the
/// nodes after it are marked down.
struct PathStep {
    std::string node;
    bool up = true;

    friend bool operator==(const PathStep&, const PathStep&) = default;
    friend auto operator<=>(const PathStep&, const PathStep&) = default;
};

struct PathContext {
    std::string start;
    std::vector<PathStep> steps;
    std::string end;

    friend bool operator==(const PathContext&, const PathContext&) = default;
    friend auto operator<=>(const PathContext&, const PathContext&) = default;
};

struct PathSet {
    MethodId method;
    std::vector<PathContext> contexts;
    bool truncated = false;

    friend bool operator==(const PathSet&, const PathSet&) = default;
};

/// "BinaryExpression↑"
inline std::string encode_step(const PathStep& s) {
    return s.node + std::string(s.up ? kUpMark : kDownMark);
}

inline PathStep decode_step(std::string_view s) {
    auto ends_with = [&](std::string_view mark) {
        return s.size() > mark.size() && s.substr(s.size() - mark.size()) == mark;
    };
    if (ends_with(kUpMark)) return {std::string(s.substr(0, s.size() - kUpMark.size())), true};
    if (ends_with(kDownMark)) return {std::string(s.substr(0, s.size() - kDownMark.size())), false};
    fail(ErrorKind::BadFormat, "path node '" + std::string(s) + "' lacks a direction mark");
}

/// Whole path as one symbol, e.g. "BinaryExpression↑ ConditionalExpression↓".
inline std::string path_symbol(const PathContext& c) {
    std::string out;
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        if (i) out += ' ';
        out += encode_step(c.steps[i]);
    }
    return out;
}

/// Renders "b ↑ BinaryExpression ↑ ConditionalExpression ↓ a".
inline std::string render_path(const PathContext& c) {
    std::string out = c.start;
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        // the arrow before node i is the direction of the move that reached it
        const bool arrived_up = i == 0 || c.steps[i - 1].up;
        out += " ";
        out += arrived_up ? kUpMark : kDownMark;
        out += " " + c.steps[i].node;
    }
    out += " ";
    out += kDownMark;
    out += " " + c.end;
    return out;
}

} // namespace rmove
