#pragma once

#include <cstddef>

#include "json.hpp"

namespace rmove {

/// Precision / recall / F1 from raw counts. `precision_undefined` marks the
/// zero-recommendation case, where precision is reported as 0.
struct EvalResult {
    std::size_t correct = 0;
    std::size_t recommended = 0;
    std::size_t moved = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false;

    friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

inline EvalResult make_result(std::size_t correct, std::size_t recommended, std::size_t moved) {
    EvalResult r{correct, recommended, moved};
    r.precision_undefined = recommended == 0;
    r.precision = recommended ? static_cast<double>(correct) / static_cast<double>(recommended) : 0.0;
    r.recall = moved ? static_cast<double>(correct) / static_cast<double>(moved) : 0.0;
    r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

inline nlohmann::json to_json(const EvalResult& r) {
    return {{"correct", r.correct},     {"recommended", r.recommended}, {"moved", r.moved},
            {"precision", r.precision}, {"recall", r.recall},           {"f1", r.f1},
            {"precision_undefined", r.precision_undefined}};
}

} // namespace rmove
