#pragma once

#include <set>
#include <tuple>
#include <vector>

#include "rmove/eval/metrics.hpp"
#include "rmove/ids.hpp"
#include "rmove/recommend.hpp"

namespace rmove {

/// A Move counts as correct only when (method, owner, target) is a ground-truth
/// triple; detecting that a method should move without the right class is not.
inline EvalResult compute_metrics(const std::vector<Recommendation>& recs, const std::vector<MoveMethodTriple>& truth) {
    std::set<std::tuple<MethodId, ClassId, ClassId>> gt;
    for (const auto& t : truth) gt.emplace(t.method, t.source_class, t.target_class);
    std::size_t correct = 0, recommended = 0;
    for (const auto& r : recs) {
        if (!r.is_move()) continue;
        ++recommended;
        correct += gt.count({r.method, r.source, *r.target});
    }
    return make_result(correct, recommended, truth.size());
}

} // namespace rmove
