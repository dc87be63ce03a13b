#pragma once

#include <vector>

#include "ccp/core.hpp"
#include "ccp/random.hpp"

namespace ccp {

// Confidence-style rules tuned on calibration data: candidates are ranked by
// the negated nonconformity score of one layer (higher is better).
// kTopK keeps the tau_star best-ranked candidates; kThreshold keeps every
// candidate whose negated score reaches tau_star.
enum class HeuristicKind { kTopK, kThreshold };

struct HeuristicRule {
  HeuristicKind kind = HeuristicKind::kThreshold;
  int layer = 0;
  double tau_star = 0.0;
};

// Picks the loosest cutoff whose calibration coverage of a sampled labeled
// answer is at least 1 - eps (nearest-rank order statistic of the gold
// ranks or gold negated scores). Answer draws are keyed by example id
// through rng, matching standard conformal calibration.
HeuristicRule tune_threshold(const std::vector<const Example*>& calibration,
                             HeuristicKind kind, int layer, Tolerance eps,
                             const RandomSource& rng);

// Applies the rule; labels come out in stored candidate order and pvalues
// stays empty (the rule carries no p-values).
PredictionSet predict_heuristic(const Example& e, const HeuristicRule& rule);

}  // namespace ccp
