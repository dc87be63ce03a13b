#include "ccp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccp {

namespace {

double metric_at(const Candidate& c, int layer, const std::string& id) {
  if (layer < 0 || layer >= static_cast<int>(c.scores.size())) {
    throw std::invalid_argument("baselines: layer out of range for example " + id);
  }
  return -c.scores[layer];
}

// 1-based rank of the candidate at position pos, best metric first, ties
// broken by stored order.
int rank_of(const Example& e, int pos, int layer) {
  const double mine = metric_at(e.candidates[pos], layer, e.id);
  int rank = 1;
  for (int i = 0; i < static_cast<int>(e.candidates.size()); ++i) {
    if (i == pos) continue;
    const double other = metric_at(e.candidates[i], layer, e.id);
    if (other > mine || (other == mine && i < pos)) ++rank;
  }
  return rank;
}

int find_position(const Example& e, LabelId label) {
  for (int i = 0; i < static_cast<int>(e.candidates.size()); ++i) {
    if (e.candidates[i].label == label) return i;
  }
  throw std::invalid_argument("baselines: example " + e.id + " has no candidate " +
                              std::to_string(label));
}

// Smallest k with k/n >= 1 - eps, evaluated with the same double
// comparisons used by the coverage check.
int coverage_rank(int n, double eps) {
  const double target = 1.0 - eps;
  int k = static_cast<int>(std::ceil(target * static_cast<double>(n)));
  k = std::max(1, std::min(n, k));
  while (k > 1 && static_cast<double>(k - 1) / n >= target) --k;
  while (k < n && static_cast<double>(k) / n < target) ++k;
  return k;
}

}  // namespace

HeuristicRule tune_threshold(const std::vector<const Example*>& calibration,
                             HeuristicKind kind, int layer, Tolerance eps,
                             const RandomSource& rng) {
  if (calibration.empty()) {
    throw std::invalid_argument("tune_threshold: empty calibration set");
  }
  const int n = static_cast<int>(calibration.size());
  std::vector<double> stats;
  stats.reserve(calibration.size());
  for (const Example* e : calibration) {
    if (e->answers.empty()) {
      throw std::invalid_argument("tune_threshold: example " + e->id +
                                  " has no answers");
    }
    const std::uint64_t pick = rng.draw_index(e->id, e->answers.size());
    const int pos = find_position(*e, e->answers[pick]);
    if (kind == HeuristicKind::kTopK) {
      stats.push_back(static_cast<double>(rank_of(*e, pos, layer)));
    } else {
      stats.push_back(metric_at(e->candidates[pos], layer, e->id));
    }
  }

  const int k = coverage_rank(n, eps.epsilon());
  HeuristicRule rule;
  rule.kind = kind;
  rule.layer = layer;
  if (kind == HeuristicKind::kTopK) {
    // Loosest rank cutoff covering at least k of n golds: k-th smallest rank.
    std::sort(stats.begin(), stats.end());
    rule.tau_star = stats[k - 1];
  } else {
    // Loosest score cutoff covering at least k of n golds: k-th largest.
    std::sort(stats.begin(), stats.end(), std::greater<double>());
    rule.tau_star = stats[k - 1];
  }
  return rule;
}

PredictionSet predict_heuristic(const Example& e, const HeuristicRule& rule) {
  PredictionSet out;
  const int n = static_cast<int>(e.candidates.size());
  if (rule.kind == HeuristicKind::kThreshold) {
    for (const Candidate& c : e.candidates) {
      if (metric_at(c, rule.layer, e.id) >= rule.tau_star) {
        out.labels.push_back(c.label);
      }
    }
    return out;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return metric_at(e.candidates[a], rule.layer, e.id) >
           metric_at(e.candidates[b], rule.layer, e.id);
  });
  const int keep = std::min(n, static_cast<int>(rule.tau_star));
  std::vector<int> kept(order.begin(), order.begin() + std::max(0, keep));
  std::sort(kept.begin(), kept.end());
  for (int i : kept) out.labels.push_back(e.candidates[i].label);
  return out;
}

}  // namespace ccp
