#include "ccp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ccp {

double smoothed_pvalue(double v, const std::vector<double>& calibration,
                       double tie_draw) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("smoothed_pvalue: score must be finite");
  }
  if (calibration.empty()) {
    throw std::invalid_argument("smoothed_pvalue: empty calibration vector");
  }
  if (!(tie_draw >= 0.0) || !(tie_draw <= 1.0)) {
    throw std::invalid_argument("smoothed_pvalue: tie_draw must lie in [0, 1]");
  }
  auto lo = std::lower_bound(calibration.begin(), calibration.end(), v);
  auto hi = std::upper_bound(lo, calibration.end(), v);
  const double greater = static_cast<double>(calibration.end() - hi);
  const double equal = static_cast<double>(hi - lo);
  const double n = static_cast<double>(calibration.size());
  return (greater + tie_draw * equal + 1.0) / (n + 1.0);
}

double min_admissible_score(const Example& e, int layer) {
  if (e.admissible.empty()) {
    throw std::invalid_argument("min_admissible_score: example " + e.id +
                                " has no admissible labels");
  }
  bool found = false;
  double best = 0.0;
  for (const Candidate& c : e.candidates) {
    if (std::find(e.admissible.begin(), e.admissible.end(), c.label) ==
        e.admissible.end()) {
      continue;
    }
    if (layer < 0 || layer >= static_cast<int>(c.scores.size())) {
      throw std::invalid_argument("min_admissible_score: layer " +
                                  std::to_string(layer) + " out of range");
    }
    if (!found || c.scores[layer] < best) {
      best = c.scores[layer];
      found = true;
    }
  }
  if (!found) {
    throw std::invalid_argument("min_admissible_score: example " + e.id +
                                " has admissible labels with no candidate");
  }
  return best;
}

namespace {

const Candidate& find_candidate(const Example& e, LabelId label) {
  for (const Candidate& c : e.candidates) {
    if (c.label == label) return c;
  }
  throw std::invalid_argument("example " + e.id + ": label " +
                              std::to_string(label) + " is not a candidate");
}

}  // namespace

CalibrationTable calibrate_examples(const std::vector<const Example*>& examples,
                                    int layer_count, CalibrationMode mode,
                                    const RandomSource& rng) {
  if (examples.empty()) {
    throw std::invalid_argument("calibrate: empty calibration set");
  }
  if (layer_count < 1) {
    throw std::invalid_argument("calibrate: layer_count must be at least 1");
  }
  CalibrationTable table;
  table.mode = mode;
  table.per_layer.assign(layer_count, {});
  for (auto& layer : table.per_layer) layer.reserve(examples.size());

  for (const Example* e : examples) {
    if (mode == CalibrationMode::kStandard) {
      if (e->answers.empty()) {
        throw std::invalid_argument("calibrate: example " + e->id +
                                    " has no answers");
      }
      const std::uint64_t pick = rng.draw_index(e->id, e->answers.size());
      const Candidate& c = find_candidate(*e, e->answers[pick]);
      if (static_cast<int>(c.scores.size()) != layer_count) {
        throw std::invalid_argument("calibrate: example " + e->id +
                                    " has a score-length mismatch");
      }
      for (int j = 0; j < layer_count; ++j) {
        table.per_layer[j].push_back(c.scores[j]);
      }
    } else {
      for (int j = 0; j < layer_count; ++j) {
        table.per_layer[j].push_back(min_admissible_score(*e, j));
      }
    }
  }
  for (auto& layer : table.per_layer) {
    std::sort(layer.begin(), layer.end());
  }
  return table;
}

CalibrationTable calibrate(const Dataset& d, CalibrationMode mode,
                           const RandomSource& rng) {
  auto violations = validate_dataset(d);
  if (!violations.empty()) {
    throw std::invalid_argument("calibrate: invalid dataset: " + violations.front());
  }
  std::vector<const Example*> views;
  views.reserve(d.examples.size());
  for (const Example& e : d.examples) views.push_back(&e);
  return calibrate_examples(views, d.layer_count, mode, rng);
}

PredictionSet predict_set(const Example& e, const CalibrationTable& table,
                          int layer, Tolerance eps, const RandomSource& rng) {
  if (layer < 0 || layer >= table.layer_count()) {
    throw std::invalid_argument("predict_set: layer " + std::to_string(layer) +
                                " out of range");
  }
  const std::vector<double>& calibration = table.per_layer[layer];
  PredictionSet out;
  for (const Candidate& c : e.candidates) {
    if (layer >= static_cast<int>(c.scores.size())) {
      throw std::invalid_argument("predict_set: example " + e.id +
                                  " has too few score layers");
    }
    const double tau = rng.tie_draw(e.id, c.label, layer);
    const double p = smoothed_pvalue(c.scores[layer], calibration, tau);
    ++out.pvalue_computations;
    if (p > eps.epsilon()) {
      out.labels.push_back(c.label);
      out.pvalues.push_back(p);
    }
  }
  return out;
}

}  // namespace ccp
