#pragma once

#include <vector>

#include "ccp/core.hpp"
#include "ccp/random.hpp"

namespace ccp {

// What a calibration row records for an example: the score of one sampled
// labeled answer (Standard), or the most conforming score over the whole
// admissible set (Min). Min rows are never larger, so Min tables admit
// every admissible candidate at the same confidence with smaller sets.
enum class CalibrationMode { kStandard, kMin };

// Per-layer calibration scores, each vector sorted ascending. All layers
// hold one entry per calibration example.
struct CalibrationTable {
  CalibrationMode mode = CalibrationMode::kStandard;
  std::vector<std::vector<double>> per_layer;

  int layer_count() const { return static_cast<int>(per_layer.size()); }
  int sample_count() const {
    return per_layer.empty() ? 0 : static_cast<int>(per_layer.front().size());
  }
};

// Smoothed empirical p-value of score v against a calibration vector sorted
// ascending: (#{c > v} + tie_draw * #{c == v} + 1) / (n + 1).
// Always in [1/(n+1), 1]. tie_draw must lie in [0, 1].
double smoothed_pvalue(double v, const std::vector<double>& calibration,
                       double tie_draw);

// Most conforming (smallest) score among the example's admissible
// candidates at the given layer.
double min_admissible_score(const Example& e, int layer);

// Builds one calibration table from a validated dataset. Standard mode
// samples one labeled answer per example (keyed by example id through rng,
// so the same label calibrates every layer); Min mode takes the per-layer
// minimum over the admissible set.
CalibrationTable calibrate(const Dataset& d, CalibrationMode mode,
                           const RandomSource& rng);

// View-based variant for pre-split data; examples must satisfy the dataset
// invariants for layer_count.
CalibrationTable calibrate_examples(const std::vector<const Example*>& examples,
                                    int layer_count, CalibrationMode mode,
                                    const RandomSource& rng);

// Keeps every candidate whose p-value at the given layer exceeds eps.
// Tie draws come from rng keyed by (example id, label, layer), so repeated
// calls reproduce the same set.
PredictionSet predict_set(const Example& e, const CalibrationTable& table,
                          int layer, Tolerance eps, const RandomSource& rng);

}  // namespace ccp
