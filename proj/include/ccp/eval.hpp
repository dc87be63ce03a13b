#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ccp/baselines.hpp"
#include "ccp/cascade.hpp"
#include "ccp/conformal.hpp"
#include "ccp/core.hpp"

namespace ccp {

// Strictly increasing tolerances, all inside (0, 1).
class EpsilonGrid {
 public:
  explicit EpsilonGrid(std::vector<double> values);
  // 99 points: 0.01, 0.02, ..., 0.99.
  static EpsilonGrid standard();
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

enum class Predictor { kCp, kMinCp, kCascadeMinCp, kTopK, kThreshold };

const char* predictor_name(Predictor p);
std::optional<Predictor> predictor_from_name(std::string_view name);
std::optional<CorrectionKind> correction_from_name(std::string_view name);
const char* correction_name(CorrectionKind kind);

struct TrialConfig {
  int trial_count = 20;
  double calibration_fraction = 0.8;
  std::uint64_t seed = 0;
  Predictor predictor = Predictor::kCp;
  // Only used by kCascadeMinCp.
  CorrectionKind correction = CorrectionKind::kSimes;
};

struct TrialRecord {
  int trial = 0;
  double epsilon = 0.0;
  double accuracy = 0.0;
  double efficiency = 0.0;
  double cost = 1.0;
  double mean_set_size = 0.0;
};

struct BandSummary {
  double mean = 0.0;
  double p16 = 0.0;
  double p84 = 0.0;
};

struct EpsilonSummary {
  double epsilon = 0.0;
  BandSummary accuracy;
  BandSummary efficiency;
  BandSummary cost;
  BandSummary set_size;
};

struct TrialReport {
  Predictor predictor = Predictor::kCp;
  std::vector<double> grid;
  // Ordered by (trial, epsilon).
  std::vector<TrialRecord> records;
  // Ordered by epsilon; bands are over trials.
  std::vector<EpsilonSummary> summaries;
  double accuracy_auc = 0.0;
  double efficiency_auc = 0.0;
  double cost_auc = 0.0;
  double set_size_auc = 0.0;
};

// Fraction of examples whose set contains at least one admissible label.
double accuracy(const std::vector<PredictionSet>& sets,
                const std::vector<const Example*>& examples);

// Mean of |set| / |candidates| over examples.
double predictive_efficiency(const std::vector<PredictionSet>& sets,
                             const std::vector<const Example*>& examples);

// computations / denominator of an aggregated counter.
double amortized_cost(const CostCounter& counter);

// Trapezoid area of values over grid, normalized by the grid span; a
// single-point grid yields that value.
double auc(const std::vector<double>& grid, const std::vector<double>& values);

// Nearest-rank percentiles (rank = ceil(p/100 * n)) of the values.
std::pair<double, double> percentile_band(std::vector<double> values,
                                          double lo_percent = 16.0,
                                          double hi_percent = 84.0);

// Repeated random calibration/prediction splits of one dataset, the chosen
// predictor evaluated on every grid tolerance of every split. Predictors
// run with the same seed see identical splits, answer draws, and tie draws.
TrialReport run_trials(const Dataset& d, const EpsilonGrid& grid,
                       const TrialConfig& config);

}  // namespace ccp
