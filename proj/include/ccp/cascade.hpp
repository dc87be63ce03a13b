#pragma once

#include <cstdint>
#include <vector>

#include "ccp/conformal.hpp"
#include "ccp/core.hpp"
#include "ccp/random.hpp"

namespace ccp {

// Family-wise adjustment applied to the per-layer p-values of one candidate.
// kNone takes the raw minimum and forfeits the coverage guarantee; it exists
// to demonstrate why a correction is required.
enum class CorrectionKind { kBonferroni, kSimes, kNone };

struct CorrectionMethod {
  CorrectionKind kind = CorrectionKind::kBonferroni;
  int layer_count = 1;
};

// min(1, m * min_i p_i). Valid for arbitrary dependence between layers.
double bonferroni(const std::vector<double>& pvalues);

// min(1, min_i m * p_(i) / i) over the ascending order statistics. Valid
// under independence or positive dependence.
double simes(const std::vector<double>& pvalues);

// Corrected p-value when only the first j of m layer p-values are known;
// the unknown ones are taken at their most favorable value 1, so the result
// can only shrink as later layers arrive. known holds the j known values.
double conservative_correct(const std::vector<double>& known,
                            const CorrectionMethod& method);

// Tally of p-value computations against the no-pruning total for one or
// more cascaded predictions.
struct CostCounter {
  std::int64_t pvalue_computations = 0;
  std::int64_t denominator = 0;

  double ratio() const;
  CostCounter& operator+=(const CostCounter& other);
};

struct CascadeResult {
  // Survivors of the last layer; pvalues holds their fully corrected values.
  PredictionSet final_set;
  CostCounter cost;
  // Survivors after each layer, outermost first; each is a superset of the
  // next.
  std::vector<std::vector<LabelId>> per_layer_sets;
};

// Filters the candidate set layer by layer. A candidate is dropped the first
// time its conservatively corrected p-value falls to eps or below; dropped
// candidates never spend another p-value computation. With shared tie draws
// the final set equals the one obtained by computing every layer first and
// correcting once.
CascadeResult cascaded_predict(const Example& e, const CalibrationTable& table,
                               Tolerance eps, const CorrectionMethod& method,
                               const RandomSource& rng);

}  // namespace ccp
