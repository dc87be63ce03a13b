#include "ccp/cascade.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ccp {

namespace {

void check_pvalues(const std::vector<double>& pvalues, const char* who) {
  if (pvalues.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty p-value vector");
  }
  for (double p : pvalues) {
    if (!(p >= 0.0) || !(p <= 1.0)) {
      throw std::invalid_argument(std::string(who) +
                                  ": p-values must lie in [0, 1]");
    }
  }
}

// Assumes every entry is in [0, 1]; scratch is reused between calls.
double apply_correction(CorrectionKind kind, const double* p, int m,
                        std::vector<double>& scratch) {
  switch (kind) {
    case CorrectionKind::kBonferroni: {
      const double lo = *std::min_element(p, p + m);
      return std::min(1.0, static_cast<double>(m) * lo);
    }
    case CorrectionKind::kSimes: {
      scratch.assign(p, p + m);
      std::sort(scratch.begin(), scratch.end());
      double best = 1.0;
      for (int i = 0; i < m; ++i) {
        best = std::min(best, static_cast<double>(m) * scratch[i] /
                                  static_cast<double>(i + 1));
      }
      return std::min(1.0, best);
    }
    case CorrectionKind::kNone:
      return *std::min_element(p, p + m);
  }
  throw std::logic_error("apply_correction: unknown correction kind");
}

}  // namespace

double bonferroni(const std::vector<double>& pvalues) {
  check_pvalues(pvalues, "bonferroni");
  std::vector<double> scratch;
  return apply_correction(CorrectionKind::kBonferroni, pvalues.data(),
                          static_cast<int>(pvalues.size()), scratch);
}

double simes(const std::vector<double>& pvalues) {
  check_pvalues(pvalues, "simes");
  std::vector<double> scratch;
  return apply_correction(CorrectionKind::kSimes, pvalues.data(),
                          static_cast<int>(pvalues.size()), scratch);
}

double conservative_correct(const std::vector<double>& known,
                            const CorrectionMethod& method) {
  check_pvalues(known, "conservative_correct");
  if (method.layer_count < 1) {
    throw std::invalid_argument("conservative_correct: layer_count must be at least 1");
  }
  if (static_cast<int>(known.size()) > method.layer_count) {
    throw std::invalid_argument(
        "conservative_correct: more known p-values than layers");
  }
  std::vector<double> padded(known);
  padded.resize(method.layer_count, 1.0);
  std::vector<double> scratch;
  return apply_correction(method.kind, padded.data(), method.layer_count, scratch);
}

double CostCounter::ratio() const {
  if (denominator <= 0) {
    throw std::logic_error("CostCounter: no predictions tallied");
  }
  return static_cast<double>(pvalue_computations) /
         static_cast<double>(denominator);
}

CostCounter& CostCounter::operator+=(const CostCounter& other) {
  pvalue_computations += other.pvalue_computations;
  denominator += other.denominator;
  return *this;
}

CascadeResult cascaded_predict(const Example& e, const CalibrationTable& table,
                               Tolerance eps, const CorrectionMethod& method,
                               const RandomSource& rng) {
  const int m = table.layer_count();
  if (m < 1 || table.sample_count() < 1) {
    throw std::invalid_argument("cascaded_predict: empty calibration table");
  }
  if (method.layer_count != m) {
    throw std::invalid_argument(
        "cascaded_predict: correction layer_count does not match the table");
  }
  const int n = static_cast<int>(e.candidates.size());
  for (const Candidate& c : e.candidates) {
    if (static_cast<int>(c.scores.size()) < m) {
      throw std::invalid_argument("cascaded_predict: example " + e.id +
                                  " has too few score layers");
    }
  }

  CascadeResult result;
  result.cost.denominator = static_cast<std::int64_t>(n) * m;
  result.per_layer_sets.reserve(m);

  // Unknown layer p-values sit at their most favorable value 1, so applying
  // the correction to a full row is the conservative correction of the
  // layers seen so far.
  std::vector<double> pmat(static_cast<std::size_t>(n) * m, 1.0);
  std::vector<char> alive(n, 1);
  std::vector<double> corrected(n, 1.0);
  std::vector<double> scratch;

  for (int j = 0; j < m; ++j) {
    std::vector<LabelId> survivors;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      const Candidate& c = e.candidates[i];
      const double tau = rng.tie_draw(e.id, c.label, j);
      double* row = pmat.data() + static_cast<std::size_t>(i) * m;
      row[j] = smoothed_pvalue(c.scores[j], table.per_layer[j], tau);
      ++result.cost.pvalue_computations;
      corrected[i] = apply_correction(method.kind, row, m, scratch);
      if (corrected[i] > eps.epsilon()) {
        survivors.push_back(c.label);
      } else {
        alive[i] = 0;
      }
    }
    result.per_layer_sets.push_back(std::move(survivors));
  }

  result.final_set.pvalue_computations = result.cost.pvalue_computations;
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    result.final_set.labels.push_back(e.candidates[i].label);
    result.final_set.pvalues.push_back(corrected[i]);
  }
  return result;
}

}  // namespace ccp
