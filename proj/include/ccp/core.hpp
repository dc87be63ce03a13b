#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ccp {

// Identifier of one candidate output within an example's candidate list.
using LabelId = std::int64_t;

// Per-layer nonconformity scores for one candidate; lower means more
// conforming. Length equals the dataset layer count.
using ScoreVector = std::vector<double>;

struct Candidate {
  LabelId label = 0;
  ScoreVector scores;
};

// One task instance: the full candidate list, the admissible subset, and the
// labeled answers. Invariants (checked by validate_dataset):
// answers is non-empty, answers is a subset of admissible, admissible is a
// subset of the candidate labels, and no list contains duplicates.
struct Example {
  std::string id;
  std::vector<Candidate> candidates;  // stored order is the iteration order
  std::vector<LabelId> admissible;
  std::vector<LabelId> answers;
};

struct Dataset {
  int layer_count = 0;
  std::vector<Example> examples;
};

// Miscoverage tolerance, open interval (0, 1).
class Tolerance {
 public:
  explicit Tolerance(double epsilon);
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

// One retained subset of an example's candidates. For conformal predictors,
// pvalues runs parallel to labels (corrected p-values for cascades);
// heuristic rules leave it empty. pvalue_computations counts the p-value
// evaluations spent producing the set.
struct PredictionSet {
  std::vector<LabelId> labels;
  std::vector<double> pvalues;
  std::int64_t pvalue_computations = 0;
};

// Violations for one example against the structural invariants above.
// layer_count is the expected score-vector length.
std::vector<std::string> validate_example(const Example& e, int layer_count);

// All violations in the dataset, one message per violation, in example
// order. Empty result means the dataset is well-formed.
std::vector<std::string> validate_dataset(const Dataset& d);

}  // namespace ccp
