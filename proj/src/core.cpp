#include "ccp/core.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ccp {

Tolerance::Tolerance(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("Tolerance: epsilon must lie in (0, 1)");
  }
}

namespace {

bool has_duplicates(const std::vector<LabelId>& ids) {
  std::unordered_set<LabelId> seen;
  for (LabelId id : ids) {
    if (!seen.insert(id).second) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> validate_example(const Example& e, int layer_count) {
  std::vector<std::string> out;
  const std::string where = "example " + (e.id.empty() ? "<unnamed>" : e.id);
  if (e.id.empty()) out.push_back(where + ": empty id");
  if (e.candidates.empty()) out.push_back(where + ": no candidates");

  std::unordered_set<LabelId> labels;
  for (const Candidate& c : e.candidates) {
    if (!labels.insert(c.label).second) {
      out.push_back(where + ": duplicate candidate label " + std::to_string(c.label));
    }
    if (static_cast<int>(c.scores.size()) != layer_count) {
      out.push_back(where + ": candidate " + std::to_string(c.label) + " has " +
                    std::to_string(c.scores.size()) + " scores, expected " +
                    std::to_string(layer_count));
    }
    for (double s : c.scores) {
      if (!std::isfinite(s)) {
        out.push_back(where + ": candidate " + std::to_string(c.label) +
                      " has a non-finite score");
        break;
      }
    }
  }

  if (e.admissible.empty()) out.push_back(where + ": admissible set is empty");
  if (has_duplicates(e.admissible)) out.push_back(where + ": duplicate admissible labels");
  if (e.answers.empty()) out.push_back(where + ": answers set is empty");
  if (has_duplicates(e.answers)) out.push_back(where + ": duplicate answer labels");

  for (LabelId a : e.admissible) {
    if (labels.find(a) == labels.end()) {
      out.push_back(where + ": admissible label " + std::to_string(a) +
                    " is not a candidate");
    }
  }
  std::unordered_set<LabelId> admissible(e.admissible.begin(), e.admissible.end());
  for (LabelId a : e.answers) {
    if (admissible.find(a) == admissible.end()) {
      out.push_back(where + ": answer label " + std::to_string(a) +
                    " is not admissible");
    }
  }
  return out;
}

std::vector<std::string> validate_dataset(const Dataset& d) {
  std::vector<std::string> out;
  if (d.layer_count < 1) {
    out.push_back("dataset: layer_count must be at least 1");
  }
  std::unordered_set<std::string> ids;
  for (const Example& e : d.examples) {
    if (!e.id.empty() && !ids.insert(e.id).second) {
      out.push_back("example " + e.id + ": duplicate example id");
    }
    auto ev = validate_example(e, d.layer_count);
    out.insert(out.end(), ev.begin(), ev.end());
  }
  return out;
}

}  // namespace ccp
