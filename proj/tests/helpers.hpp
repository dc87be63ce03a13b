#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ccp/core.hpp"
#include "ccp/random.hpp"

namespace ccptest {

using ccp::Candidate;
using ccp::Dataset;
using ccp::Example;
using ccp::LabelId;
using ccp::RandomStream;
using ccp::ScoreVector;

// Labels are the candidate positions 0..k-1.
inline Example make_example(std::string id, std::vector<ScoreVector> scores,
                            std::vector<LabelId> admissible,
                            std::vector<LabelId> answers) {
  Example e;
  e.id = std::move(id);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    e.candidates.push_back({static_cast<LabelId>(i), std::move(scores[i])});
  }
  e.admissible = std::move(admissible);
  e.answers = std::move(answers);
  return e;
}

// Random well-formed dataset, independent of the library's generator.
// tie_fraction quantizes that share of scores to one decimal so exact ties
// occur.
inline Dataset random_dataset(std::uint64_t seed, int examples, int candidates,
                              int layers, int max_admissible,
                              double tie_fraction = 0.0) {
  RandomStream s(seed);
  Dataset d;
  d.layer_count = layers;
  for (int i = 0; i < examples; ++i) {
    Example e;
    e.id = "t" + std::to_string(i);
    std::vector<int> pool(candidates);
    std::iota(pool.begin(), pool.end(), 0);
    const int adm =
        1 + static_cast<int>(s.next_below(static_cast<std::uint64_t>(max_admissible)));
    for (int t = 0; t < adm; ++t) {
      const int j =
          t + static_cast<int>(s.next_below(static_cast<std::uint64_t>(candidates - t)));
      std::swap(pool[t], pool[j]);
    }
    e.admissible.assign(pool.begin(), pool.begin() + adm);
    std::sort(e.admissible.begin(), e.admissible.end());
    const int answer_count =
        1 + static_cast<int>(s.next_below(static_cast<std::uint64_t>(adm)));
    std::vector<LabelId> shuffled = e.admissible;
    for (int t = 0; t < answer_count; ++t) {
      const int j = t + static_cast<int>(
                            s.next_below(static_cast<std::uint64_t>(adm - t)));
      std::swap(shuffled[t], shuffled[j]);
    }
    e.answers.assign(shuffled.begin(), shuffled.begin() + answer_count);
    std::sort(e.answers.begin(), e.answers.end());

    for (int c = 0; c < candidates; ++c) {
      Candidate cd;
      cd.label = c;
      for (int j = 0; j < layers; ++j) {
        double v = s.next_normal();
        if (tie_fraction > 0.0 && s.next_unit() < tie_fraction) {
          v = std::round(v * 10.0) / 10.0;
        }
        cd.scores.push_back(v);
      }
      e.candidates.push_back(std::move(cd));
    }
    d.examples.push_back(std::move(e));
  }
  return d;
}

inline std::vector<const Example*> views(const Dataset& d) {
  std::vector<const Example*> out;
  out.reserve(d.examples.size());
  for (const Example& e : d.examples) out.push_back(&e);
  return out;
}

inline std::vector<const Example*> views(const std::vector<Example>& examples) {
  std::vector<const Example*> out;
  out.reserve(examples.size());
  for (const Example& e : examples) out.push_back(&e);
  return out;
}

// Counting oracle for the smoothed empirical p-value; calibration need not
// be sorted.
inline double pvalue_linear(double v, const std::vector<double>& calibration,
                            double tie) {
  double greater = 0.0, equal = 0.0;
  for (double c : calibration) {
    if (c > v) greater += 1.0;
    else if (c == v) equal += 1.0;
  }
  return (greater + tie * equal + 1.0) /
         (static_cast<double>(calibration.size()) + 1.0);
}

// Scan oracle for the most conforming admissible score.
inline double min_admissible_oracle(const Example& e, int layer) {
  double best = std::numeric_limits<double>::infinity();
  for (LabelId a : e.admissible) {
    for (const Candidate& c : e.candidates) {
      if (c.label == a) best = std::min(best, c.scores[layer]);
    }
  }
  return best;
}

inline bool is_subset(const std::vector<LabelId>& inner,
                      const std::vector<LabelId>& outer) {
  for (LabelId x : inner) {
    if (std::find(outer.begin(), outer.end(), x) == outer.end()) return false;
  }
  return true;
}

}  // namespace ccptest
