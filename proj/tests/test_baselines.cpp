#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ccp/baselines.hpp"
#include "ccp/conformal.hpp"
#include "helpers.hpp"

using namespace ccp;
using namespace ccptest;

namespace {

double metric_oracle(const Example& e, int pos, int layer) {
  return -e.candidates[pos].scores[layer];
}

int rank_oracle(const Example& e, int pos, int layer) {
  const double mine = metric_oracle(e, pos, layer);
  int rank = 1;
  for (int i = 0; i < static_cast<int>(e.candidates.size()); ++i) {
    if (i == pos) continue;
    const double other = metric_oracle(e, i, layer);
    if (other > mine || (other == mine && i < pos)) ++rank;
  }
  return rank;
}

int gold_position(const Example& e, const RandomSource& rng) {
  const LabelId gold = e.answers[rng.draw_index(e.id, e.answers.size())];
  for (int i = 0; i < static_cast<int>(e.candidates.size()); ++i) {
    if (e.candidates[i].label == gold) return i;
  }
  REQUIRE(false);
  return -1;
}

// Brute-force sweep over every achievable cutoff, using the same gold draws
// and the same coverage predicate as the tuner.
HeuristicRule sweep_oracle(const std::vector<const Example*>& calibration,
                           HeuristicKind kind, int layer, double eps,
                           const RandomSource& rng) {
  const double target = 1.0 - eps;
  const double n = static_cast<double>(calibration.size());
  HeuristicRule rule;
  rule.kind = kind;
  rule.layer = layer;

  if (kind == HeuristicKind::kTopK) {
    int max_rank = 0;
    std::vector<int> gold_ranks;
    for (const Example* e : calibration) {
      gold_ranks.push_back(rank_oracle(*e, gold_position(*e, rng), layer));
      max_rank = std::max(max_rank, static_cast<int>(e->candidates.size()));
    }
    for (int k = 1; k <= max_rank; ++k) {
      double covered = 0.0;
      for (int r : gold_ranks) {
        if (r <= k) covered += 1.0;
      }
      if (covered / n >= target) {
        rule.tau_star = static_cast<double>(k);
        return rule;
      }
    }
    rule.tau_star = static_cast<double>(max_rank);
    return rule;
  }

  std::vector<double> gold_metrics;
  std::set<double, std::greater<double>> cutoffs;
  for (const Example* e : calibration) {
    gold_metrics.push_back(metric_oracle(*e, gold_position(*e, rng), layer));
    for (int i = 0; i < static_cast<int>(e->candidates.size()); ++i) {
      cutoffs.insert(metric_oracle(*e, i, layer));
    }
  }
  for (double tau : cutoffs) {
    double covered = 0.0;
    for (double g : gold_metrics) {
      if (g >= tau) covered += 1.0;
    }
    if (covered / n >= target) {
      rule.tau_star = tau;
      return rule;
    }
  }
  rule.tau_star = *cutoffs.rbegin();
  return rule;
}

// Five candidates scored 0..4, so the gold label g has rank g + 1.
Dataset ladder_dataset(int examples, RandomStream& s) {
  Dataset d;
  d.layer_count = 1;
  for (int i = 0; i < examples; ++i) {
    Example e;
    e.id = "l" + std::to_string(i);
    for (int c = 0; c < 5; ++c) {
      e.candidates.push_back({c, {static_cast<double>(c)}});
    }
    const LabelId gold = static_cast<LabelId>(s.next_below(5));
    e.admissible = {gold};
    e.answers = {gold};
    d.examples.push_back(std::move(e));
  }
  return d;
}

}  // namespace

TEST_CASE("near-zero tolerance demands full coverage of the golds") {
  RandomStream s(7);
  const Dataset d = ladder_dataset(40, s);
  const RandomSource rng(1);
  int max_rank = 0;
  double min_metric = 1e300;
  for (const Example& e : d.examples) {
    max_rank = std::max(max_rank, static_cast<int>(e.answers[0]) + 1);
    min_metric = std::min(min_metric, -static_cast<double>(e.answers[0]));
  }
  const HeuristicRule topk =
      tune_threshold(views(d), HeuristicKind::kTopK, 0, Tolerance(1e-9), rng);
  CHECK(topk.tau_star == static_cast<double>(max_rank));
  const HeuristicRule thr =
      tune_threshold(views(d), HeuristicKind::kThreshold, 0, Tolerance(1e-9), rng);
  CHECK(thr.tau_star == min_metric);
}

TEST_CASE("perfectly ranked golds tune to the tightest cutoff") {
  Dataset d;
  d.layer_count = 1;
  RandomStream s(9);
  for (int i = 0; i < 30; ++i) {
    Example e;
    e.id = "p" + std::to_string(i);
    for (int c = 0; c < 6; ++c) {
      e.candidates.push_back({c, {c == 0 ? -5.0 : s.next_unit()}});
    }
    e.admissible = {0};
    e.answers = {0};
    d.examples.push_back(std::move(e));
  }
  const RandomSource rng(2);
  const HeuristicRule topk =
      tune_threshold(views(d), HeuristicKind::kTopK, 0, Tolerance(0.5), rng);
  CHECK(topk.tau_star == 1.0);
}

TEST_CASE("tuning matches the exhaustive sweep oracle") {
  const Dataset d = random_dataset(43, 120, 15, 1, 4, 0.4);
  const auto calibration = views(d);
  const RandomSource rng(3);
  for (double eps : {0.05, 0.2, 0.33, 0.5, 0.9}) {
    for (HeuristicKind kind : {HeuristicKind::kTopK, HeuristicKind::kThreshold}) {
      const HeuristicRule tuned =
          tune_threshold(calibration, kind, 0, Tolerance(eps), rng);
      const HeuristicRule expected = sweep_oracle(calibration, kind, 0, eps, rng);
      CHECK(tuned.tau_star == expected.tau_star);
    }
  }
}

TEST_CASE("tuned rules cover the calibration golds at the requested rate") {
  const Dataset d = random_dataset(47, 150, 12, 2, 3, 0.3);
  const auto calibration = views(d);
  const RandomSource rng(5);
  for (double eps : {0.1, 0.25, 0.5}) {
    for (HeuristicKind kind : {HeuristicKind::kTopK, HeuristicKind::kThreshold}) {
      const HeuristicRule rule =
          tune_threshold(calibration, kind, 1, Tolerance(eps), rng);
      double covered = 0.0;
      for (const Example* e : calibration) {
        const LabelId gold = e->answers[rng.draw_index(e->id, e->answers.size())];
        const PredictionSet set = predict_heuristic(*e, rule);
        if (std::find(set.labels.begin(), set.labels.end(), gold) !=
            set.labels.end()) {
          covered += 1.0;
        }
      }
      CHECK(covered / static_cast<double>(calibration.size()) >= 1.0 - eps);
    }
  }
}

TEST_CASE("top-1 keeps the best-scored candidate, earliest on ties") {
  Example e = make_example("t", {{2.0}, {0.5}, {0.5}, {1.0}}, {1}, {1});
  HeuristicRule rule{HeuristicKind::kTopK, 0, 1.0};
  const PredictionSet set = predict_heuristic(e, rule);
  REQUIRE(set.labels.size() == 1);
  CHECK(set.labels[0] == 1);
  CHECK(set.pvalues.empty());

  rule.tau_star = 2.0;
  CHECK(predict_heuristic(e, rule).labels == std::vector<LabelId>{1, 2});
}

TEST_CASE("top-k sets have constant size, threshold sets vary") {
  const Dataset d = random_dataset(53, 30, 10, 1, 3);
  HeuristicRule topk{HeuristicKind::kTopK, 0, 4.0};
  std::set<std::size_t> threshold_sizes;
  for (const Example& e : d.examples) {
    CHECK(predict_heuristic(e, topk).labels.size() == 4);
    HeuristicRule thr{HeuristicKind::kThreshold, 0, 0.0};
    threshold_sizes.insert(predict_heuristic(e, thr).labels.size());
  }
  CHECK(threshold_sizes.size() > 1);
}

TEST_CASE("extreme cutoffs keep everything or nothing") {
  Example e = make_example("x", {{1.0}, {2.0}, {3.0}}, {0}, {0});
  CHECK(predict_heuristic(e, {HeuristicKind::kThreshold, 0, -1e30}).labels.size() == 3);
  CHECK(predict_heuristic(e, {HeuristicKind::kThreshold, 0, 1e30}).labels.empty());
  CHECK(predict_heuristic(e, {HeuristicKind::kTopK, 0, 0.0}).labels.empty());
  CHECK(predict_heuristic(e, {HeuristicKind::kTopK, 0, 99.0}).labels.size() == 3);
}

TEST_CASE("bad inputs are rejected") {
  CHECK_THROWS_AS(tune_threshold({}, HeuristicKind::kTopK, 0, Tolerance(0.1),
                                 RandomSource(0)),
                  std::invalid_argument);
  const Dataset d = random_dataset(59, 5, 4, 1, 2);
  CHECK_THROWS_AS(tune_threshold(views(d), HeuristicKind::kTopK, 3, Tolerance(0.1),
                                 RandomSource(0)),
                  std::invalid_argument);
  Example e = make_example("y", {{1.0}}, {0}, {0});
  CHECK_THROWS_AS(predict_heuristic(e, {HeuristicKind::kThreshold, 2, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("threshold rule tracks standard conformal prediction on large splits") {
  const Dataset d = random_dataset(61, 2000, 50, 1, 1);
  const auto all = views(d);
  const std::vector<const Example*> calibration(all.begin(), all.begin() + 1500);
  const std::vector<const Example*> test(all.begin() + 1500, all.end());
  const RandomSource rng(13);
  const CalibrationTable table =
      calibrate_examples(calibration, 1, CalibrationMode::kStandard, rng);

  for (double eps : {0.1, 0.2}) {
    const HeuristicRule rule =
        tune_threshold(calibration, HeuristicKind::kThreshold, 0, Tolerance(eps), rng);
    double cp_hits = 0.0, thr_hits = 0.0, cp_size = 0.0, thr_size = 0.0;
    for (const Example* e : test) {
      const PredictionSet cp_set = predict_set(*e, table, 0, Tolerance(eps), rng);
      const PredictionSet thr_set = predict_heuristic(*e, rule);
      cp_size += static_cast<double>(cp_set.labels.size());
      thr_size += static_cast<double>(thr_set.labels.size());
      const LabelId gold = e->answers[0];
      if (std::find(cp_set.labels.begin(), cp_set.labels.end(), gold) !=
          cp_set.labels.end()) {
        cp_hits += 1.0;
      }
      if (std::find(thr_set.labels.begin(), thr_set.labels.end(), gold) !=
          thr_set.labels.end()) {
        thr_hits += 1.0;
      }
    }
    const double n = static_cast<double>(test.size());
    CHECK(std::abs(cp_hits / n - thr_hits / n) < 0.04);
    CHECK(std::abs(cp_size - thr_size) / cp_size < 0.10);
  }
}
