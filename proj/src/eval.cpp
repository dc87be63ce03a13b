#include "ccp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

namespace ccp {

namespace {

constexpr std::uint64_t kSplitStreamTag = 0x73706c6974ULL;  // "split"

}  // namespace

EpsilonGrid::EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("EpsilonGrid: empty grid");
  }
  double prev = 0.0;
  for (double v : values_) {
    if (!(v > 0.0) || !(v < 1.0)) {
      throw std::invalid_argument("EpsilonGrid: tolerances must lie in (0, 1)");
    }
    if (v <= prev) {
      throw std::invalid_argument("EpsilonGrid: tolerances must strictly increase");
    }
    prev = v;
  }
}

EpsilonGrid EpsilonGrid::standard() {
  std::vector<double> values;
  values.reserve(99);
  for (int i = 1; i <= 99; ++i) values.push_back(static_cast<double>(i) / 100.0);
  return EpsilonGrid(std::move(values));
}

const char* predictor_name(Predictor p) {
  switch (p) {
    case Predictor::kCp: return "cp";
    case Predictor::kMinCp: return "min-cp";
    case Predictor::kCascadeMinCp: return "cascade-min-cp";
    case Predictor::kTopK: return "topk";
    case Predictor::kThreshold: return "threshold";
  }
  return "?";
}

std::optional<Predictor> predictor_from_name(std::string_view name) {
  if (name == "cp") return Predictor::kCp;
  if (name == "min-cp") return Predictor::kMinCp;
  if (name == "cascade-min-cp") return Predictor::kCascadeMinCp;
  if (name == "topk") return Predictor::kTopK;
  if (name == "threshold") return Predictor::kThreshold;
  return std::nullopt;
}

std::optional<CorrectionKind> correction_from_name(std::string_view name) {
  if (name == "bonferroni") return CorrectionKind::kBonferroni;
  if (name == "simes") return CorrectionKind::kSimes;
  if (name == "none") return CorrectionKind::kNone;
  return std::nullopt;
}

const char* correction_name(CorrectionKind kind) {
  switch (kind) {
    case CorrectionKind::kBonferroni: return "bonferroni";
    case CorrectionKind::kSimes: return "simes";
    case CorrectionKind::kNone: return "none";
  }
  return "?";
}

double accuracy(const std::vector<PredictionSet>& sets,
                const std::vector<const Example*>& examples) {
  if (sets.size() != examples.size() || sets.empty()) {
    throw std::invalid_argument("accuracy: sets and examples must align and be non-empty");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::unordered_set<LabelId> admissible(examples[i]->admissible.begin(),
                                                 examples[i]->admissible.end());
    for (LabelId label : sets[i].labels) {
      if (admissible.count(label)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(sets.size());
}

double predictive_efficiency(const std::vector<PredictionSet>& sets,
                             const std::vector<const Example*>& examples) {
  if (sets.size() != examples.size() || sets.empty()) {
    throw std::invalid_argument(
        "predictive_efficiency: sets and examples must align and be non-empty");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (examples[i]->candidates.empty()) {
      throw std::invalid_argument("predictive_efficiency: example " +
                                  examples[i]->id + " has no candidates");
    }
    total += static_cast<double>(sets[i].labels.size()) /
             static_cast<double>(examples[i]->candidates.size());
  }
  return total / static_cast<double>(sets.size());
}

double amortized_cost(const CostCounter& counter) { return counter.ratio(); }

double auc(const std::vector<double>& grid, const std::vector<double>& values) {
  if (grid.size() != values.size() || grid.empty()) {
    throw std::invalid_argument("auc: grid and values must align and be non-empty");
  }
  if (grid.size() == 1) return values.front();
  const double span = grid.back() - grid.front();
  if (!(span > 0.0)) {
    throw std::invalid_argument("auc: grid must strictly increase");
  }
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) {
      throw std::invalid_argument("auc: grid must strictly increase");
    }
    area += (grid[i + 1] - grid[i]) * (values[i] + values[i + 1]) / 2.0;
  }
  return area / span;
}

std::pair<double, double> percentile_band(std::vector<double> values,
                                          double lo_percent, double hi_percent) {
  if (values.empty()) {
    throw std::invalid_argument("percentile_band: empty sample");
  }
  if (!(lo_percent > 0.0) || !(hi_percent <= 100.0) || lo_percent > hi_percent) {
    throw std::invalid_argument("percentile_band: need 0 < lo <= hi <= 100");
  }
  std::sort(values.begin(), values.end());
  const auto nearest = [&](double percent) {
    const double n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * n));
    rank = std::max<std::size_t>(1, std::min(values.size(), rank));
    return values[rank - 1];
  };
  return {nearest(lo_percent), nearest(hi_percent)};
}

namespace {

double mean_set_size(const std::vector<PredictionSet>& sets) {
  double total = 0.0;
  for (const PredictionSet& s : sets) total += static_cast<double>(s.labels.size());
  return total / static_cast<double>(sets.size());
}

std::vector<TrialRecord> run_one_trial(const Dataset& d,
                                       const std::vector<double>& grid,
                                       const TrialConfig& config, int trial,
                                       int calibration_count) {
  const RandomSource trial_src = RandomSource(config.seed).derive(
      static_cast<std::uint64_t>(trial));
  const int total = static_cast<int>(d.examples.size());

  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  RandomStream shuffle = trial_src.stream(kSplitStreamTag);
  for (int i = total - 1; i > 0; --i) {
    const auto j = static_cast<int>(shuffle.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }

  std::vector<const Example*> calibration, test;
  calibration.reserve(calibration_count);
  test.reserve(total - calibration_count);
  for (int i = 0; i < total; ++i) {
    (i < calibration_count ? calibration : test).push_back(&d.examples[order[i]]);
  }

  const int last_layer = d.layer_count - 1;
  std::vector<TrialRecord> out;
  out.reserve(grid.size());

  CalibrationTable table;
  if (config.predictor == Predictor::kCp) {
    table = calibrate_examples(calibration, d.layer_count,
                               CalibrationMode::kStandard, trial_src);
  } else if (config.predictor == Predictor::kMinCp ||
             config.predictor == Predictor::kCascadeMinCp) {
    table = calibrate_examples(calibration, d.layer_count, CalibrationMode::kMin,
                               trial_src);
  }

  for (double eps_value : grid) {
    const Tolerance eps(eps_value);
    std::vector<PredictionSet> sets;
    sets.reserve(test.size());
    TrialRecord rec;
    rec.trial = trial;
    rec.epsilon = eps_value;
    rec.cost = 1.0;

    switch (config.predictor) {
      case Predictor::kCp:
      case Predictor::kMinCp:
        for (const Example* e : test) {
          sets.push_back(predict_set(*e, table, last_layer, eps, trial_src));
        }
        break;
      case Predictor::kCascadeMinCp: {
        const CorrectionMethod method{config.correction, d.layer_count};
        CostCounter tally;
        for (const Example* e : test) {
          CascadeResult r = cascaded_predict(*e, table, eps, method, trial_src);
          tally += r.cost;
          sets.push_back(std::move(r.final_set));
        }
        rec.cost = amortized_cost(tally);
        break;
      }
      case Predictor::kTopK:
      case Predictor::kThreshold: {
        const HeuristicKind kind = config.predictor == Predictor::kTopK
                                       ? HeuristicKind::kTopK
                                       : HeuristicKind::kThreshold;
        const HeuristicRule rule =
            tune_threshold(calibration, kind, last_layer, eps, trial_src);
        for (const Example* e : test) {
          sets.push_back(predict_heuristic(*e, rule));
        }
        break;
      }
    }

    rec.accuracy = accuracy(sets, test);
    rec.efficiency = predictive_efficiency(sets, test);
    rec.mean_set_size = mean_set_size(sets);
    out.push_back(rec);
  }
  return out;
}

BandSummary summarize(const std::vector<double>& values) {
  BandSummary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  auto band = percentile_band(values);
  s.p16 = band.first;
  s.p84 = band.second;
  return s;
}

}  // namespace

TrialReport run_trials(const Dataset& d, const EpsilonGrid& grid,
                       const TrialConfig& config) {
  auto violations = validate_dataset(d);
  if (!violations.empty()) {
    throw std::invalid_argument("run_trials: invalid dataset: " + violations.front());
  }
  if (config.trial_count < 1) {
    throw std::invalid_argument("run_trials: trial_count must be at least 1");
  }
  if (!(config.calibration_fraction > 0.0) || !(config.calibration_fraction < 1.0)) {
    throw std::invalid_argument("run_trials: calibration fraction must lie in (0, 1)");
  }
  const int total = static_cast<int>(d.examples.size());
  const int calibration_count = static_cast<int>(
      std::floor(config.calibration_fraction * static_cast<double>(total) + 1e-9));
  if (calibration_count < 1 || calibration_count >= total) {
    throw std::invalid_argument(
        "run_trials: split leaves an empty calibration or prediction side");
  }

  TrialReport report;
  report.predictor = config.predictor;
  report.grid = grid.values();
  report.records.reserve(static_cast<std::size_t>(config.trial_count) *
                         grid.values().size());

  std::vector<std::vector<TrialRecord>> per_trial(config.trial_count);
  const int batch = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < config.trial_count; start += batch) {
    const int end = std::min(config.trial_count, start + batch);
    std::vector<std::future<std::vector<TrialRecord>>> futures;
    futures.reserve(end - start);
    for (int t = start; t < end; ++t) {
      futures.push_back(std::async(std::launch::async, run_one_trial, std::cref(d),
                                   std::cref(grid.values()), std::cref(config), t,
                                   calibration_count));
    }
    for (auto& f : futures) {
      auto records = f.get();
      report.records.insert(report.records.end(), records.begin(), records.end());
    }
  }

  const std::size_t points = grid.values().size();
  std::vector<double> acc_means, eff_means, cost_means, size_means;
  for (std::size_t g = 0; g < points; ++g) {
    std::vector<double> acc, eff, cost, size;
    for (int t = 0; t < config.trial_count; ++t) {
      const TrialRecord& rec = report.records[t * points + g];
      acc.push_back(rec.accuracy);
      eff.push_back(rec.efficiency);
      cost.push_back(rec.cost);
      size.push_back(rec.mean_set_size);
    }
    EpsilonSummary s;
    s.epsilon = grid.values()[g];
    s.accuracy = summarize(acc);
    s.efficiency = summarize(eff);
    s.cost = summarize(cost);
    s.set_size = summarize(size);
    report.summaries.push_back(s);
    acc_means.push_back(s.accuracy.mean);
    eff_means.push_back(s.efficiency.mean);
    cost_means.push_back(s.cost.mean);
    size_means.push_back(s.set_size.mean);
  }
  report.accuracy_auc = auc(report.grid, acc_means);
  report.efficiency_auc = auc(report.grid, eff_means);
  report.cost_auc = auc(report.grid, cost_means);
  report.set_size_auc = auc(report.grid, size_means);
  return report;
}

}  // namespace ccp
