#include "ccp/cli.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"

#include "ccp/data.hpp"
#include "ccp/eval.hpp"

namespace ccp {

namespace {

std::vector<std::string> split_list(const std::string& spec) {
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

EpsilonGrid make_grid(const std::string& spec) {
  if (spec.empty()) return EpsilonGrid::standard();
  std::vector<double> values;
  for (const std::string& item : split_list(spec)) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument("bad grid value: " + item);
    }
    values.push_back(v);
  }
  return EpsilonGrid(values);
}

int do_validate(const std::string& path, std::ostream& out) {
  std::vector<ScoreFileIssue> issues;
  const ParsedScoreFile parsed = parse_score_file(path, issues);
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < parsed.dataset.examples.size(); ++i) {
    const Example& e = parsed.dataset.examples[i];
    const int line = parsed.record_lines[i];
    if (!e.id.empty() && !ids.insert(e.id).second) {
      issues.push_back({line, "duplicate example id " + e.id});
    }
    for (const std::string& v : validate_example(e, parsed.dataset.layer_count)) {
      issues.push_back({line, v});
    }
  }
  if (parsed.dataset.examples.empty()) {
    issues.push_back({0, "score file has no records"});
  }
  if (issues.empty()) {
    out << "OK: " << parsed.dataset.examples.size() << " examples, "
        << parsed.dataset.layer_count << " layers\n";
    return 0;
  }
  std::sort(issues.begin(), issues.end(),
            [](const ScoreFileIssue& a, const ScoreFileIssue& b) {
              return a.line < b.line;
            });
  for (const ScoreFileIssue& issue : issues) {
    out << "line " << issue.line << ": " << issue.message << '\n';
  }
  out << issues.size() << " violation(s)\n";
  return 1;
}

struct EvalFlags {
  std::string file;
  std::string grid;
  std::string correction = "simes";
  std::string out_path;
  int trials = 20;
  double cal_frac = 0.8;
  std::uint64_t seed = 0;
};

void add_eval_flags(CLI::App* cmd, EvalFlags& flags) {
  cmd->add_option("file", flags.file, "score file")->required();
  cmd->add_option("--grid", flags.grid,
                  "comma-separated tolerances (default 0.01..0.99)");
  cmd->add_option("--correction", flags.correction,
                  "cascade correction (default simes)")
      ->check(CLI::IsMember({"bonferroni", "simes", "none"}));
  cmd->add_option("--trials", flags.trials, "number of random splits (default 20)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cal-frac", flags.cal_frac,
                  "calibration fraction of each split (default 0.8)");
  cmd->add_option("--seed", flags.seed, "seed shared by all trials (default 0)");
  cmd->add_option("--out", flags.out_path, "report path (default stdout)");
}

int run_predictors(const EvalFlags& flags, const std::vector<Predictor>& predictors,
                   std::ostream& out) {
  const Dataset d = load_score_file(flags.file);
  const EpsilonGrid grid = make_grid(flags.grid);
  TrialConfig config;
  config.trial_count = flags.trials;
  config.calibration_fraction = flags.cal_frac;
  config.seed = flags.seed;
  config.correction = *correction_from_name(flags.correction);

  if (d.layer_count == 1 && config.correction != CorrectionKind::kNone) {
    for (Predictor p : predictors) {
      if (p == Predictor::kCascadeMinCp) {
        std::cerr << "warning: --correction has no effect with a single layer\n";
        break;
      }
    }
  }

  std::vector<TrialReport> reports;
  reports.reserve(predictors.size());
  for (Predictor p : predictors) {
    config.predictor = p;
    reports.push_back(run_trials(d, grid, config));
  }
  if (flags.out_path.empty()) {
    write_report(reports, out);
  } else {
    write_report_file(reports, flags.out_path);
    out << "wrote " << flags.out_path << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"set-valued prediction with conformal calibration and cascades"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a score file");
  validate->add_option("file", validate_path, "score file")->required();

  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "write a synthetic score file");
  simulate->add_option("config", sim_config, "generator config (JSON)")->required();
  simulate->add_option("--seed", sim_seed, "generator seed (default 0)");
  simulate->add_option("--out", sim_out, "output score file")->required();

  EvalFlags eval_flags;
  std::string eval_predictor = "cp";
  auto* evaluate = app.add_subcommand("evaluate", "run trials for one predictor");
  add_eval_flags(evaluate, eval_flags);
  evaluate->add_option("--predictor", eval_predictor, "predictor (default cp)")
      ->check(CLI::IsMember(
          {"cp", "min-cp", "cascade-min-cp", "topk", "threshold"}));

  EvalFlags cmp_flags;
  std::string cmp_predictors = "cp,min-cp,cascade-min-cp";
  auto* compare =
      app.add_subcommand("compare", "run several predictors on shared splits");
  add_eval_flags(compare, cmp_flags);
  compare->add_option("--predictors", cmp_predictors,
                      "comma-separated predictors (default cp,min-cp,cascade-min-cp)");

  std::vector<const char*> argv;
  argv.push_back("ccp");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) {
      return do_validate(validate_path, out);
    }
    if (simulate->parsed()) {
      const SynthConfig config = load_synth_config(sim_config);
      const Dataset d = synthesize(config, sim_seed);
      save_score_file(d, sim_out);
      out << "wrote " << sim_out << ": " << d.examples.size() << " examples, "
          << d.layer_count << " layers\n";
      return 0;
    }
    if (evaluate->parsed()) {
      return run_predictors(eval_flags, {*predictor_from_name(eval_predictor)}, out);
    }
    if (compare->parsed()) {
      std::vector<Predictor> predictors;
      for (const std::string& name : split_list(cmp_predictors)) {
        const auto p = predictor_from_name(name);
        if (!p) throw std::invalid_argument("unknown predictor: " + name);
        predictors.push_back(*p);
      }
      if (predictors.empty()) {
        throw std::invalid_argument("no predictors given");
      }
      return run_predictors(cmp_flags, predictors, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ccp
