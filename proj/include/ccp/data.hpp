#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccp/core.hpp"
#include "ccp/eval.hpp"

namespace ccp {

// Loader failure tied to a 1-based line of the score file; line 0 means the
// file itself (unopenable, empty).
class ScoreFileError : public std::runtime_error {
 public:
  ScoreFileError(int line, const std::string& message)
      : std::runtime_error(
            line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ScoreFileIssue {
  int line = 0;
  std::string message;
};

struct ParsedScoreFile {
  Dataset dataset;
  std::vector<std::string> layer_names;
  // 1-based source line of each parsed example, aligned with
  // dataset.examples.
  std::vector<int> record_lines;
};

// Structural pass: JSON header plus one JSON record per line. Lines that do
// not parse are reported into issues and skipped; surviving records are not
// yet checked against the dataset invariants.
ParsedScoreFile parse_score_file(const std::string& path,
                                 std::vector<ScoreFileIssue>& issues);

// Both passes; throws ScoreFileError on the first structural or invariant
// problem, so a returned Dataset is always fully valid.
Dataset load_score_file(const std::string& path);

// Writes the dataset in the loadable format. layer_names defaults to
// layer1..layerN when empty; byte-identical output for identical inputs.
void save_score_file(const Dataset& d, const std::string& path,
                     const std::vector<std::string>& layer_names = {},
                     const std::string& generator = "ccp");

struct LayerDistribution {
  double location = 0.0;
  double scale = 1.0;
};

// Controls for the synthetic score generator. Admissible candidates draw
// from admissible_layers, everything else from inadmissible_layers; one
// latent normal per candidate weighted by rho couples its layers, and each
// admissible label carries a location offset uniform on
// [0, difficulty_spread] shared across layers.
struct SynthConfig {
  int example_count = 0;
  int candidate_count = 0;
  int layer_count = 1;
  int admissible_min = 1;
  int admissible_max = 1;
  double rho = 0.0;
  double difficulty_spread = 0.0;
  std::vector<LayerDistribution> admissible_layers;    // one per layer
  std::vector<LayerDistribution> inadmissible_layers;  // one per layer
};

SynthConfig load_synth_config(const std::string& path);

// Pure function of (config, seed): identical arguments give identical
// datasets. Examples are independent; answers pick one admissible label
// uniformly.
Dataset synthesize(const SynthConfig& config, std::uint64_t seed);

// CSV report: one row per (trial, epsilon), then mean/p16/p84 rows per
// epsilon and one auc row, per predictor. Numbers carry six decimal places
// so identical reports are byte-identical.
void write_report(const std::vector<TrialReport>& reports, std::ostream& os);
void write_report_file(const std::vector<TrialReport>& reports,
                       const std::string& path);

}  // namespace ccp
