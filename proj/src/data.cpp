#include "ccp/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "ccp/random.hpp"

namespace ccp {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

struct Header {
  int layer_count = 0;
  std::vector<std::string> layer_names;
};

Header parse_header(const std::string& line, int lineno) {
  try {
    const json h = json::parse(line);
    Header out;
    out.layer_count = h.at("layer_count").get<int>();
    if (out.layer_count < 1) {
      throw ScoreFileError(lineno, "header layer_count must be at least 1");
    }
    if (h.contains("layers")) {
      out.layer_names = h.at("layers").get<std::vector<std::string>>();
      if (static_cast<int>(out.layer_names.size()) != out.layer_count) {
        throw ScoreFileError(lineno,
                             "header layers list does not match layer_count");
      }
    }
    return out;
  } catch (const json::exception& ex) {
    throw ScoreFileError(lineno, std::string("bad header: ") + ex.what());
  }
}

Example parse_record(const std::string& line) {
  const json r = json::parse(line);
  Example e;
  e.id = r.at("id").get<std::string>();
  for (const json& c : r.at("candidates")) {
    Candidate cd;
    cd.label = c.at("label").get<LabelId>();
    cd.scores = c.at("scores").get<std::vector<double>>();
    e.candidates.push_back(std::move(cd));
  }
  e.admissible = r.at("admissible").get<std::vector<LabelId>>();
  e.answers = r.at("answers").get<std::vector<LabelId>>();
  return e;
}

}  // namespace

ParsedScoreFile parse_score_file(const std::string& path,
                                 std::vector<ScoreFileIssue>& issues) {
  std::ifstream in(path);
  if (!in) {
    throw ScoreFileError(0, "cannot open score file: " + path);
  }
  ParsedScoreFile out;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    if (!have_header) {
      const Header h = parse_header(line, lineno);
      out.dataset.layer_count = h.layer_count;
      out.layer_names = h.layer_names;
      have_header = true;
      continue;
    }
    try {
      out.dataset.examples.push_back(parse_record(line));
      out.record_lines.push_back(lineno);
    } catch (const json::exception& ex) {
      issues.push_back({lineno, std::string("bad record: ") + ex.what()});
    }
  }
  if (!have_header) {
    throw ScoreFileError(0, "score file is empty: " + path);
  }
  return out;
}

Dataset load_score_file(const std::string& path) {
  std::vector<ScoreFileIssue> issues;
  ParsedScoreFile parsed = parse_score_file(path, issues);
  if (!issues.empty()) {
    throw ScoreFileError(issues.front().line, issues.front().message);
  }
  if (parsed.dataset.examples.empty()) {
    throw ScoreFileError(0, "score file has no records: " + path);
  }
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < parsed.dataset.examples.size(); ++i) {
    const Example& e = parsed.dataset.examples[i];
    if (!e.id.empty() && !ids.insert(e.id).second) {
      throw ScoreFileError(parsed.record_lines[i], "duplicate example id " + e.id);
    }
    const auto violations = validate_example(e, parsed.dataset.layer_count);
    if (!violations.empty()) {
      throw ScoreFileError(parsed.record_lines[i], violations.front());
    }
  }
  return std::move(parsed.dataset);
}

void save_score_file(const Dataset& d, const std::string& path,
                     const std::vector<std::string>& layer_names,
                     const std::string& generator) {
  std::vector<std::string> names = layer_names;
  if (names.empty()) {
    for (int j = 1; j <= d.layer_count; ++j) {
      names.push_back("layer" + std::to_string(j));
    }
  }
  if (static_cast<int>(names.size()) != d.layer_count) {
    throw std::invalid_argument("save_score_file: layer_names do not match layer_count");
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write score file: " + path);
  }
  ordered_json h;
  h["layer_count"] = d.layer_count;
  h["layers"] = names;
  h["generator"] = generator;
  out << h.dump() << '\n';
  for (const Example& e : d.examples) {
    ordered_json r;
    r["id"] = e.id;
    ordered_json cands = ordered_json::array();
    for (const Candidate& c : e.candidates) {
      ordered_json jc;
      jc["label"] = c.label;
      jc["scores"] = c.scores;
      cands.push_back(std::move(jc));
    }
    r["candidates"] = std::move(cands);
    r["admissible"] = e.admissible;
    r["answers"] = e.answers;
    out << r.dump() << '\n';
  }
  if (!out.good()) {
    throw std::runtime_error("failed writing score file: " + path);
  }
}

namespace {

std::vector<LayerDistribution> parse_distributions(const json& v, int layer_count,
                                                   const char* field) {
  std::vector<LayerDistribution> out;
  const auto one = [](const json& o) {
    LayerDistribution d;
    d.location = o.value("location", 0.0);
    d.scale = o.value("scale", 1.0);
    return d;
  };
  if (v.is_array()) {
    for (const json& o : v) out.push_back(one(o));
    if (static_cast<int>(out.size()) != layer_count) {
      throw std::runtime_error(std::string(field) +
                               ": per-layer list does not match layer_count");
    }
  } else {
    out.assign(layer_count, one(v));
  }
  return out;
}

void check_synth_config(const SynthConfig& c) {
  if (c.example_count < 1) throw std::invalid_argument("synthesize: example_count must be at least 1");
  if (c.candidate_count < 1) throw std::invalid_argument("synthesize: candidate_count must be at least 1");
  if (c.layer_count < 1) throw std::invalid_argument("synthesize: layer_count must be at least 1");
  if (c.admissible_min < 1 || c.admissible_min > c.admissible_max ||
      c.admissible_max > c.candidate_count) {
    throw std::invalid_argument(
        "synthesize: need 1 <= admissible_min <= admissible_max <= candidate_count");
  }
  if (!(c.rho >= 0.0) || !(c.rho <= 1.0)) {
    throw std::invalid_argument("synthesize: rho must lie in [0, 1]");
  }
  if (!(c.difficulty_spread >= 0.0) || !std::isfinite(c.difficulty_spread)) {
    throw std::invalid_argument("synthesize: difficulty_spread must be finite and non-negative");
  }
  for (const auto* layers : {&c.admissible_layers, &c.inadmissible_layers}) {
    for (const LayerDistribution& d : *layers) {
      if (!std::isfinite(d.location) || !(d.scale >= 0.0) || !std::isfinite(d.scale)) {
        throw std::invalid_argument("synthesize: bad layer distribution");
      }
    }
  }
}

std::vector<LayerDistribution> broadcast(const std::vector<LayerDistribution>& in,
                                         int layer_count, const char* field) {
  if (static_cast<int>(in.size()) == layer_count) return in;
  if (in.size() == 1) return std::vector<LayerDistribution>(layer_count, in.front());
  throw std::invalid_argument(std::string("synthesize: ") + field +
                              " must hold one entry or one per layer");
}

}  // namespace

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config: " + path);
  }
  try {
    const json j = json::parse(in);
    SynthConfig c;
    c.example_count = j.at("example_count").get<int>();
    c.candidate_count = j.at("candidate_count").get<int>();
    c.layer_count = j.at("layer_count").get<int>();
    if (j.contains("admissible_size")) {
      c.admissible_min = j.at("admissible_size").value("min", 1);
      c.admissible_max = j.at("admissible_size").value("max", c.admissible_min);
    }
    c.rho = j.value("rho", 0.0);
    c.difficulty_spread = j.value("difficulty_spread", 0.0);
    c.admissible_layers = j.contains("admissible_score")
                              ? parse_distributions(j.at("admissible_score"),
                                                    c.layer_count, "admissible_score")
                              : std::vector<LayerDistribution>{{0.0, 1.0}};
    c.inadmissible_layers =
        j.contains("inadmissible_score")
            ? parse_distributions(j.at("inadmissible_score"), c.layer_count,
                                  "inadmissible_score")
            : std::vector<LayerDistribution>{{0.0, 1.0}};
    return c;
  } catch (const json::exception& ex) {
    throw std::runtime_error("bad config " + path + ": " + ex.what());
  }
}

Dataset synthesize(const SynthConfig& config, std::uint64_t seed) {
  check_synth_config(config);
  const auto admissible_layers =
      broadcast(config.admissible_layers, config.layer_count, "admissible_score");
  const auto inadmissible_layers = broadcast(config.inadmissible_layers,
                                             config.layer_count, "inadmissible_score");

  Dataset d;
  d.layer_count = config.layer_count;
  d.examples.reserve(config.example_count);
  const RandomSource src(seed);
  const double latent_weight = config.rho;
  const double noise_weight = std::sqrt(1.0 - config.rho * config.rho);

  std::vector<int> pool(config.candidate_count);
  for (int i = 0; i < config.example_count; ++i) {
    RandomStream s = src.stream(static_cast<std::uint64_t>(i));
    Example e;
    char id[16];
    std::snprintf(id, sizeof id, "e%06d", i);
    e.id = id;

    const int span = config.admissible_max - config.admissible_min + 1;
    const int adm_count = config.admissible_min +
                          static_cast<int>(s.next_below(static_cast<std::uint64_t>(span)));
    for (int c = 0; c < config.candidate_count; ++c) pool[c] = c;
    for (int t = 0; t < adm_count; ++t) {
      const int j = t + static_cast<int>(s.next_below(
                            static_cast<std::uint64_t>(config.candidate_count - t)));
      std::swap(pool[t], pool[j]);
    }
    e.admissible.assign(pool.begin(), pool.begin() + adm_count);
    std::sort(e.admissible.begin(), e.admissible.end());

    // Per-label offsets shared across layers, so some admissible labels are
    // consistently harder than others.
    std::vector<double> offsets(adm_count);
    for (double& o : offsets) o = s.next_unit() * config.difficulty_spread;
    e.answers.push_back(
        e.admissible[s.next_below(static_cast<std::uint64_t>(adm_count))]);

    e.candidates.reserve(config.candidate_count);
    for (int c = 0; c < config.candidate_count; ++c) {
      Candidate cd;
      cd.label = c;
      cd.scores.resize(config.layer_count);
      const double latent = s.next_normal();
      const auto at = std::lower_bound(e.admissible.begin(), e.admissible.end(),
                                       static_cast<LabelId>(c));
      const bool admissible = at != e.admissible.end() && *at == c;
      const double offset =
          admissible ? offsets[at - e.admissible.begin()] : 0.0;
      for (int j = 0; j < config.layer_count; ++j) {
        const LayerDistribution& dist =
            admissible ? admissible_layers[j] : inadmissible_layers[j];
        const double x = latent_weight * latent + noise_weight * s.next_normal();
        cd.scores[j] = dist.location + offset + dist.scale * x;
      }
      e.candidates.push_back(std::move(cd));
    }
    d.examples.push_back(std::move(e));
  }
  return d;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void band_row(std::ostream& os, const char* name, const char* record,
              const EpsilonSummary& s, double BandSummary::*field) {
  os << name << ',' << record << ',' << fixed6(s.epsilon) << ",,"
     << fixed6(s.accuracy.*field) << ',' << fixed6(s.efficiency.*field) << ','
     << fixed6(s.cost.*field) << ',' << fixed6(s.set_size.*field) << '\n';
}

}  // namespace

void write_report(const std::vector<TrialReport>& reports, std::ostream& os) {
  os << "predictor,record,epsilon,trial,accuracy,efficiency,cost,set_size\n";
  for (const TrialReport& r : reports) {
    const char* name = predictor_name(r.predictor);
    for (const TrialRecord& rec : r.records) {
      os << name << ",trial," << fixed6(rec.epsilon) << ',' << rec.trial << ','
         << fixed6(rec.accuracy) << ',' << fixed6(rec.efficiency) << ','
         << fixed6(rec.cost) << ',' << fixed6(rec.mean_set_size) << '\n';
    }
    for (const EpsilonSummary& s : r.summaries) {
      band_row(os, name, "mean", s, &BandSummary::mean);
      band_row(os, name, "p16", s, &BandSummary::p16);
      band_row(os, name, "p84", s, &BandSummary::p84);
    }
    os << name << ",auc,,," << fixed6(r.accuracy_auc) << ','
       << fixed6(r.efficiency_auc) << ',' << fixed6(r.cost_auc) << ','
       << fixed6(r.set_size_auc) << '\n';
  }
}

void write_report_file(const std::vector<TrialReport>& reports,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write report: " + path);
  }
  write_report(reports, out);
  if (!out.good()) {
    throw std::runtime_error("failed writing report: " + path);
  }
}

}  // namespace ccp
