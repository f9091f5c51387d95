// Copyright 2026 The spikelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configuration, loaded from YAML. Schema (all keys optional
// unless marked):
//
//   model: wigner | wishart                     (required)
//   task: detect | recover | refine | ldlr-probe | pca-baseline   (required)
//   trials: 100
//   seed: 1
//   threads: 1            # 0 = hardware concurrency
//   timing: false         # measure wall-clock time per trial (mean_ms column)
//   force: false          # run cells whose auto ell range is empty
//   grid:
//     n: [30]             (required for trial tasks)
//     rho: ["1/5"]        # exact rationals as "p/q" strings
//     snr: [6.0]          # lambda (wigner) or beta (wishart)
//     A: [1.0]
//     ell: [auto]         # integers or "auto"
//     N: [120]            # wishart sample counts
//   min_overlap: 0.9      # success cutoff on <x~, x>^2 for refine / pca-baseline
//   probe:                # ldlr-probe only
//     n: [64, 216, 512]
//     rho: "1/4"          # or "sqrt-dn": ceil(sqrt(D n)) / n
//     degree: cbrt        # or an integer; cbrt = ceil(n^{1/3})
//     samples_per_n: 4    # wishart: N = samples_per_n * n
//     expect: divergent   # divergent | bounded; omitted = any conclusive verdict
//   output:
//     csv: results.csv
//     records: records.jsonl
//     json: summary.json

#pragma once

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelab/model.hpp"
#include "spikelab/rational.hpp"

namespace spikelab::harness {

using spikelab::to_string;

enum class Task { kDetect, kRecover, kRefine, kLdlrProbe, kPcaBaseline };

inline const char* to_string(Task t) {
  switch (t) {
    case Task::kDetect: return "detect";
    case Task::kRecover: return "recover";
    case Task::kRefine: return "refine";
    case Task::kLdlrProbe: return "ldlr-probe";
    default: return "pca-baseline";
  }
}

inline Task parse_task(const std::string& s) {
  if (s == "detect") return Task::kDetect;
  if (s == "recover") return Task::kRecover;
  if (s == "refine") return Task::kRefine;
  if (s == "ldlr-probe") return Task::kLdlrProbe;
  if (s == "pca-baseline") return Task::kPcaBaseline;
  throw std::invalid_argument("unknown task '" + s + "'");
}

struct ProbeConfig {
  std::vector<std::size_t> n;
  /// Fixed rho, or nullopt for the ceil(sqrt(D n))/n rule.
  std::optional<ExactScalar> rho;
  /// Fixed degree, or nullopt for ceil(n^{1/3}).
  std::optional<std::size_t> degree;
  std::size_t samples_per_n = 4;
  std::optional<std::string> expect;
};

struct OutputPaths {
  std::string csv;
  std::string records;
  std::string json;
};

struct ExperimentConfig {
  Model model = Model::kWigner;
  Task task = Task::kDetect;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool timing = false;
  bool force = false;
  double min_overlap = 0.9;

  std::vector<std::size_t> n;
  std::vector<ExactScalar> rho{ExactScalar(1)};
  std::vector<double> snr{1.0};
  std::vector<double> A{1.0};
  /// nullopt entries mean "auto".
  std::vector<std::optional<std::size_t>> ell{std::nullopt};
  std::vector<std::size_t> N;

  ProbeConfig probe;
  OutputPaths output;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const {
    if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
    if (task == Task::kLdlrProbe) {
      if (probe.n.empty()) throw std::invalid_argument("config: probe.n must be non-empty");
      if (snr.empty()) throw std::invalid_argument("config: grid.snr must be non-empty");
      if (probe.expect && *probe.expect != "divergent" && *probe.expect != "bounded") {
        throw std::invalid_argument("config: probe.expect must be divergent or bounded");
      }
      return;
    }
    if (n.empty() || rho.empty() || snr.empty() || A.empty() || ell.empty()) {
      throw std::invalid_argument("config: every grid axis must be non-empty");
    }
    if (model == Model::kWishart && N.empty()) throw std::invalid_argument("config: wishart needs grid.N");
    for (std::size_t nn : n) {
      for (const auto& r : rho) {
        const ExactScalar k = r * static_cast<unsigned long>(nn);
        if (k.get_den() != 1 || sgn(k) <= 0) {
          throw std::invalid_argument("config: rho * n must be a positive integer (n=" + std::to_string(nn) +
                                      ", rho=" + to_string(r) + ")");
        }
      }
    }
    if (!(min_overlap >= 0.0 && min_overlap <= 1.0)) throw std::invalid_argument("config: min_overlap in [0,1]");
  }
};

namespace detail {

template <typename T>
std::vector<T> read_list(const YAML::Node& node, const char* key) {
  std::vector<T> out;
  if (!node) return out;
  if (!node.IsSequence()) throw std::invalid_argument(std::string("config: ") + key + " must be a list");
  for (const auto& item : node) out.push_back(item.as<T>());
  return out;
}

inline std::vector<ExactScalar> read_rationals(const YAML::Node& node, const char* key) {
  std::vector<ExactScalar> out;
  for (const auto& s : read_list<std::string>(node, key)) out.push_back(parse_rational(s));
  return out;
}

inline std::optional<std::size_t> read_ell(const YAML::Node& item) {
  const std::string s = item.as<std::string>();
  if (s == "auto") return std::nullopt;
  return item.as<std::size_t>();
}

}  // namespace detail

inline ExperimentConfig config_from_yaml(const YAML::Node& root) {
  if (!root.IsMap()) throw std::invalid_argument("config: top level must be a mapping");
  ExperimentConfig c;
  if (!root["model"] || !root["task"]) throw std::invalid_argument("config: model and task are required");
  c.model = parse_model(root["model"].as<std::string>());
  c.task = parse_task(root["task"].as<std::string>());
  if (root["trials"]) c.trials = root["trials"].as<std::size_t>();
  if (root["seed"]) c.seed = root["seed"].as<std::uint64_t>();
  if (root["threads"]) c.threads = root["threads"].as<std::size_t>();
  if (root["timing"]) c.timing = root["timing"].as<bool>();
  if (root["force"]) c.force = root["force"].as<bool>();
  if (root["min_overlap"]) c.min_overlap = root["min_overlap"].as<double>();

  if (const YAML::Node g = root["grid"]) {
    if (g["n"]) c.n = detail::read_list<std::size_t>(g["n"], "grid.n");
    if (g["rho"]) c.rho = detail::read_rationals(g["rho"], "grid.rho");
    if (g["snr"]) c.snr = detail::read_list<double>(g["snr"], "grid.snr");
    if (g["A"]) c.A = detail::read_list<double>(g["A"], "grid.A");
    if (g["N"]) c.N = detail::read_list<std::size_t>(g["N"], "grid.N");
    if (g["ell"]) {
      c.ell.clear();
      for (const auto& item : g["ell"]) c.ell.push_back(detail::read_ell(item));
    }
  }
  if (const YAML::Node p = root["probe"]) {
    c.probe.n = detail::read_list<std::size_t>(p["n"], "probe.n");
    if (p["rho"]) {
      const std::string r = p["rho"].as<std::string>();
      if (r != "sqrt-dn") c.probe.rho = parse_rational(r);
    }
    if (p["degree"]) {
      const std::string d = p["degree"].as<std::string>();
      if (d != "cbrt") c.probe.degree = p["degree"].as<std::size_t>();
    }
    if (p["samples_per_n"]) c.probe.samples_per_n = p["samples_per_n"].as<std::size_t>();
    if (p["expect"]) c.probe.expect = p["expect"].as<std::string>();
  }
  if (const YAML::Node o = root["output"]) {
    if (o["csv"]) c.output.csv = o["csv"].as<std::string>();
    if (o["records"]) c.output.records = o["records"].as<std::string>();
    if (o["json"]) c.output.json = o["json"].as<std::string>();
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  try {
    return config_from_yaml(YAML::LoadFile(path));
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
}

inline ExperimentConfig parse_config(const std::string& text) {
  try {
    return config_from_yaml(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

/// ceil(n^{1/3}) computed with integers.
inline std::size_t cube_root_ceil(std::size_t n) {
  std::size_t d = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
  while (d * d * d < n) ++d;
  while (d > 0 && (d - 1) * (d - 1) * (d - 1) >= n) --d;
  return d;
}

/// ceil(sqrt(m)) computed with integers.
inline std::size_t sqrt_ceil(std::size_t m) {
  std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(m)));
  while (r * r < m) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= m) --r;
  return r;
}

}  // namespace spikelab::harness
