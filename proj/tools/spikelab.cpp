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

// spikelab command-line driver.
//
//   spikelab detect     --model wigner --n 30 --rho 1/5 --snr 6 --ell auto --seed 7
//   spikelab recover    ... [--refine] [--report-overlap]
//   spikelab refine     ...
//   spikelab ldlr       --model wigner --n 64 --snr 1.5 --rho 1/4 --degree 4
//   spikelab ldlr       --model wigner --snr 0.5 --probe "n=64,216,512;rho=sqrt-dn;degree=cbrt"
//   spikelab bounds     --model wishart --n 200 --N 800 --rho 1/10 --snr 2
//   spikelab experiment --config configs/detect_wigner.yaml --threads 4 --csv-out out.csv

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spikelab.hpp"

namespace {

using nlohmann::json;
using namespace spikelab;

struct CommonArgs {
  std::string model = "wigner";
  std::size_t n = 0;
  std::size_t N = 0;
  std::string rho = "1";
  double A = 1.0;
  double snr = 0.0;
  std::string ell = "auto";
  std::uint64_t seed = 1;
  std::optional<std::size_t> threads;
  std::string json_out;
  std::string input;
  bool null_instance = false;
};

void add_common(CLI::App* app, CommonArgs& a, bool with_ell = true) {
  app->add_option("--model", a.model, "wigner or wishart")->check(CLI::IsMember({"wigner", "wishart"}));
  app->add_option("--n", a.n, "dimension")->required();
  app->add_option("--N", a.N, "number of samples (wishart)");
  app->add_option("--rho", a.rho, "sparsity as an exact rational p/q");
  app->add_option("--A", a.A, "magnitude ratio bound A >= 1");
  app->add_option("--snr", a.snr, "lambda (wigner) or beta (wishart)")->required();
  if (with_ell) app->add_option("--ell", a.ell, "search sparsity, or 'auto' for the smallest admissible value");
  app->add_option("--seed", a.seed, "master seed");
  app->add_option("--threads", a.threads, "worker threads (0 = hardware; default $SPIKELAB_THREADS or 1)");
  app->add_option("--json-out", a.json_out, "write the JSON report to this path");
}

std::size_t threads_of(const CommonArgs& a) { return harness::resolve_threads(a.threads, 1); }

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!path.empty()) write_file(path, text);
}

json interval_json(const EllInterval& iv) {
  json j{{"lower", iv.lower}, {"upper", iv.upper}, {"feasible", iv.feasible}};
  j["smallest_feasible_ell"] = iv.smallest_feasible_ell ? json(*iv.smallest_feasible_ell) : json(nullptr);
  return j;
}

json vector_json(const std::vector<std::size_t>& v) { return json(v); }

struct Problem {
  Model model;
  SparsityParams sp;
  WignerParams wig;
  WishartParams wis;
};

Problem make_problem(const CommonArgs& a) {
  const Model m = parse_model(a.model);
  if (m == Model::kWishart && a.N == 0) throw std::invalid_argument("--N is required for the wishart model");
  Problem p{m, SparsityParams(a.n, parse_rational(a.rho), a.A), WignerParams{a.n, a.snr}, WishartParams{a.n, a.N, a.snr}};
  p.wig.validate();
  if (m == Model::kWishart) p.wis.validate();
  return p;
}

EllInterval interval_for(const Problem& p, bool recovery) {
  if (p.model == Model::kWigner) return recovery ? ell_interval_recover(p.sp, p.wig) : ell_interval_detect(p.sp, p.wig);
  return recovery ? ell_interval_recover(p.sp, p.wis) : ell_interval_detect(p.sp, p.wis);
}

std::size_t resolve_ell(const std::string& spec, const EllInterval& iv, const Problem& p) {
  if (spec != "auto") return static_cast<std::size_t>(std::stoull(spec));
  if (iv.feasible) return *iv.smallest_feasible_ell;
  const double first = std::isfinite(iv.lower) ? std::max(1.0, std::ceil(iv.lower)) : 1.0;
  const std::size_t ell = static_cast<std::size_t>(std::min(first, static_cast<double>(p.sp.support_size())));
  std::cerr << "warning: admissible ell range [" << iv.lower << ", " << iv.upper << "] is empty; using ell=" << ell
            << "\n";
  return ell;
}

/// The planted signal, plus the instance (read from --input or simulated).
struct Sampled {
  Signal x;
  std::optional<WignerInstance> wig;
  std::optional<WishartInstance> wis;
  bool simulated = true;
};

Sampled sample(const Problem& p, const CommonArgs& a) {
  Sampled s{sample_planted_signal(p.sp, harness::trial_rng(a.seed, harness::kSignal)), {}, {}, a.input.empty()};
  if (!a.input.empty()) {
    const json j = json::parse(read_file(a.input));
    if (p.model == Model::kWigner) {
      s.wig = wigner_from_json(j);
    } else {
      s.wis = wishart_from_json(j);
    }
    return s;
  }
  const auto purpose = a.null_instance ? harness::kNullNoise : harness::kPlantedNoise;
  if (p.model == Model::kWigner) {
    WignerParams wp = p.wig;
    if (a.null_instance) wp.lambda = 0.0;
    s.wig = sample_wigner(s.x, wp, harness::trial_rng(a.seed, purpose));
  } else {
    WishartParams wp = p.wis;
    if (a.null_instance) wp.beta = 0.0;
    s.wis = sample_wishart(s.x, wp, harness::trial_rng(a.seed, purpose));
  }
  return s;
}

int run_detect(const CommonArgs& a) {
  const Problem p = make_problem(a);
  const EllInterval iv = interval_for(p, false);
  const std::size_t ell = resolve_ell(a.ell, iv, p);
  const Sampled s = sample(p, a);
  SearchOptions so;
  so.threads = threads_of(a);
  const DetectionVerdict v = p.model == Model::kWigner ? wigner_detect(*s.wig, p.sp, p.wig, ell, so)
                                                       : wishart_detect(*s.wis, p.sp, p.wis, ell, so);
  const FailureBound fb = p.model == Model::kWigner ? detection_failure_bound(p.sp, p.wig, ell)
                                                    : detection_failure_bound(p.sp, p.wis, ell);
  json j{{"model", a.model},
         {"instance", a.input.empty() ? (a.null_instance ? "null" : "planted") : a.input},
         {"verdict", to_string(v.verdict)},
         {"statistic", v.statistic},
         {"threshold", v.threshold},
         {"ell", ell},
         {"guaranteed", v.guaranteed},
         {"interval", interval_json(iv)},
         {"failure_bound", fb.value},
         {"candidates_evaluated", v.search.candidates_evaluated},
         {"argmax_support", vector_json(v.search.best_vector.support)},
         {"argmax_signs", v.search.best_vector.signs}};
  emit(j, a.json_out);
  return 0;
}

int run_recover(const CommonArgs& a, bool refine, bool report_overlap) {
  const Problem p = make_problem(a);
  const EllInterval iv = interval_for(p, true);
  const std::size_t ell = resolve_ell(a.ell, iv, p);
  const Sampled s = sample(p, a);
  SearchOptions so;
  so.threads = threads_of(a);
  const SupportSignEstimate est =
      p.model == Model::kWigner
          ? wigner_recover(*s.wig, p.sp, p.wig, ell, harness::trial_rng(a.seed, harness::kSplitNoise), so)
          : wishart_recover(*s.wis, p.sp, p.wis, ell, so);
  const FailureBound fb = p.model == Model::kWigner ? recovery_failure_bound(p.sp, p.wig, ell)
                                                    : recovery_failure_bound(p.sp, p.wis, ell);
  json j{{"model", a.model},
         {"ell", ell},
         {"guaranteed", fb.guaranteed},
         {"interval", interval_json(iv)},
         {"failure_bound", fb.value},
         {"threshold", est.threshold_used},
         {"xbar", est.xbar},
         {"support", vector_json(est.support())}};
  const bool truth = s.simulated && report_overlap;
  if (truth) {
    j["support_exact"] = support_matches(est.xbar, s.x);
    j["signs_match_up_to_flip"] = signs_match_up_to_flip(est.xbar, s.x);
  }
  if (refine) {
    const auto support = est.support();
    if (support.empty()) {
      j["refined"] = nullptr;
    } else {
      const SpikeEstimate r =
          p.model == Model::kWigner ? spectral_refine(*s.wig, support) : spectral_refine(*s.wis, support);
      j["refined"] = {{"leading_eigenvalue", r.leading_eigenvalue},
                      {"xtilde", std::vector<double>(r.xtilde.data(), r.xtilde.data() + r.xtilde.size())}};
      if (truth) j["overlap_sq"] = overlap_sq(r.xtilde, s.x.entries());
    }
  }
  emit(j, a.json_out);
  return 0;
}

json ldlr_json(const LdlrReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back(to_decimal_string(t, 30));
  return {{"model", to_string(r.model)},
          {"n", r.n},
          {"N", r.N},
          {"D", r.D},
          {"rho", to_string(r.rho)},
          {"snr", to_string(r.snr)},
          {"value", r.value},
          {"value_decimal", to_decimal_string(r.value_exact, 30)},
          {"terms", terms},
          {"last_term_ratio", r.last_term_ratio}};
}

/// "n=64,216,512;rho=1/4|sqrt-dn;degree=cbrt|K;samples_per_n=4".
harness::ProbeConfig parse_probe(const std::string& spec) {
  harness::ProbeConfig p;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad --probe component '" + part + "'");
    const std::string key = part.substr(0, eq), val = part.substr(eq + 1);
    if (key == "n") {
      std::stringstream vs(val);
      std::string item;
      while (std::getline(vs, item, ',')) p.n.push_back(static_cast<std::size_t>(std::stoull(item)));
    } else if (key == "rho") {
      if (val != "sqrt-dn") p.rho = parse_rational(val);
    } else if (key == "degree") {
      if (val != "cbrt") p.degree = static_cast<std::size_t>(std::stoull(val));
    } else if (key == "samples_per_n") {
      p.samples_per_n = static_cast<std::size_t>(std::stoull(val));
    } else {
      throw std::invalid_argument("unknown --probe key '" + key + "'");
    }
  }
  if (p.n.empty()) throw std::invalid_argument("--probe needs n=...");
  return p;
}

struct LdlrArgs {
  std::string model = "wigner";
  std::size_t n = 0;
  std::size_t N = 0;
  std::string snr;
  std::string rho = "1";
  std::size_t degree = 0;
  std::string probe;
  std::string json_out;
};

int run_ldlr(const LdlrArgs& a) {
  const Model m = parse_model(a.model);
  const ExactScalar snr = parse_exact_decimal(a.snr);
  if (!a.probe.empty()) {
    const harness::ProbeConfig pc = parse_probe(a.probe);
    RegimeRules rules;
    rules.degree = [&](std::size_t n) { return pc.degree ? *pc.degree : harness::cube_root_ceil(n); };
    rules.rho = [&](std::size_t n) {
      if (pc.rho) return *pc.rho;
      return make_rational(static_cast<unsigned long>(harness::sqrt_ceil(rules.degree(n) * n)),
                           static_cast<unsigned long>(n));
    };
    rules.samples = [&](std::size_t n) { return pc.samples_per_n * n; };
    const RegimeReport rep = regime_probe(m, snr, rules, pc.n);
    json pts = json::array();
    for (const auto& pt : rep.points) pts.push_back(ldlr_json(pt.report));
    emit({{"verdict", to_string(rep.verdict)}, {"points", pts}}, a.json_out);
    return 0;
  }
  if (a.n == 0) throw std::invalid_argument("ldlr needs --n (or --probe)");
  const ExactScalar rho = parse_rational(a.rho);
  if (m == Model::kWishart && a.N == 0) throw std::invalid_argument("--N is required for the wishart model");
  const LdlrReport r = m == Model::kWigner ? ldlr_norm_wigner(a.n, snr, rho, a.degree)
                                           : ldlr_norm_wishart(a.n, a.N, snr, rho, a.degree);
  emit(ldlr_json(r), a.json_out);
  return 0;
}

struct BoundsArgs {
  CommonArgs common;
  std::optional<std::size_t> inner_N, chi2_k;
  std::optional<double> inner_t, chi2_z, chi2_t;
};

json tail_json(const TailBoundResult& t) { return {{"bound", t.bound_value}, {"regime_ok", t.regime_ok}}; }

int run_bounds(const BoundsArgs& b) {
  const CommonArgs& a = b.common;
  const Problem p = make_problem(a);
  const EllInterval det = interval_for(p, false), rec = interval_for(p, true);
  json j{{"model", a.model}, {"detect_interval", interval_json(det)}, {"recover_interval", interval_json(rec)}};
  if (a.ell != "auto") {
    const std::size_t ell = static_cast<std::size_t>(std::stoull(a.ell));
    const FailureBound fd = p.model == Model::kWigner ? detection_failure_bound(p.sp, p.wig, ell)
                                                      : detection_failure_bound(p.sp, p.wis, ell);
    const FailureBound fr = p.model == Model::kWigner ? recovery_failure_bound(p.sp, p.wig, ell)
                                                      : recovery_failure_bound(p.sp, p.wis, ell);
    j["ell"] = ell;
    j["detection_failure_bound"] = {{"value", fd.value}, {"guaranteed", fd.guaranteed}};
    j["recovery_failure_bound"] = {{"value", fr.value}, {"guaranteed", fr.guaranteed}};
    const double T = p.model == Model::kWigner ? wigner_detection_threshold(p.sp, p.wig, ell)
                                               : wishart_detection_threshold(p.sp, p.wis, ell);
    j["detection_threshold"] = T;
  }
  if (b.inner_N && b.inner_t) j["gaussian_inner_tail"] = tail_json(gaussian_inner_tail(*b.inner_N, *b.inner_t));
  if (b.chi2_k && b.chi2_z) j["chi2_tail"] = tail_json(chi2_tail_bound(*b.chi2_k, *b.chi2_z));
  if (b.chi2_k && b.chi2_t) j["chi2_two_sided"] = tail_json(chi2_two_sided_bound(*b.chi2_k, *b.chi2_t));
  emit(j, a.json_out);
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string csv_out, json_out, records_out;
  bool force = false;
  bool quiet = false;
};

int run_experiment_cmd(const ExperimentArgs& e) {
  harness::ExperimentConfig cfg = harness::load_config(e.config);
  if (e.seed) cfg.seed = *e.seed;
  if (!e.csv_out.empty()) cfg.output.csv = e.csv_out;
  if (!e.json_out.empty()) cfg.output.json = e.json_out;
  if (!e.records_out.empty()) cfg.output.records = e.records_out;
  if (e.force) cfg.force = true;
  harness::RunOptions ro;
  ro.threads = e.threads;
  if (!e.quiet) {
    ro.progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 10 == 0) std::cerr << "\r" << done << "/" << total << " trials" << std::flush;
      if (done == total) std::cerr << "\n";
    };
  }
  const harness::ExperimentResult res = harness::run_experiment(cfg, ro);
  for (const auto& c : res.cells) {
    if (c.skipped) {
      std::cerr << "skipped cell " << c.index << " (n=" << c.n << ", rho=" << to_string(c.rho) << ", snr=" << c.snr
                << "): admissible ell range is empty; rerun with --force to run it anyway\n";
    }
  }
  if (cfg.output.csv.empty()) std::cout << harness::to_csv(res.summaries, cfg.seed);
  for (const auto& p : res.probes) std::cerr << "probe snr=" << p.snr << ": " << to_string(p.report.verdict) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spikelab: sparse PCA detection, recovery and low-degree analysis"};
  app.require_subcommand(1);

  CommonArgs det;
  auto* detect = app.add_subcommand("detect", "run the sparse detection test on one instance");
  add_common(detect, det);
  detect->add_option("--input", det.input, "read the instance from a JSON file instead of simulating");
  detect->add_flag("--null", det.null_instance, "simulate a null (unspiked) instance");

  CommonArgs rec;
  bool rec_refine = false, rec_overlap = false;
  auto* recover = app.add_subcommand("recover", "recover support and signs on one instance");
  add_common(recover, rec);
  recover->add_option("--input", rec.input, "read the instance from a JSON file instead of simulating");
  recover->add_flag("--refine", rec_refine, "chain spectral refinement on the recovered support");
  recover->add_flag("--report-overlap", rec_overlap, "compare against the simulated signal");

  CommonArgs ref;
  bool ref_overlap = false;
  auto* refine = app.add_subcommand("refine", "recover, then refine by the top eigenvector on the support");
  add_common(refine, ref);
  refine->add_option("--input", ref.input, "read the instance from a JSON file instead of simulating");
  refine->add_flag("--report-overlap", ref_overlap, "compare against the simulated signal");

  LdlrArgs la;
  auto* ldlr = app.add_subcommand("ldlr", "exact low-degree likelihood ratio norm");
  ldlr->add_option("--model", la.model)->check(CLI::IsMember({"wigner", "wishart"}));
  ldlr->add_option("--n", la.n, "dimension");
  ldlr->add_option("--N", la.N, "number of samples (wishart)");
  ldlr->add_option("--snr", la.snr, "lambda or beta, exact (p/q or a decimal)")->required();
  ldlr->add_option("--rho", la.rho, "sparsity p/q");
  ldlr->add_option("--degree", la.degree, "degree D");
  ldlr->add_option("--probe", la.probe, "grid spec, e.g. \"n=64,216,512;rho=sqrt-dn;degree=cbrt\"");
  ldlr->add_option("--json-out", la.json_out);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "admissible ell ranges, failure bounds and tail bounds");
  add_common(bounds, ba.common);
  bounds->add_option("--inner-N", ba.inner_N, "Gaussian inner-product tail: dimension");
  bounds->add_option("--inner-t", ba.inner_t, "Gaussian inner-product tail: level t");
  bounds->add_option("--chi2-k", ba.chi2_k, "chi-squared degrees of freedom");
  bounds->add_option("--chi2-z", ba.chi2_z, "one-sided chi-squared ratio z");
  bounds->add_option("--chi2-t", ba.chi2_t, "two-sided chi-squared deviation t");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "run a seeded trial battery from a YAML config");
  experiment->add_option("--config", ea.config, "YAML experiment file")->required()->check(CLI::ExistingFile);
  experiment->add_option("--seed", ea.seed, "override the master seed");
  experiment->add_option("--threads", ea.threads, "worker threads (0 = hardware; default $SPIKELAB_THREADS)");
  experiment->add_option("--csv-out", ea.csv_out, "summary CSV path");
  experiment->add_option("--json-out", ea.json_out, "summary JSON path");
  experiment->add_option("--records-out", ea.records_out, "JSON-lines trial record path");
  experiment->add_flag("--force", ea.force, "run cells whose admissible ell range is empty");
  experiment->add_flag("--quiet", ea.quiet, "no progress output");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*detect) return run_detect(det);
    if (*recover) return run_recover(rec, rec_refine, rec_overlap);
    if (*refine) return run_recover(ref, true, ref_overlap);
    if (*ldlr) return run_ldlr(la);
    if (*bounds) return run_bounds(ba);
    if (*experiment) return run_experiment_cmd(ea);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
