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

// Seeded trial batteries over a parameter grid. Each (cell, trial) pair gets
// a seed derived from the master seed, so results do not depend on thread
// count or scheduling. Trial records are appended to a JSON-lines file as
// they finish; summaries are computed from the sorted records.

#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spikelab/detect.hpp"
#include "spikelab/harness/config.hpp"
#include "spikelab/harness/stats.hpp"
#include "spikelab/ldlr.hpp"
#include "spikelab/model.hpp"
#include "spikelab/recover.hpp"
#include "spikelab/rng.hpp"
#include "spikelab/serialize.hpp"

namespace spikelab::harness {

/// One grid point with its resolved ell and theory columns.
struct Cell {
  std::size_t index = 0;
  Model model = Model::kWigner;
  Task task = Task::kDetect;
  std::size_t n = 0;
  std::size_t N = 0;
  ExactScalar rho;
  double A = 1.0;
  double snr = 0.0;
  /// Resolved ell (degree D for ldlr-probe); 0 when the cell is skipped.
  std::size_t ell = 0;
  bool feasible = false;
  bool skipped = false;
  double theory_bound = std::numeric_limits<double>::quiet_NaN();
};

struct TrialRecord {
  std::size_t cell = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  bool type1_error = false;  // null instance declared planted
  bool type2_error = false;  // planted instance declared null
  bool support_exact = false;
  bool signs_ok = false;
  double statistic = 0.0;       // T on the planted instance, lambda_max, or the LDLR norm
  double statistic_null = 0.0;  // T on the null instance
  double threshold = 0.0;
  double overlap = 0.0;         // <x~, x>^2 or <v_max, x>^2
  double ms = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct CellSummary {
  Cell cell;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t type1_errors = 0;
  std::size_t type2_errors = 0;
  double rate = 0.0;
  Interval wilson;
  double mean_ms = 0.0;
  double theory_bound = std::numeric_limits<double>::quiet_NaN();
};

struct ProbeOutcome {
  double snr = 0.0;
  RegimeReport report;
};

struct ExperimentResult {
  std::vector<Cell> cells;
  std::vector<TrialRecord> records;  // sorted by (cell, trial)
  std::vector<CellSummary> summaries;
  std::vector<ProbeOutcome> probes;
};

// --- cells ---------------------------------------------------------------

namespace detail {

inline SparsityParams sparsity(const Cell& c) { return SparsityParams(c.n, c.rho, c.A); }

inline EllInterval cell_interval(const Cell& c) {
  const SparsityParams sp = sparsity(c);
  const bool detect = c.task == Task::kDetect;
  if (c.model == Model::kWigner) {
    const WignerParams wp{c.n, c.snr};
    return detect ? ell_interval_detect(sp, wp) : ell_interval_recover(sp, wp);
  }
  const WishartParams wp{c.n, c.N, c.snr};
  return detect ? ell_interval_detect(sp, wp) : ell_interval_recover(sp, wp);
}

/// Proven failure bound for the cell, floored at the smallest normal double so
/// an underflowed exponential still reads as a positive bound.
inline double cell_bound(const Cell& c) {
  const SparsityParams sp = sparsity(c);
  if (c.ell == 0) return std::numeric_limits<double>::quiet_NaN();
  double b = 0.0;
  if (c.model == Model::kWigner) {
    const WignerParams wp{c.n, c.snr};
    b = c.task == Task::kDetect ? detection_failure_bound(sp, wp, c.ell).value
                                : recovery_failure_bound(sp, wp, c.ell).value;
  } else {
    const WishartParams wp{c.n, c.N, c.snr};
    b = c.task == Task::kDetect ? detection_failure_bound(sp, wp, c.ell).value
                                : recovery_failure_bound(sp, wp, c.ell).value;
  }
  return std::max(b, std::numeric_limits<double>::min());
}

inline double pca_overlap_limit(const Cell& c) {
  if (c.model == Model::kWigner) return c.snr > 1.0 ? 1.0 - 1.0 / (c.snr * c.snr) : 0.0;
  const double gamma = static_cast<double>(c.n) / static_cast<double>(c.N);
  const double b = c.snr;
  return b * b > gamma ? (1.0 - gamma / (b * b)) / (1.0 + gamma / b) : 0.0;
}

inline void resolve_trial_cell(Cell& c, std::optional<std::size_t> ell_spec, bool force) {
  if (c.task == Task::kPcaBaseline) {
    c.feasible = c.model == Model::kWigner ? c.snr > 1.0 : WishartParams{c.n, c.N, c.snr}.snr_hat() > 1.0;
    c.theory_bound = pca_overlap_limit(c);
    return;
  }
  const EllInterval iv = cell_interval(c);
  const std::size_t k = sparsity(c).support_size();
  if (ell_spec) {
    if (*ell_spec == 0 || *ell_spec > c.n) throw std::invalid_argument("config: ell must lie in [1, n]");
    c.ell = *ell_spec;
    c.feasible = iv.contains(c.ell);
  } else if (iv.feasible) {
    c.ell = *iv.smallest_feasible_ell;
    c.feasible = true;
  } else if (force) {
    const double first = std::isfinite(iv.lower) ? std::max(1.0, std::ceil(iv.lower)) : static_cast<double>(k);
    c.ell = static_cast<std::size_t>(std::min(first, static_cast<double>(k)));
    c.feasible = false;
  } else {
    c.feasible = false;
    c.skipped = true;
  }
  c.theory_bound = cell_bound(c);
}

inline ExactScalar probe_rho(const ProbeConfig& p, std::size_t n, std::size_t D) {
  if (p.rho) return *p.rho;
  return make_rational(static_cast<unsigned long>(sqrt_ceil(D * n)), static_cast<unsigned long>(n));
}

inline std::size_t probe_degree(const ProbeConfig& p, std::size_t n) {
  return p.degree ? *p.degree : cube_root_ceil(n);
}

}  // namespace detail

/// Grid cells in row-major order over (n, N, rho, A, snr, ell), or
/// (snr, probe n) for ldlr-probe.
inline std::vector<Cell> build_cells(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Cell> cells;
  if (cfg.task == Task::kLdlrProbe) {
    for (double snr : cfg.snr) {
      for (std::size_t n : cfg.probe.n) {
        Cell c;
        c.index = cells.size();
        c.model = cfg.model;
        c.task = cfg.task;
        c.n = n;
        c.N = cfg.model == Model::kWishart ? cfg.probe.samples_per_n * n : 0;
        c.ell = detail::probe_degree(cfg.probe, n);
        c.rho = detail::probe_rho(cfg.probe, n, c.ell);
        c.snr = snr;
        cells.push_back(c);
      }
    }
    return cells;
  }
  const std::vector<std::size_t> Ns = cfg.model == Model::kWishart ? cfg.N : std::vector<std::size_t>{0};
  for (std::size_t n : cfg.n) {
    for (std::size_t N : Ns) {
      for (const auto& rho : cfg.rho) {
        for (double A : cfg.A) {
          for (double snr : cfg.snr) {
            for (const auto& ell : cfg.ell) {
              Cell c;
              c.index = cells.size();
              c.model = cfg.model;
              c.task = cfg.task;
              c.n = n;
              c.N = N;
              c.rho = rho;
              c.A = A;
              c.snr = snr;
              detail::resolve_trial_cell(c, ell, cfg.force);
              cells.push_back(c);
            }
          }
        }
      }
    }
  }
  return cells;
}

// --- trials --------------------------------------------------------------

enum Purpose : std::uint64_t { kSignal = 1, kNullNoise = 2, kPlantedNoise = 3, kSplitNoise = 4 };

/// Pure function of (master seed, cell, trial).
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t cell, std::size_t trial) {
  return derive_stream({master, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(trial)});
}

inline Philox trial_rng(std::uint64_t seed, Purpose p) { return Philox(seed, static_cast<std::uint64_t>(p)); }

namespace detail {

template <typename Data>
void fill_recovery(TrialRecord& r, const SupportSignEstimate& est, const Signal& x, const Data& data,
                   const ExperimentConfig& cfg, Task task) {
  r.statistic = est.search.best_value;
  r.threshold = est.threshold_used;
  r.support_exact = support_matches(est.xbar, x);
  r.signs_ok = signs_match_up_to_flip(est.xbar, x);
  if (task == Task::kRecover) {
    r.success = r.signs_ok;
    return;
  }
  const std::vector<std::size_t> s = est.support();
  if (!s.empty()) r.overlap = overlap_sq(spectral_refine(data, s).xtilde, x.entries());
  r.success = r.overlap >= cfg.min_overlap;
}

}  // namespace detail

/// Runs one trial of a trial-based task. Searches inside a trial are
/// single-threaded; parallelism comes from running trials concurrently.
inline TrialRecord run_trial(const Cell& c, const ExperimentConfig& cfg, std::size_t trial) {
  TrialRecord r;
  r.cell = c.index;
  r.trial = trial;
  r.seed = trial_seed(cfg.seed, c.index, trial);
  const auto t0 = std::chrono::steady_clock::now();
  const SparsityParams sp = detail::sparsity(c);
  const Signal x = sample_planted_signal(sp, trial_rng(r.seed, kSignal));
  SearchOptions so;
  so.threads = 1;

  if (c.model == Model::kWigner) {
    const WignerParams wp{c.n, c.snr};
    const WignerInstance planted = sample_wigner(x, wp, trial_rng(r.seed, kPlantedNoise));
    switch (c.task) {
      case Task::kDetect: {
        const WignerInstance null = sample_wigner(x, WignerParams{c.n, 0.0}, trial_rng(r.seed, kNullNoise));
        const auto v0 = wigner_detect(null, sp, wp, c.ell, so);
        const auto v1 = wigner_detect(planted, sp, wp, c.ell, so);
        r.statistic_null = v0.statistic;
        r.statistic = v1.statistic;
        r.threshold = v1.threshold;
        r.type1_error = v0.verdict == Verdict::kPlanted;
        r.type2_error = v1.verdict == Verdict::kNull;
        r.success = !r.type1_error && !r.type2_error;
        break;
      }
      case Task::kRecover:
      case Task::kRefine: {
        const auto est = wigner_recover(planted, sp, wp, c.ell, trial_rng(r.seed, kSplitNoise), so);
        detail::fill_recovery(r, est, x, planted, cfg, c.task);
        break;
      }
      case Task::kPcaBaseline: {
        const PcaResult p = pca_baseline(planted.Y);
        r.statistic = p.lambda_max;
        r.overlap = overlap_sq(p.v_max, x.entries());
        r.success = r.overlap >= cfg.min_overlap;
        break;
      }
      default: throw std::logic_error("run_trial: not a trial task");
    }
  } else {
    const WishartParams wp{c.n, c.N, c.snr};
    const WishartInstance planted = sample_wishart(x, wp, trial_rng(r.seed, kPlantedNoise));
    switch (c.task) {
      case Task::kDetect: {
        const WishartInstance null =
            sample_wishart(x, WishartParams{c.n, c.N, 0.0}, trial_rng(r.seed, kNullNoise));
        const auto v0 = wishart_detect(null, sp, wp, c.ell, so);
        const auto v1 = wishart_detect(planted, sp, wp, c.ell, so);
        r.statistic_null = v0.statistic;
        r.statistic = v1.statistic;
        r.threshold = v1.threshold;
        r.type1_error = v0.verdict == Verdict::kPlanted;
        r.type2_error = v1.verdict == Verdict::kNull;
        r.success = !r.type1_error && !r.type2_error;
        break;
      }
      case Task::kRecover:
      case Task::kRefine: {
        const auto est = wishart_recover(planted, sp, wp, c.ell, so);
        detail::fill_recovery(r, est, x, planted, cfg, c.task);
        break;
      }
      case Task::kPcaBaseline: {
        const PcaResult p = pca_baseline(planted.covariance());
        r.statistic = p.lambda_max;
        r.overlap = overlap_sq(p.v_max, x.entries());
        r.success = r.overlap >= cfg.min_overlap;
        break;
      }
      default: throw std::logic_error("run_trial: not a trial task");
    }
  }
  if (cfg.timing) {
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return r;
}

// --- records -------------------------------------------------------------

inline nlohmann::json to_json(const TrialRecord& r) {
  return nlohmann::json{{"cell", r.cell},
                        {"trial", r.trial},
                        {"seed", r.seed},
                        {"success", r.success},
                        {"type1", r.type1_error},
                        {"type2", r.type2_error},
                        {"support_exact", r.support_exact},
                        {"signs_ok", r.signs_ok},
                        {"statistic", r.statistic},
                        {"statistic_null", r.statistic_null},
                        {"threshold", r.threshold},
                        {"overlap", r.overlap},
                        {"ms", r.ms}};
}

inline TrialRecord record_from_json(const nlohmann::json& j) {
  TrialRecord r;
  r.cell = j.at("cell").get<std::size_t>();
  r.trial = j.at("trial").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.success = j.at("success").get<bool>();
  r.type1_error = j.at("type1").get<bool>();
  r.type2_error = j.at("type2").get<bool>();
  r.support_exact = j.at("support_exact").get<bool>();
  r.signs_ok = j.at("signs_ok").get<bool>();
  r.statistic = j.at("statistic").get<double>();
  r.statistic_null = j.at("statistic_null").get<double>();
  r.threshold = j.at("threshold").get<double>();
  r.overlap = j.at("overlap").get<double>();
  r.ms = j.at("ms").get<double>();
  return r;
}

/// Parses a JSON-lines record stream. A final line without a terminating
/// newline (an interrupted write) is ignored; any other malformed line throws.
inline std::vector<TrialRecord> parse_records(const std::string& text) {
  std::vector<TrialRecord> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) break;
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    out.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

/// Serialized appends to a record file, flushed per record.
class RecordWriter {
 public:
  RecordWriter() = default;
  explicit RecordWriter(const std::string& path) {
    if (path.empty()) return;
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open record file " + path);
  }

  void append(const TrialRecord& r) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!out_.is_open()) return;
    out_ << to_json(r).dump() << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("record write failed");
  }

 private:
  std::mutex mu_;
  std::ofstream out_;
};

// --- summaries -----------------------------------------------------------

inline void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return a.cell != b.cell ? a.cell < b.cell : a.trial < b.trial;
  });
}

/// One summary per cell, in cell order. Theory columns come from the cells;
/// for ldlr-probe cells the theory column carries the exact norm.
inline std::vector<CellSummary> summarize(const std::vector<Cell>& cells, std::vector<TrialRecord> records) {
  sort_records(records);
  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) {
    CellSummary s;
    s.cell = c;
    s.theory_bound = c.theory_bound;
    out.push_back(s);
  }
  for (const TrialRecord& r : records) {
    if (r.cell >= out.size()) throw std::invalid_argument("summarize: record refers to an unknown cell");
    CellSummary& s = out[r.cell];
    ++s.trials;
    s.successes += r.success ? 1 : 0;
    s.type1_errors += r.type1_error ? 1 : 0;
    s.type2_errors += r.type2_error ? 1 : 0;
    s.mean_ms += r.ms;
    if (s.cell.task == Task::kLdlrProbe) s.theory_bound = r.statistic;
  }
  for (CellSummary& s : out) {
    if (s.trials > 0) {
      s.rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
      s.mean_ms /= static_cast<double>(s.trials);
    }
    s.wilson = wilson_interval(s.successes, s.trials);
  }
  return out;
}

inline constexpr const char* kCsvHeader =
    "model,task,n,N,rho_num,rho_den,A,snr,ell,feasible,trials,successes,rate,wilson_lo,wilson_hi,theory_bound,"
    "mean_ms,seed";

inline std::string to_csv(const std::vector<CellSummary>& rows, std::uint64_t master_seed) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const CellSummary& s : rows) {
    const Cell& c = s.cell;
    os << to_string(c.model) << ',' << to_string(c.task) << ',' << c.n << ',' << c.N << ','
       << c.rho.get_num().get_str() << ',' << c.rho.get_den().get_str() << ',' << format_double(c.A) << ','
       << format_double(c.snr) << ',' << c.ell << ',' << (c.feasible ? "true" : "false") << ',' << s.trials << ','
       << s.successes << ',' << format_double(s.rate) << ',' << format_double(s.wilson.lo) << ','
       << format_double(s.wilson.hi) << ',' << format_double(s.theory_bound) << ',' << format_double(s.mean_ms)
       << ',' << master_seed << '\n';
  }
  return os.str();
}

inline nlohmann::json summary_json(const ExperimentResult& res, const ExperimentConfig& cfg) {
  nlohmann::json cells = nlohmann::json::array();
  for (const CellSummary& s : res.summaries) {
    cells.push_back({{"cell", s.cell.index},
                     {"n", s.cell.n},
                     {"N", s.cell.N},
                     {"rho", to_string(s.cell.rho)},
                     {"A", s.cell.A},
                     {"snr", s.cell.snr},
                     {"ell", s.cell.ell},
                     {"feasible", s.cell.feasible},
                     {"skipped", s.cell.skipped},
                     {"trials", s.trials},
                     {"successes", s.successes},
                     {"type1_errors", s.type1_errors},
                     {"type2_errors", s.type2_errors},
                     {"rate", s.rate},
                     {"wilson", {s.wilson.lo, s.wilson.hi}},
                     {"theory_bound", std::isfinite(s.theory_bound) ? nlohmann::json(s.theory_bound) : nlohmann::json(nullptr)}});
  }
  nlohmann::json probes = nlohmann::json::array();
  for (const ProbeOutcome& p : res.probes) {
    nlohmann::json pts = nlohmann::json::array();
    for (const RegimePoint& pt : p.report.points) {
      pts.push_back({{"n", pt.n},
                     {"N", pt.N},
                     {"D", pt.D},
                     {"rho", to_string(pt.rho)},
                     {"value", pt.value},
                     {"value_decimal", to_decimal_string(pt.report.value_exact, 30)},
                     {"last_term_ratio", pt.last_term_ratio}});
    }
    probes.push_back({{"snr", p.snr}, {"verdict", to_string(p.report.verdict)}, {"points", pts}});
  }
  return {{"model", to_string(cfg.model)}, {"task", to_string(cfg.task)}, {"seed", cfg.seed},
          {"trials", cfg.trials},         {"cells", cells},                {"probes", probes}};
}

// --- driver --------------------------------------------------------------

/// --threads, then SPIKELAB_THREADS, then the config value; 0 = hardware.
inline std::size_t resolve_threads(std::optional<std::size_t> cli, std::size_t config_value) {
  std::size_t t = config_value;
  if (cli) {
    t = *cli;
  } else if (const char* env = std::getenv("SPIKELAB_THREADS"); env != nullptr && *env != '\0') {
    t = static_cast<std::size_t>(std::stoull(env));
  }
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

namespace detail {

inline void run_probes(const ExperimentConfig& cfg, ExperimentResult& res, RecordWriter& writer) {
  std::size_t next_cell = 0;
  for (double snr : cfg.snr) {
    RegimeRules rules;
    rules.degree = [&](std::size_t n) { return probe_degree(cfg.probe, n); };
    rules.rho = [&](std::size_t n) { return probe_rho(cfg.probe, n, probe_degree(cfg.probe, n)); };
    rules.samples = [&](std::size_t n) { return cfg.probe.samples_per_n * n; };
    ProbeOutcome po{snr, regime_probe(cfg.model, exact_from_double(snr), rules, cfg.probe.n)};
    bool ok = po.report.verdict != RegimeVerdict::kInconclusive;
    if (cfg.probe.expect) {
      ok = *cfg.probe.expect == "divergent" ? po.report.verdict == RegimeVerdict::kDivergentConsistent
                                            : po.report.verdict == RegimeVerdict::kBoundedConsistent;
    }
    for (const RegimePoint& pt : po.report.points) {
      const Cell& c = res.cells.at(next_cell++);
      if (c.n != pt.n) throw std::logic_error("run_probes: cell order mismatch");
      TrialRecord r;
      r.cell = c.index;
      r.seed = cfg.seed;
      r.success = ok;
      r.statistic = pt.value;
      r.threshold = pt.last_term_ratio;
      writer.append(r);
      res.records.push_back(r);
    }
    res.probes.push_back(std::move(po));
  }
}

}  // namespace detail

struct RunOptions {
  std::optional<std::size_t> threads;
  /// Called after each finished trial with (done, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Runs every cell of `cfg`, appending records to cfg.output.records as they
/// finish and writing cfg.output.csv / cfg.output.json at the end.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  ExperimentResult res;
  res.cells = build_cells(cfg);
  RecordWriter writer(cfg.output.records);

  if (cfg.task == Task::kLdlrProbe) {
    detail::run_probes(cfg, res, writer);
  } else {
    struct Job {
      std::size_t cell, trial;
    };
    std::vector<Job> jobs;
    for (const Cell& c : res.cells) {
      if (c.skipped) continue;
      for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({c.index, t});
    }
    res.records.resize(jobs.size());
    std::atomic<std::size_t> next{0}, done{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size() || failed.load()) return;
        try {
          res.records[i] = run_trial(res.cells[jobs[i].cell], cfg, jobs[i].trial);
          writer.append(res.records[i]);
          const std::size_t d = done.fetch_add(1) + 1;
          if (opt.progress) {
            std::lock_guard<std::mutex> lock(error_mu);
            opt.progress(d, jobs.size());
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    };
    const std::size_t nthreads = std::min(resolve_threads(opt.threads, cfg.threads), std::max<std::size_t>(1, jobs.size()));
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
  }
  sort_records(res.records);
  res.summaries = summarize(res.cells, res.records);
  if (!cfg.output.csv.empty()) write_file(cfg.output.csv, to_csv(res.summaries, cfg.seed));
  if (!cfg.output.json.empty()) write_file(cfg.output.json, summary_json(res, cfg).dump(2) + "\n");
  return res;
}

}  // namespace spikelab::harness
