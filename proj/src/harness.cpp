#include "mpmd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mpmd/adversaries.hpp"
#include "mpmd/concave_pd.hpp"
#include "mpmd/errors.hpp"
#include "mpmd/generators.hpp"
#include "mpmd/io.hpp"
#include "mpmd/oracles.hpp"
#include "mpmd/pipeline.hpp"

namespace mpmd::harness {

namespace {

using nlohmann::json;

/// Runs fn(i) for i in [0, count) on up to `threads` workers; rethrows the
/// exception of the lowest failing index.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t default_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

std::string ratio_text(Cost alg, std::optional<Cost> opt) {
  if (!opt) return "NA";
  if (alg.is_infinite()) return "inf";
  if (opt->raw() <= kTolerance) return alg.raw() <= kTolerance ? "1" : "inf";
  return format_number(alg.raw() / opt->raw());
}

std::string csv_field(const std::optional<Cost>& c) { return c ? c->to_string() : "NA"; }

double concave_offline_opt(const Instance& inst) {
  const ConcaveFn& f = *inst.delay.concave();
  std::vector<std::vector<double>> c(inst.size(), std::vector<double>(inst.size(), 0.0));
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 0; j < inst.size(); ++j) {
      c[i][j] = concave_time_dist(inst.metric, inst.requests[i], inst.requests[j], f);
    }
  }
  return oracles::min_cost_perfect_matching(c).cost;
}

struct Trial {
  const json* sweep = nullptr;
  std::string generator;
  std::size_t size = 0;  ///< m for random generators, n for phase adversaries
  std::string algo;
  std::uint64_t seed = 0;
};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::vector<std::size_t> size_list(const json& sweep, const char* key) {
  if (!sweep.contains(key)) throw ValidationError(std::string("sweep is missing '") + key + "'");
  const json& v = sweep.at(key);
  if (v.is_array()) return v.get<std::vector<std::size_t>>();
  return {v.get<std::size_t>()};
}

ConcaveFn sweep_function(const json& sweep) {
  if (!sweep.contains("f")) return ConcaveFn::sqrt();
  json delay = sweep.at("f");
  delay["kind"] = "uniform_concave";
  return *delay_from_json(delay, 0).concave();
}

RatioRow run_trial(const Trial& trial, bool record_runtime) {
  const json& sweep = *trial.sweep;
  RatioRow row;
  row.algo = trial.algo;
  row.generator = trial.generator;
  row.seed = trial.seed;
  Rng rng(trial.seed);
  std::optional<Cost> opt;
  Cost alg;
  auto start = std::chrono::steady_clock::now();
  double elapsed_ms = 0.0;
  auto stop_clock = [&] {
    elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  if (trial.generator == "size_based") {
    const std::size_t n = get_or<std::size_t>(sweep, "n", 4);
    const Timestep horizon = get_or<Timestep>(sweep, "horizon", 6);
    const Instance inst = random_size_based_instance(trial.size, n, horizon, rng);
    row.m = inst.size();
    row.n = n;
    if (trial.algo != "nonclairvoyant" && trial.algo != "greedy")
      throw ValidationError("size_based sweeps run nonclairvoyant or greedy, not " + trial.algo);
    auto matcher = make_matcher(trial.algo, inst.metric);
    start = std::chrono::steady_clock::now();
    const MatchingSolution sol = run_online(*matcher, inst).solution;
    stop_clock();
    row.verified = verify_solution(sol, inst).ok;
    alg = sol.total;
    if (inst.size() <= 16 && inst.horizon <= 256) opt = oracles::offline_opt_dp(inst);
  } else if (trial.generator == "concave") {
    const std::size_t n = get_or<std::size_t>(sweep, "n", 5);
    const Timestep max_arrival = get_or<Timestep>(sweep, "max_arrival", 10);
    const Instance inst = random_concave_instance(trial.size, n, max_arrival, sweep_function(sweep), rng);
    row.m = inst.size();
    row.n = n;
    if (trial.algo != "concave") throw ValidationError("concave sweeps run the concave algorithm, not " + trial.algo);
    start = std::chrono::steady_clock::now();
    const concave::ConcaveResult res = concave::solve_concave(inst);
    stop_clock();
    row.verified = verify_solution(res.solution, inst).ok;
    alg = res.solution.total;
    if (inst.size() <= 16) opt = Cost(concave_offline_opt(inst));
  } else if (trial.generator == "det_phase" || trial.generator == "rand_phase") {
    start = std::chrono::steady_clock::now();
    const adversary::Transcript tr =
        adversary::uniform_phase_adversary(trial.size, trial.algo, trial.generator == "rand_phase", trial.seed);
    stop_clock();
    row.m = tr.instance.size();
    row.n = trial.size;
    row.verified = tr.feasible;
    alg = tr.alg_cost;
    opt = tr.opt_cost;
  } else {
    throw ValidationError("unknown generator '" + trial.generator +
                          "' (expected size_based, concave, det_phase or rand_phase)");
  }
  row.alg_cost = alg.to_string();
  row.opt_cost = csv_field(opt);
  row.ratio = ratio_text(alg, opt);
  if (record_runtime) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", elapsed_ms);
    row.runtime_ms = buf;
  }
  return row;
}

double parse_ratio(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

std::string RatioTable::csv() const {
  std::ostringstream out;
  out << "m,n,algo,alg_cost,opt_cost,ratio,runtime_ms,generator,seed,verified\n";
  std::vector<std::string> algos;
  for (const RatioRow& r : rows) {
    out << r.m << ',' << r.n << ',' << r.algo << ',' << r.alg_cost << ',' << r.opt_cost << ',' << r.ratio << ','
        << r.runtime_ms << ',' << r.generator << ',' << r.seed << ',' << (r.verified ? 1 : 0) << '\n';
    if (std::find(algos.begin(), algos.end(), r.algo) == algos.end()) algos.push_back(r.algo);
  }
  for (const std::string& algo : algos) {
    double max_ratio = 0.0;
    double log_sum = 0.0;
    std::size_t count = 0;
    for (const RatioRow& r : rows) {
      if (r.algo != algo || r.ratio == "NA") continue;
      const double v = parse_ratio(r.ratio);
      max_ratio = std::max(max_ratio, v);
      log_sum += std::log(v);
      ++count;
    }
    auto text = [&](double v) {
      if (count == 0) return std::string("NA");
      return std::isinf(v) ? std::string("inf") : format_number(v);
    };
    out << "summary_max,," << algo << ",,," << text(max_ratio) << ",,,,\n";
    out << "summary_geomean,," << algo << ",,," << text(count ? std::exp(log_sum / static_cast<double>(count)) : 0.0)
        << ",,,,\n";
  }
  return out.str();
}

RatioTable run_ratio(const json& config) {
  if (!config.is_object() || !config.contains("sweeps") || !config.at("sweeps").is_array())
    throw ValidationError("ratio config needs a 'sweeps' array");
  const std::uint64_t seed = get_or<std::uint64_t>(config, "seed", 0);
  const bool record_runtime = get_or<bool>(config, "record_runtime", false);
  const std::size_t threads = get_or<std::size_t>(config, "threads", default_threads());

  std::vector<Trial> trials;
  std::uint64_t index = 0;
  for (const json& sweep : config.at("sweeps")) {
    const std::string generator = get_or<std::string>(sweep, "generator", "");
    const bool phase = generator == "det_phase" || generator == "rand_phase";
    const std::size_t count = get_or<std::size_t>(sweep, "trials", 1);
    std::vector<std::string> algos =
        get_or<std::vector<std::string>>(sweep, "algos", {generator == "concave" ? "concave" : "nonclairvoyant"});
    for (std::size_t size : size_list(sweep, phase ? "n" : "m")) {
      for (std::size_t k = 0; k < count; ++k, ++index) {
        for (const std::string& algo : algos) {
          trials.push_back(Trial{&sweep, generator, size, algo, splitmix64(seed + index)});
        }
      }
    }
  }

  RatioTable table;
  table.rows.resize(trials.size());
  try {
    parallel_for(trials.size(), threads,
                 [&](std::size_t i) { table.rows[i] = run_trial(trials[i], record_runtime); });
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid ratio config: ") + e.what());
  }
  return table;
}

int cmd_solve(const SolveOptions& options, std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(options.instance);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    json out;
    out["algo"] = options.algo;
    MatchingSolution sol;
    if (options.algo == "nonclairvoyant") {
      sol = solve_nonclairvoyant(inst);
    } else if (options.algo == "concave") {
      const concave::ConcaveResult res = concave::solve_concave(inst);
      sol = res.solution;
      out["dual"] = concave::dual_report_to_json(res.dual);
    } else {
      err << "error: unknown algorithm '" << options.algo << "' (expected nonclairvoyant or concave)\n";
      return kExitUsage;
    }
    const VerificationReport report = verify_solution(sol, inst);
    out["solution"] = solution_to_json(sol);
    out["verification"] = report_to_json(report);
    write_json(options.out, out);
    if (!report.ok) {
      for (const std::string& f : report.failures) err << "verification failed: " << f << '\n';
      return kExitFailure;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_ratio(const std::filesystem::path& config_path, const std::filesystem::path& out, std::ostream& err) {
  json config;
  try {
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open " + config_path.string());
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError("malformed JSON in " + config_path.string() + ": " + e.what());
    }
    const RatioTable table = run_ratio(config);
    std::ofstream file(out);
    if (!file) throw ValidationError("cannot write " + out.string());
    file << table.csv();
    for (const RatioRow& r : table.rows) {
      if (!r.verified) {
        err << "unverified solution: generator " << r.generator << " seed " << r.seed << " algo " << r.algo << '\n';
        return kExitFailure;
      }
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

AdversarySummary run_adversary(const AdversaryOptions& options, std::ostream* transcripts) {
  const std::string& kind = options.kind;
  if (kind != "four_point" && kind != "det_phase" && kind != "rand_phase")
    throw ValidationError("unknown adversary kind '" + kind + "' (expected four_point, det_phase or rand_phase)");
  if (options.trials == 0) throw ValidationError("trials must be positive");
  if (options.algo != "nonclairvoyant" && options.algo != "greedy")
    throw ValidationError("unknown algorithm '" + options.algo + "' (expected nonclairvoyant or greedy)");

  std::vector<adversary::Transcript> runs(options.trials);
  parallel_for(options.trials, default_threads(), [&](std::size_t i) {
    const std::uint64_t seed = splitmix64(options.seed + i);
    if (kind == "four_point") {
      runs[i] = adversary::four_point_adversary(options.D, options.eps, options.algo);
      runs[i].seed = seed;
    } else {
      runs[i] = adversary::uniform_phase_adversary(options.n, options.algo, kind == "rand_phase", seed);
    }
  });

  AdversarySummary summary;
  std::ostringstream csv;
  csv << "n,mode,seed,alg_cost,opt_cost,ratio\n";
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const adversary::Transcript& tr : runs) {
    if (transcripts) *transcripts << adversary::transcript_to_text(tr) << '\n';
    const std::size_t points = tr.instance.metric.size();
    csv << points << ',' << kind << ',' << tr.seed << ',' << tr.alg_cost.to_string() << ','
        << tr.opt_cost.to_string() << ',' << (std::isinf(tr.ratio) ? std::string("inf") : format_number(tr.ratio))
        << '\n';
    sum += tr.alg_cost.raw();
    sum_sq += tr.alg_cost.raw() * tr.alg_cost.raw();
  }
  const double count = static_cast<double>(runs.size());
  summary.mean_alg_cost = sum / count;
  if (runs.size() > 1 && std::isfinite(summary.mean_alg_cost)) {
    const double var = std::max(0.0, (sum_sq - count * summary.mean_alg_cost * summary.mean_alg_cost) / (count - 1));
    summary.standard_error = std::sqrt(var / count);
  }
  if (kind == "four_point") {
    summary.reference_label = "reference_2D_plus_eps";
    summary.reference = 2.0 * options.D + options.eps;
  } else if (kind == "det_phase") {
    summary.reference_label = "reference_n_minus_1";
    summary.reference = static_cast<double>(options.n) - 1.0;
  } else {
    summary.reference_label = "reference_2(H_n-1)";
    for (std::size_t k = 2; k <= options.n; ++k) summary.reference += 2.0 / static_cast<double>(k);
  }
  auto text = [](double v) { return std::isinf(v) ? std::string("inf") : format_number(v); };
  csv << "summary,mean_alg_cost,," << text(summary.mean_alg_cost) << ",,\n";
  csv << "summary,standard_error,," << text(summary.standard_error) << ",,\n";
  csv << "summary," << summary.reference_label << ",," << text(summary.reference) << ",,\n";
  summary.csv = csv.str();
  return summary;
}

int cmd_adversary(const AdversaryOptions& options, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream transcript_file;
    if (options.transcript) {
      transcript_file.open(*options.transcript);
      if (!transcript_file) throw ValidationError("cannot write " + options.transcript->string());
    }
    const AdversarySummary summary = run_adversary(options, options.transcript ? &transcript_file : nullptr);
    if (options.out) {
      std::ofstream file(*options.out);
      if (!file) throw ValidationError("cannot write " + options.out->string());
      file << summary.csv;
    } else {
      out << summary.csv;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mpmd::harness
