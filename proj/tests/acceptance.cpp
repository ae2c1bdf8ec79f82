// Runs every acceptance criterion once and prints one PASS/FAIL line each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mpmd/adversaries.hpp"
#include "mpmd/concave_pd.hpp"
#include "mpmd/errors.hpp"
#include "mpmd/generators.hpp"
#include "mpmd/mts.hpp"
#include "mpmd/oracles.hpp"
#include "mpmd/pipeline.hpp"
#include "mpmd/reduction.hpp"
#include "support.hpp"

using namespace mpmd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return std::isinf(v) ? "inf" : format_number(v); }

std::vector<RequestSet> even_subsets(std::size_t m) {
  std::vector<RequestSet> out;
  for (RequestSet::Bits mask = 0; mask < (RequestSet::Bits{1} << m); ++mask) {
    if (RequestSet(mask).size() % 2 == 0) out.emplace_back(mask);
  }
  return out;
}

Outcome transition_cost_oracle() {
  Rng rng(1001);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = trial % 2 == 0 ? 4 : 6;
    const Instance inst = random_size_based_instance(m, 5, 4, rng);
    const auto metric = reduction::RequestMetric::from_instance(inst, inst.all());
    const auto states = even_subsets(m);
    for (RequestSet a : states) {
      for (RequestSet b : states) {
        const double fast = reduction::transition_cost(a, b, metric);
        const double slow = oracles::dijkstra_transition_cost(a, b, metric);
        worst = std::max(worst, std::abs(fast - slow));
        ++pairs;
      }
    }
  }
  return {worst <= 1e-9, "50 instances, " + std::to_string(pairs) + " state pairs, max |diff| " + fmt(worst)};
}

Outcome monotone_domination() {
  Rng rng(1002);
  double worst_total = -std::numeric_limits<double>::infinity();
  double worst_claim = -std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  bool monotone = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + 2 * static_cast<std::size_t>(trial % 3);
    const Instance inst = random_size_based_instance(m, 4, 5, rng);
    const auto metrics = testing::metrics_by_time(inst);
    const auto dense = testing::densify_by_time(testing::random_schedule(inst, rng), metrics);
    reduction::MonotoneConverter conv;
    std::vector<reduction::ScheduleStep> converted;
    for (const auto& step : dense) {
      const auto st = conv.step(step.state, metrics[static_cast<std::size_t>(step.t)]);
      worst_claim = std::max(worst_claim, st.claim_lhs - st.claim_rhs);
      if (!converted.empty() && !converted.back().state.subset_of(st.output)) monotone = false;
      converted.push_back({st.output, step.synthetic, step.t});
      ++steps;
    }
    const auto proc = [&](Timestep t, RequestSet s) { return instantaneous_delay(inst, t, inst.arrived_by(t) - s); };
    const auto at = [&](Timestep t) -> const reduction::RequestMetric& { return metrics[static_cast<std::size_t>(t)]; };
    const Cost in = reduction::schedule_cost(dense, proc, at).total;
    const Cost out = reduction::schedule_cost(converted, proc, at).total;
    worst_total = std::max(worst_total, out.raw() - in.raw());
  }
  const bool pass = worst_total <= 1e-9 && worst_claim <= 1e-9 && monotone;
  return {pass, "200 schedules, " + std::to_string(steps) + " steps, max (converted - input) " + fmt(worst_total) +
                    ", max claim gap " + fmt(worst_claim) + (monotone ? "" : ", output not monotone")};
}

Outcome four_point() {
  const auto tr = adversary::four_point_adversary(100.0, 1.0, "nonclairvoyant");
  const bool pass = approx_le(Cost(200.0), tr.alg_cost, 0.0) && tr.opt_cost == Cost(1.0);
  std::string detail = "alg_cost " + tr.alg_cost.to_string() + ", opt_cost " + tr.opt_cost.to_string();
  if (!tr.feasible) detail += " (pipeline transcript infeasible: " + tr.infeasibility + ")";
  const auto greedy = adversary::four_point_adversary(100.0, 1.0, "greedy");
  detail += "; greedy baseline alg_cost " + greedy.alg_cost.to_string();
  return {pass, detail};
}

Outcome det_phase() {
  bool pass = true;
  std::string detail;
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto tr = adversary::uniform_phase_adversary(n, "nonclairvoyant", false, 0);
    const bool ok = tr.feasible && tr.alg_distance == Cost(static_cast<double>(n - 1)) && tr.opt_oracle &&
                    *tr.opt_oracle == Cost(1.0) && tr.ratio == static_cast<double>(n - 1);
    pass = pass && ok;
    detail += (detail.empty() ? "" : ", ") + ("n=" + std::to_string(n) + " alg " + tr.alg_distance.to_string() +
                                               " opt " + (tr.opt_oracle ? tr.opt_oracle->to_string() : "NA") +
                                               " ratio " + fmt(tr.ratio));
  }
  return {pass, detail};
}

struct PhaseStats {
  double mean = 0.0;
  double se = 0.0;
};

PhaseStats rand_phase_stats(std::size_t n, const std::string& algo, std::size_t seeds) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const double c = adversary::uniform_phase_adversary(n, algo, true, splitmix64(5000 + s)).alg_cost.raw();
    sum += c;
    sum_sq += c * c;
  }
  const double k = static_cast<double>(seeds);
  PhaseStats st;
  st.mean = sum / k;
  st.se = std::sqrt(std::max(0.0, (sum_sq - k * st.mean * st.mean) / (k - 1)) / k);
  return st;
}

double harmonic_bound(std::size_t n) {
  double b = 0.0;
  for (std::size_t k = 2; k <= n; ++k) b += 2.0 / static_cast<double>(k);
  return b;
}

Outcome rand_phase() {
  const std::size_t n = 16;
  try {
    const PhaseStats st = rand_phase_stats(n, "nonclairvoyant", 2000);
    const double bound = harmonic_bound(n);
    return {st.mean >= bound - 3.0 * st.se,
            "n=16, 2000 seeds, mean " + fmt(st.mean) + ", SE " + fmt(st.se) + ", bound " + fmt(bound)};
  } catch (const ScaleError& e) {
    std::string detail = "n=16 not runnable by the exact pipeline (" + std::string(e.what()) +
                         "; 2n-2 = 30 requests)";
    const PhaseStats small = rand_phase_stats(7, "nonclairvoyant", 2000);
    detail += "; supplementary pipeline n=7, 2000 seeds: mean " + fmt(small.mean) + ", SE " + fmt(small.se) +
              ", bound " + fmt(harmonic_bound(7)) + (small.mean >= harmonic_bound(7) - 3 * small.se ? " (met)" : " (missed)");
    const PhaseStats greedy = rand_phase_stats(16, "greedy", 2000);
    detail += "; greedy baseline n=16, 2000 seeds: mean " + fmt(greedy.mean) + ", SE " + fmt(greedy.se) + ", bound " +
              fmt(harmonic_bound(16)) + (greedy.mean >= harmonic_bound(16) - 3 * greedy.se ? " (met)" : " (missed)");
    return {false, detail};
  }
}

struct MtsTrial {
  mts::ExplicitSpace space;
  std::vector<mts::Values> tasks;
};

std::vector<MtsTrial> mts_trials() {
  Rng rng(1006);
  std::vector<MtsTrial> out;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const std::size_t t = 1 + static_cast<std::size_t>((trial / 5) % 4);
    auto space = random_mts_space(n, rng);
    auto tasks = random_tasks(n, t, rng);
    out.push_back({std::move(space), std::move(tasks)});
  }
  return out;
}

Outcome work_function() {
  double worst_opt = 0.0;
  double worst_bound = -std::numeric_limits<double>::infinity();
  for (const MtsTrial& tr : mts_trials()) {
    const Cost opt = mts::mts_opt(tr.space, tr.tasks);
    const Cost exhaustive = oracles::exhaustive_mts_opt(tr.space, tr.tasks);
    worst_opt = std::max(worst_opt, std::abs(opt.raw() - exhaustive.raw()));
    const Cost alg = mts::schedule_cost(tr.space, tr.tasks, mts::wfa_run(tr.space, tr.tasks)).total;
    const double n = static_cast<double>(tr.space.size());
    worst_bound = std::max(worst_bound, alg.raw() - ((2 * n - 1) * opt.raw() + tr.space.diameter()));
  }
  return {worst_opt <= 1e-9 && worst_bound <= 1e-9,
          "100 spaces (N 2..6, T 1..4), max |mts_opt - exhaustive| " + fmt(worst_opt) +
              ", max alg - ((2N-1)OPT + diameter) " + fmt(worst_bound)};
}

Outcome guess_and_double() {
  double worst = -std::numeric_limits<double>::infinity();
  for (const MtsTrial& tr : mts_trials()) {
    const Cost opt = mts::mts_opt(tr.space, tr.tasks);
    const Cost alg = mts::schedule_cost(tr.space, tr.tasks, mts::guess_and_double_run(tr.space, tr.tasks)).total;
    const double n = static_cast<double>(tr.space.size());
    worst = std::max(worst, alg.raw() - 6.0 * ((2 * n - 1) + 2) * opt.raw());
  }
  return {worst <= 1e-9, "100 trials, max alg - 6((2N-1)+2)OPT " + fmt(worst)};
}

Outcome end_to_end() {
  Rng rng(1008);
  std::size_t verified = 0;
  std::size_t audited = 0;
  std::size_t audit_ok = 0;
  std::string first_failure;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 2 + 2 * static_cast<std::size_t>(trial % 4);
    const Instance inst = random_size_based_instance(m, 5, 6, rng);
    const MatchingSolution sol = solve_nonclairvoyant(inst, true);
    bool ok = verify_solution(sol, inst).ok && sol.edges.size() * 2 == m;
    for (std::size_t i = 1; i < sol.trace.size(); ++i) ok = ok && sol.trace[i - 1].matched.subset_of(sol.trace[i].matched);
    if (ok) {
      ++verified;
    } else if (first_failure.empty()) {
      first_failure = "trial " + std::to_string(trial);
    }
    if (trial % 10 == 0) {
      ++audited;
      const Timestep cutoff = static_cast<Timestep>(trial / 10) % inst.horizon;
      const AuditResult audit = audit_nonclairvoyance(inst, cutoff, splitmix64(static_cast<std::uint64_t>(trial)));
      if (audit.ok && audit.queries_in_order) ++audit_ok;
    }
  }
  return {verified == 500 && audit_ok == audited && audited == 50,
          std::to_string(verified) + "/500 verified monotone perfect matchings, " + std::to_string(audit_ok) + "/" +
              std::to_string(audited) + " identical decision prefixes under future perturbation" +
              (first_failure.empty() ? "" : ", first failure " + first_failure)};
}

Outcome concave_primal_dual() {
  Rng rng(1009);
  std::size_t ok_runs = 0;
  std::size_t slices = 0;
  double worst_weak = -std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  std::string first_failure;
  for (int trial = 0; trial < 200; ++trial) {
    const ConcaveFn f = trial % 2 == 0 ? ConcaveFn::sqrt() : ConcaveFn::log();
    const std::size_t m = 2 + 2 * static_cast<std::size_t>(trial % 4);
    const Instance inst = random_concave_instance(m, 5, 12, f, rng);
    const concave::ConcaveResult res = concave::solve_concave(inst, true);
    slices += res.slices_audited;
    std::vector<std::vector<double>> c(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) c[i][j] = concave_time_dist(inst.metric, inst.requests[i], inst.requests[j], f);
    const double opt = oracles::min_cost_perfect_matching(c).cost;
    const double total = res.solution.total.raw();
    worst_weak = std::max(worst_weak, res.dual.dual_objective - opt);
    if (opt > 0) worst_ratio = std::max(worst_ratio, total / (8.0 * static_cast<double>(m) * opt));
    const bool ok = res.audit_failures.empty() && verify_solution(res.solution, inst).ok &&
                    res.solution.edges.size() * 2 == m && res.dual.dual_objective <= opt + 1e-9 &&
                    total <= 8.0 * static_cast<double>(m) * opt + 1e-9;
    if (ok) {
      ++ok_runs;
    } else if (first_failure.empty()) {
      first_failure = "trial " + std::to_string(trial) +
                      (res.audit_failures.empty() ? std::string() : ": " + res.audit_failures.front());
    }
  }
  return {ok_runs == 200, std::to_string(ok_runs) + "/200 runs clean, " + std::to_string(slices) +
                              " audited slices, max dual - OPT " + fmt(worst_weak) + ", max cost/(8m OPT) " +
                              fmt(worst_ratio) + (first_failure.empty() ? "" : ", first failure " + first_failure)};
}

Outcome triangle_inequality() {
  Rng rng(1010);
  const std::vector<ConcaveFn> fns = {ConcaveFn::sqrt(), ConcaveFn::log(), ConcaveFn::identity(),
                                      ConcaveFn::power(2.0, 0.3),
                                      ConcaveFn::piecewise_linear({{0, 0}, {2, 3}, {5, 4.5}, {9, 5}})};
  const MetricSpace space = random_euclidean_metric(12, rng);
  std::uniform_int_distribution<std::size_t> point(0, space.size() - 1);
  std::uniform_int_distribution<Timestep> arrival(0, 60);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100000; ++i) {
    const ConcaveFn& f = fns[static_cast<std::size_t>(i) % fns.size()];
    const Request u{0, point(rng), arrival(rng)};
    const Request v{1, point(rng), arrival(rng)};
    const Request w{2, point(rng), arrival(rng)};
    const double lhs = concave_time_dist(space, u, v, f);
    const double rhs = concave_time_dist(space, u, w, f) + concave_time_dist(space, w, v, f);
    worst = std::max(worst, lhs - rhs);
  }
  return {worst <= 1e-9, "100000 triples over 5 functions, max d(u,v) - d(u,w) - d(w,v) " + fmt(worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"transition cost matches the explicit-graph oracle", transition_cost_oracle},
      {"monotone conversion never costs more", monotone_domination},
      {"four-point adversary, D=100 eps=1", four_point},
      {"deterministic phase adversary, n=3..8", det_phase},
      {"randomized phase adversary, n=16", rand_phase},
      {"work function optimum and WFA bound", work_function},
      {"guess-and-double envelope", guess_and_double},
      {"end-to-end pipeline feasibility and non-clairvoyance", end_to_end},
      {"concave primal-dual audit, duality and 8m bound", concave_primal_dual},
      {"concave time-augmented triangle inequality", triangle_inequality},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s: %s (%.1fs) %s\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), secs,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
