#include "mpmd/mts.hpp"

#include <algorithm>
#include <cmath>

#include "mpmd/errors.hpp"

namespace mpmd::mts {

namespace {

Cost min_value(const Values& v) {
  Cost best = Cost::infinite();
  for (Cost c : v) best = std::min(best, c, [](Cost a, Cost b) { return a < b; });
  return best;
}

/// Smallest integer j with x <= 2^j, for finite x > 0.
int ceil_log2(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
  return m == 0.5 ? e - 1 : e;
}

}  // namespace

std::vector<double> MtsSpace::distances_from(StateIndex s) const {
  std::vector<double> out(size());
  for (StateIndex t = 0; t < size(); ++t) out[t] = distance(s, t);
  return out;
}

Values MtsSpace::envelope(const Values& v) const {
  const std::size_t n = size();
  Values out(n, Cost::infinite());
  for (StateIndex from = 0; from < n; ++from) {
    if (v[from].is_infinite()) continue;
    for (StateIndex to = 0; to < n; ++to) {
      const Cost c = v[from] + Cost(distance(from, to));
      if (c < out[to]) out[to] = c;
    }
  }
  return out;
}

ExplicitSpace::ExplicitSpace(std::vector<std::vector<double>> matrix) : matrix_(std::move(matrix)) {
  const std::size_t n = matrix_.size();
  if (n == 0) throw ValidationError("MTS space needs at least one state");
  for (std::size_t a = 0; a < n; ++a) {
    if (matrix_[a].size() != n) throw ValidationError("MTS distance matrix must be square");
    if (matrix_[a][a] != 0.0) throw ValidationError("MTS distance matrix needs a zero diagonal");
    for (std::size_t b = 0; b < n; ++b) {
      if (!(matrix_[a][b] >= 0.0) || !std::isfinite(matrix_[a][b]))
        throw ValidationError("MTS distances must be finite and nonnegative");
      if (std::abs(matrix_[a][b] - matrix_[b][a]) > kTolerance) throw ValidationError("MTS distances must be symmetric");
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (matrix_[a][c] > matrix_[a][b] + matrix_[b][c] + kTolerance)
          throw ValidationError("MTS distances violate the triangle inequality");
}

double ExplicitSpace::diameter() const {
  double d = 0.0;
  for (const auto& row : matrix_)
    for (double v : row) d = std::max(d, v);
  return d;
}

Values pad_task(Values task, std::size_t n) {
  if (task.size() > n) throw std::invalid_argument("task covers more states than the space has");
  task.resize(n, Cost::infinite());
  return task;
}

Values initial_work_function(const MtsSpace& space) {
  const auto d = space.distances_from(0);
  return Values(d.begin(), d.end());
}

Values work_function_step(const Values& prev, const Values& task, const MtsSpace& space) {
  const std::size_t n = space.size();
  if (prev.size() > n) throw std::invalid_argument("work function covers more states than the space has");
  Values base = prev.size() < n ? space.envelope(pad_task(prev, n)) : prev;
  const Values t = pad_task(task, n);
  for (std::size_t s = 0; s < n; ++s) base[s] += t[s];
  return space.envelope(base);
}

StateIndex wfa_choose(StateIndex prev_state, const Values& w_prev, const Values& w, const Values& task,
                      const MtsSpace& space) {
  const std::size_t n = w.size();
  const auto d = space.distances_from(prev_state);
  Cost best = Cost::infinite();
  for (StateIndex s = 0; s < n; ++s) {
    if (s >= task.size() || task[s].is_infinite() || w[s].is_infinite()) continue;
    const Cost v = w[s] + Cost(d[s]);
    if (v < best) best = v;
  }
  if (best.is_infinite()) throw InfeasibleError("infeasible task");

  std::optional<StateIndex> chosen;
  int chosen_rank = -1;
  for (StateIndex s = 0; s < n; ++s) {
    if (s >= task.size() || task[s].is_infinite() || w[s].is_infinite()) continue;
    if (!approx_equal(w[s] + Cost(d[s]), best)) continue;
    const bool served_here = s < w_prev.size() && approx_equal(w[s], w_prev[s] + task[s]);
    const int rank = (served_here ? 2 : 0) + (s == prev_state ? 1 : 0);
    if (rank > chosen_rank) {
      chosen = s;
      chosen_rank = rank;
    }
  }
  return *chosen;
}

Cost mts_opt(const MtsSpace& space, const std::vector<Values>& tasks) {
  Values w = initial_work_function(space);
  for (const auto& t : tasks) w = work_function_step(w, t, space);
  return min_value(w);
}

ScheduleCost schedule_cost(const MtsSpace& space, const std::vector<Values>& tasks,
                           const std::vector<StateIndex>& schedule) {
  if (tasks.size() != schedule.size()) throw std::invalid_argument("schedule and task list lengths differ");
  ScheduleCost out{Cost(0.0), Cost(0.0), Cost(0.0)};
  StateIndex prev = 0;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    out.transition += Cost(space.distance(prev, schedule[t]));
    out.processing += schedule[t] < tasks[t].size() ? tasks[t][schedule[t]] : Cost::infinite();
    prev = schedule[t];
  }
  out.total = out.transition + out.processing;
  return out;
}

std::vector<StateIndex> wfa_run(const MtsSpace& space, const std::vector<Values>& tasks) {
  Values w = initial_work_function(space);
  StateIndex s = 0;
  std::vector<StateIndex> out;
  for (const auto& t : tasks) {
    const Values padded = pad_task(t, space.size());
    Values next = work_function_step(w, padded, space);
    s = wfa_choose(s, w, next, padded, space);
    w = std::move(next);
    out.push_back(s);
  }
  return out;
}

GuessAndDouble::GuessAndDouble(const MtsSpace& space) : space_(space), version_(space.version()) {
  from_start_ = space_.distances_from(0);
  full_w_ = initial_work_function(space_);
  ball_w_ = full_w_;
}

double GuessAndDouble::radius() const { return guess_.j ? std::ldexp(1.0, *guess_.j) : 0.0; }

Values GuessAndDouble::restrict(const Values& task) const {
  Values out = pad_task(task, space_.size());
  const double r = radius();
  for (std::size_t s = 0; s < out.size(); ++s)
    if (from_start_[s] > r + kTolerance) out[s] = Cost::infinite();
  return out;
}

void GuessAndDouble::rebuild_full() {
  full_w_ = initial_work_function(space_);
  for (const auto& t : tasks_) full_w_ = work_function_step(full_w_, t, space_);
}

void GuessAndDouble::resimulate(bool adopt_state) {
  Values w = initial_work_function(space_);
  Values w_prev = w;
  StateIndex s = 0;
  for (const auto& t : tasks_) {
    const Values rt = restrict(t);
    w_prev = std::move(w);
    w = work_function_step(w_prev, rt, space_);
    if (adopt_state) s = wfa_choose(s, w_prev, w, rt, space_);
  }
  ball_w_prev_ = std::move(w_prev);
  ball_w_ = std::move(w);
  if (adopt_state) state_ = s;
}

StateIndex GuessAndDouble::step(Values task) {
  const bool metric_changed = space_.version() != version_;
  const bool grew = space_.size() != from_start_.size();
  tasks_.push_back(std::move(task));
  if (metric_changed || grew) from_start_ = space_.distances_from(0);
  if (metric_changed) {
    version_ = space_.version();
    rebuild_full();
  } else {
    full_w_ = work_function_step(full_w_, tasks_.back(), space_);
  }

  const Cost opt = min_value(full_w_);
  if (opt.is_infinite()) throw InfeasibleError("infeasible task");
  guess_.opt_trace.push_back(opt);
  std::optional<int> j;
  if (opt.raw() > 0.0) j = ceil_log2(opt.raw());
  if (j && !(std::ldexp(1.0, *j - 1) < opt.raw() && opt.raw() <= std::ldexp(1.0, *j)))
    throw InvariantViolation("guess exponent out of range");

  if (j != guess_.j) {
    if (guess_.j) {
      guess_.phase_boundaries.push_back(tasks_.size() - 1);
      ++guess_.phase_index;
    }
    guess_.j = j;
    resimulate(true);
  } else if (metric_changed) {
    resimulate(false);
    state_ = wfa_choose(state_, ball_w_prev_, ball_w_, restrict(tasks_.back()), space_);
  } else {
    const Values rt = restrict(tasks_.back());
    ball_w_prev_ = ball_w_.size() < space_.size() ? space_.envelope(pad_task(ball_w_, space_.size())) : ball_w_;
    ball_w_ = work_function_step(ball_w_prev_, rt, space_);
    state_ = wfa_choose(state_, ball_w_prev_, ball_w_, rt, space_);
  }
  schedule_.push_back(state_);
  return state_;
}

std::vector<StateIndex> guess_and_double_run(const MtsSpace& space, const std::vector<Values>& tasks) {
  GuessAndDouble gd(space);
  for (const Values& task : tasks) gd.step(task);
  return gd.schedule();
}

}  // namespace mpmd::mts
