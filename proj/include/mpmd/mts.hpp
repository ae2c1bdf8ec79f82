#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpmd/cost.hpp"

namespace mpmd::mts {

using StateIndex = std::size_t;
/// One value per state: task vectors and work-function snapshots.
using Values = std::vector<Cost>;

/// Finite metric over states 0..size()-1; state 0 is the start state.
///
/// Spaces may grow online: new states are appended and size() increases.
/// version() changes whenever existing distances may have changed, which
/// forces consumers to rebuild cached work functions.
class MtsSpace {
 public:
  virtual ~MtsSpace() = default;

  virtual std::size_t size() const = 0;
  virtual double distance(StateIndex a, StateIndex b) const = 0;
  virtual std::vector<double> distances_from(StateIndex s) const;
  /// out(S) = min over S' of v(S') + distance(S', S).
  virtual Values envelope(const Values& v) const;
  virtual std::uint64_t version() const { return 0; }
};

/// Space given by an explicit distance matrix.
class ExplicitSpace : public MtsSpace {
 public:
  explicit ExplicitSpace(std::vector<std::vector<double>> matrix);

  std::size_t size() const override { return matrix_.size(); }
  double distance(StateIndex a, StateIndex b) const override { return matrix_[a][b]; }
  double diameter() const;

 private:
  std::vector<std::vector<double>> matrix_;
};

/// Pads `task` (given over the first task.size() states) with infinity up to n states.
Values pad_task(Values task, std::size_t n);

/// w_0(S) = distance(start, S).
Values initial_work_function(const MtsSpace& space);

/// w_t(S) = min over S' of w_{t-1}(S') + task(S') + distance(S', S). States the
/// previous snapshot does not cover start at infinity, which initializes them
/// from the cheapest old state.
Values work_function_step(const Values& prev, const Values& task, const MtsSpace& space);

/// Work-function move rule: argmin over S with finite task and finite w of
/// w(S) + distance(prev_state, S). Ties prefer states where
/// w(S) = w_prev(S) + task(S), then prev_state, then the smallest index.
/// Throws InfeasibleError("infeasible task") when no candidate exists.
StateIndex wfa_choose(StateIndex prev_state, const Values& w_prev, const Values& w, const Values& task,
                      const MtsSpace& space);

/// Exact offline optimum: min over S of the final work function.
Cost mts_opt(const MtsSpace& space, const std::vector<Values>& tasks);

struct ScheduleCost {
  Cost transition;
  Cost processing;
  Cost total;
};

/// Schedule serves tasks[t] in schedule[t] after moving there from
/// schedule[t-1] (from the start state for t = 0).
ScheduleCost schedule_cost(const MtsSpace& space, const std::vector<Values>& tasks,
                           const std::vector<StateIndex>& schedule);

/// Plain work-function algorithm over the whole space.
std::vector<StateIndex> wfa_run(const MtsSpace& space, const std::vector<Values>& tasks);

struct GuessState {
  std::optional<int> j;  ///< unset while OPT_t = 0
  std::size_t phase_index = 0;
  std::vector<std::size_t> phase_boundaries;  ///< task indices where j changed
  std::vector<Cost> opt_trace;
};

/// Guess-and-double wrapper around the work-function algorithm.
///
/// After each task the exact optimum OPT_t over the whole current space fixes
/// j with 2^(j-1) < OPT_t <= 2^j, and the solver is confined to the ball of
/// radius 2^j around the start state (radius 0 while OPT_t = 0). Whenever j
/// changes, the solver is re-simulated from scratch on the whole task history
/// with the new ball and its resulting state is adopted.
class GuessAndDouble {
 public:
  explicit GuessAndDouble(const MtsSpace& space);

  /// Consumes the next task (over the first task.size() states, rest padded
  /// with infinity) and returns the state that serves it.
  StateIndex step(Values task);

  StateIndex state() const { return state_; }
  const std::vector<StateIndex>& schedule() const { return schedule_; }
  const GuessState& guess() const { return guess_; }
  double radius() const;
  const std::vector<Values>& tasks() const { return tasks_; }

 private:
  Values restrict(const Values& task) const;
  void rebuild_full();
  void resimulate(bool adopt_state);

  const MtsSpace& space_;
  std::uint64_t version_;
  std::vector<Values> tasks_;
  Values full_w_;
  Values ball_w_prev_;
  Values ball_w_;
  std::vector<double> from_start_;
  GuessState guess_;
  StateIndex state_ = 0;
  std::vector<StateIndex> schedule_;
};

/// Runs GuessAndDouble over a whole task sequence and returns its schedule.
std::vector<StateIndex> guess_and_double_run(const MtsSpace& space, const std::vector<Values>& tasks);

}  // namespace mpmd::mts
