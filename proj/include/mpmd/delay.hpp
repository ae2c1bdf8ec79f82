#pragma once

#include <optional>
#include <tuple>
#include <span>
#include <vector>

#include "mpmd/concave_fn.hpp"
#include "mpmd/cost.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/request_set.hpp"

namespace mpmd {

/// Size-based phase: on timesteps [from, to], |U| = k costs costs[k]
/// (sizes past the end of the array reuse the last entry).
struct SizePhase {
  Timestep from = 0;
  Timestep to = 0;
  std::vector<Cost> costs;
};

/// Per-set table phase: values[mask of U] over at most 12 requests.
struct SetTablePhase {
  Timestep from = 0;
  Timestep to = 0;
  std::vector<Cost> values;
};

/// Time-indexed set delay function f_t(U).
///
/// Timesteps not covered by any phase cost nothing. The instance horizon acts
/// as a forcing time: from there on every nonempty set costs infinity (see
/// instantaneous_delay in instance.hpp).
class DelayModel {
 public:
  enum class Kind { general_table, size_based, deadline_phase, uniform_concave_sum };

  static constexpr std::size_t kMaxTableRequests = 12;

  DelayModel() : DelayModel(size_based({})) {}

  static DelayModel size_based(std::vector<SizePhase> phases);
  /// On [from, to] sets larger than max_unmatched cost infinity, others nothing.
  static DelayModel deadline_phases(const std::vector<std::tuple<Timestep, Timestep, std::size_t>>& phases);
  static DelayModel set_table(std::size_t request_count, std::vector<SetTablePhase> phases);
  static DelayModel uniform_concave(ConcaveFn f);

  Kind kind() const { return kind_; }
  bool is_size_based() const { return kind_ == Kind::size_based || kind_ == Kind::deadline_phase; }
  const std::vector<SizePhase>& size_phases() const { return size_phases_; }
  const std::vector<SetTablePhase>& table_phases() const { return table_phases_; }
  std::size_t table_request_count() const { return table_m_; }
  /// The concave function of a uniform_concave_sum model, else nullptr.
  const ConcaveFn* concave() const { return concave_ ? &*concave_ : nullptr; }

  /// f_t(|U| = k) for size-based models.
  Cost size_cost(Timestep t, std::size_t k) const;

  /// f_t(U) without the forcing rule. `requests` supplies arrival times for
  /// the uniform concave model and may be empty otherwise.
  Cost evaluate(Timestep t, RequestSet unmatched, std::span<const Request> requests) const;

  /// Timesteps at which a table-driven model may change value ({from, to+1} of
  /// every phase), sorted and deduplicated.
  std::vector<Timestep> change_points() const;

 private:
  explicit DelayModel(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<SizePhase> size_phases_;
  std::vector<SetTablePhase> table_phases_;
  std::size_t table_m_ = 0;
  std::optional<ConcaveFn> concave_;
};

const char* kind_name(DelayModel::Kind kind);

}  // namespace mpmd
