#include "mpmd/delay.hpp"

#include <algorithm>

#include "mpmd/errors.hpp"

namespace mpmd {

namespace {

void check_interval(Timestep from, Timestep to) {
  if (from < 0 || to < from) throw ValidationError("delay phase needs 0 <= from <= to");
}

template <class Phase>
void check_disjoint(std::vector<Phase>& phases) {
  std::sort(phases.begin(), phases.end(), [](const Phase& a, const Phase& b) { return a.from < b.from; });
  for (std::size_t i = 1; i < phases.size(); ++i)
    if (phases[i].from <= phases[i - 1].to) throw ValidationError("delay phases overlap");
}

template <class Phase>
const Phase* phase_at(const std::vector<Phase>& phases, Timestep t) {
  for (const auto& p : phases)
    if (p.from <= t && t <= p.to) return &p;
  return nullptr;
}

}  // namespace

const char* kind_name(DelayModel::Kind kind) {
  switch (kind) {
    case DelayModel::Kind::general_table: return "set_table";
    case DelayModel::Kind::size_based: return "size_based";
    case DelayModel::Kind::deadline_phase: return "deadline_phase";
    case DelayModel::Kind::uniform_concave_sum: return "uniform_concave";
  }
  return "?";
}

DelayModel DelayModel::size_based(std::vector<SizePhase> phases) {
  for (const auto& p : phases) {
    check_interval(p.from, p.to);
    if (p.costs.empty()) throw ValidationError("size_based phase needs at least one cost");
    if (p.costs[0] != Cost(0.0)) throw ValidationError("size_based phase must have cost 0 for the empty set");
    for (std::size_t k = 0; k < p.costs.size(); ++k) {
      if (p.costs[k] < Cost(0.0)) throw ValidationError("delay costs must be nonnegative");
      if (k > 0 && p.costs[k] < p.costs[k - 1]) throw ValidationError("size_based costs must be nondecreasing in size");
    }
  }
  check_disjoint(phases);
  DelayModel m(Kind::size_based);
  m.size_phases_ = std::move(phases);
  return m;
}

DelayModel DelayModel::deadline_phases(const std::vector<std::tuple<Timestep, Timestep, std::size_t>>& phases) {
  std::vector<SizePhase> converted;
  for (const auto& [from, to, max_unmatched] : phases) {
    SizePhase p{from, to, std::vector<Cost>(max_unmatched + 2, Cost(0.0))};
    p.costs.back() = Cost::infinite();
    converted.push_back(std::move(p));
  }
  DelayModel m = size_based(std::move(converted));
  m.kind_ = Kind::deadline_phase;
  return m;
}

DelayModel DelayModel::set_table(std::size_t request_count, std::vector<SetTablePhase> phases) {
  if (request_count > kMaxTableRequests)
    throw ValidationError("set_table delay supports at most " + std::to_string(kMaxTableRequests) + " requests");
  const std::size_t width = std::size_t{1} << request_count;
  for (const auto& p : phases) {
    check_interval(p.from, p.to);
    if (p.values.size() != width)
      throw ValidationError("set_table row needs 2^m = " + std::to_string(width) + " values");
    if (p.values[0] != Cost(0.0)) throw ValidationError("set_table must have cost 0 for the empty set");
    for (std::size_t mask = 0; mask < width; ++mask) {
      if (p.values[mask] < Cost(0.0)) throw ValidationError("delay costs must be nonnegative");
      for (std::size_t bit = 0; bit < request_count; ++bit)
        if (!(mask >> bit & 1U) && p.values[mask | (std::size_t{1} << bit)] < p.values[mask])
          throw ValidationError("set_table must be monotone under inclusion (violated at mask " +
                                std::to_string(mask) + ")");
    }
  }
  check_disjoint(phases);
  DelayModel m(Kind::general_table);
  m.table_phases_ = std::move(phases);
  m.table_m_ = request_count;
  return m;
}

DelayModel DelayModel::uniform_concave(ConcaveFn f) {
  DelayModel m(Kind::uniform_concave_sum);
  m.concave_ = std::move(f);
  return m;
}

Cost DelayModel::size_cost(Timestep t, std::size_t k) const {
  if (!is_size_based()) throw std::logic_error("size_cost on a model that is not size-based");
  if (k == 0) return Cost(0.0);
  const SizePhase* p = phase_at(size_phases_, t);
  if (p == nullptr) return Cost(0.0);
  return p->costs[std::min(k, p->costs.size() - 1)];
}

Cost DelayModel::evaluate(Timestep t, RequestSet unmatched, std::span<const Request> requests) const {
  if (unmatched.empty()) return Cost(0.0);
  switch (kind_) {
    case Kind::size_based:
    case Kind::deadline_phase:
      return size_cost(t, unmatched.size());
    case Kind::general_table: {
      if ((unmatched.bits() >> table_m_) != 0) throw std::out_of_range("set_table: request outside the table");
      const SetTablePhase* p = phase_at(table_phases_, t);
      return p == nullptr ? Cost(0.0) : p->values[unmatched.bits()];
    }
    case Kind::uniform_concave_sum: {
      double total = 0.0;
      unmatched.for_each([&](RequestId r) {
        const double waited = static_cast<double>(t - requests[r].arrival);
        if (waited >= 0.0) total += (*concave_)(waited + 1.0) - (*concave_)(waited);
      });
      return Cost(total);
    }
  }
  return Cost(0.0);
}

std::vector<Timestep> DelayModel::change_points() const {
  std::vector<Timestep> out;
  for (const auto& p : size_phases_) {
    out.push_back(p.from);
    out.push_back(p.to + 1);
  }
  for (const auto& p : table_phases_) {
    out.push_back(p.from);
    out.push_back(p.to + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mpmd
