#include "mpmd/io.hpp"

#include <fstream>
#include <set>
#include <tuple>

#include "mpmd/errors.hpp"

namespace mpmd {

namespace {

void expect_fields(const json& j, const char* what, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw ValidationError(std::string(what) + " must be an object");
  std::set<std::string> known;
  for (const char* f : required) {
    known.insert(f);
    if (!j.contains(f)) throw ValidationError(std::string(what) + " is missing field '" + f + "'");
  }
  for (const char* f : optional) known.insert(f);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ValidationError(std::string(what) + " has unknown field '" + key + "'");
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

std::string point_label(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw ValidationError("point ids must be strings or integers");
}

std::vector<std::vector<double>> number_matrix(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw ValidationError(std::string(what) + " must be an array of arrays");
    auto& r = out.emplace_back();
    for (const auto& v : row) r.push_back(number(v, what));
  }
  return out;
}

std::vector<Cost> cost_list(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<Cost> out;
  for (const auto& v : j) out.push_back(cost_from_json(v));
  return out;
}

ConcaveFn concave_from_json(const json& j) {
  const std::string family = j.at("family").is_string() ? j.at("family").get<std::string>() : "";
  if (family == "power") {
    expect_fields(j, "uniform_concave delay", {"kind", "family", "p"}, {"c"});
    return ConcaveFn::power(j.contains("c") ? number(j["c"], "c") : 1.0, number(j["p"], "p"));
  }
  if (family == "log") {
    expect_fields(j, "uniform_concave delay", {"kind", "family"}, {"c"});
    return ConcaveFn::log(j.contains("c") ? number(j["c"], "c") : 1.0);
  }
  if (family == "piecewise_linear") {
    expect_fields(j, "uniform_concave delay", {"kind", "family", "breakpoints"});
    std::vector<std::pair<double, double>> bps;
    for (const auto& row : number_matrix(j["breakpoints"], "breakpoints")) {
      if (row.size() != 2) throw ValidationError("breakpoints must be [x, y] pairs");
      bps.emplace_back(row[0], row[1]);
    }
    return ConcaveFn::piecewise_linear(std::move(bps));
  }
  throw ValidationError("unknown concave family '" + family + "' (expected power, log or piecewise_linear)");
}

json concave_to_json(const ConcaveFn& f) {
  switch (f.family()) {
    case ConcaveFn::Family::power:
      return {{"kind", "uniform_concave"}, {"family", "power"}, {"c", f.c()}, {"p", f.p()}};
    case ConcaveFn::Family::log:
      return {{"kind", "uniform_concave"}, {"family", "log"}, {"c", f.c()}};
    case ConcaveFn::Family::piecewise_linear: {
      json bps = json::array();
      for (const auto& [x, y] : f.breakpoints()) bps.push_back({x, y});
      return {{"kind", "uniform_concave"}, {"family", "piecewise_linear"}, {"breakpoints", bps}};
    }
  }
  return {};
}

}  // namespace

json cost_to_json(Cost c) {
  if (c.is_infinite()) return "inf";
  return c.raw();
}

Cost cost_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return Cost::infinite();
  if (!j.is_number()) throw ValidationError("cost must be a number or \"inf\"");
  const double v = j.get<double>();
  if (v < 0.0) throw ValidationError("costs must be nonnegative");
  return Cost(v);
}

DelayModel delay_from_json(const json& j, std::size_t request_count) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ValidationError("delay must be an object with a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "size_based") {
    expect_fields(j, "size_based delay", {"kind", "phases"});
    std::vector<SizePhase> phases;
    for (const auto& p : j["phases"]) {
      expect_fields(p, "size_based phase", {"from", "to", "costs"});
      phases.push_back({integer(p["from"], "from"), integer(p["to"], "to"), cost_list(p["costs"], "costs")});
    }
    return DelayModel::size_based(std::move(phases));
  }
  if (kind == "deadline_phase") {
    expect_fields(j, "deadline_phase delay", {"kind", "phases"});
    std::vector<std::tuple<Timestep, Timestep, std::size_t>> phases;
    for (const auto& p : j["phases"]) {
      expect_fields(p, "deadline phase", {"from", "to", "max_unmatched"});
      const auto k = integer(p["max_unmatched"], "max_unmatched");
      if (k < 0) throw ValidationError("max_unmatched must be nonnegative");
      phases.emplace_back(integer(p["from"], "from"), integer(p["to"], "to"), static_cast<std::size_t>(k));
    }
    return DelayModel::deadline_phases(phases);
  }
  if (kind == "set_table") {
    expect_fields(j, "set_table delay", {"kind", "phases"});
    std::vector<SetTablePhase> phases;
    for (const auto& p : j["phases"]) {
      expect_fields(p, "set_table phase", {"from", "to", "values"});
      phases.push_back({integer(p["from"], "from"), integer(p["to"], "to"), cost_list(p["values"], "values")});
    }
    return DelayModel::set_table(request_count, std::move(phases));
  }
  if (kind == "uniform_concave") {
    if (!j.contains("family")) throw ValidationError("uniform_concave delay is missing field 'family'");
    return DelayModel::uniform_concave(concave_from_json(j));
  }
  throw ValidationError("unknown delay kind '" + kind + "'");
}

json delay_to_json(const DelayModel& delay) {
  json phases = json::array();
  switch (delay.kind()) {
    case DelayModel::Kind::deadline_phase:
      for (const auto& p : delay.size_phases())
        phases.push_back({{"from", p.from}, {"to", p.to}, {"max_unmatched", p.costs.size() - 2}});
      return {{"kind", "deadline_phase"}, {"phases", phases}};
    case DelayModel::Kind::size_based:
      for (const auto& p : delay.size_phases()) {
        json costs = json::array();
        for (Cost c : p.costs) costs.push_back(cost_to_json(c));
        phases.push_back({{"from", p.from}, {"to", p.to}, {"costs", costs}});
      }
      return {{"kind", "size_based"}, {"phases", phases}};
    case DelayModel::Kind::general_table:
      for (const auto& p : delay.table_phases()) {
        json values = json::array();
        for (Cost c : p.values) values.push_back(cost_to_json(c));
        phases.push_back({{"from", p.from}, {"to", p.to}, {"values", values}});
      }
      return {{"kind", "set_table"}, {"phases", phases}};
    case DelayModel::Kind::uniform_concave_sum:
      return concave_to_json(*delay.concave());
  }
  return {};
}

Instance instance_from_json(const json& j) {
  expect_fields(j, "instance", {"points", "requests", "delay", "horizon"},
                {"dist_matrix", "coords", "metric", "allow_zero_distance"});
  if (!j["points"].is_array()) throw ValidationError("points must be an array");
  std::vector<std::string> labels;
  for (const auto& p : j["points"]) labels.push_back(point_label(p));
  const bool allow_zero = j.contains("allow_zero_distance") && j["allow_zero_distance"].get<bool>();

  Instance inst;
  const bool has_matrix = j.contains("dist_matrix");
  const bool has_metric = j.contains("metric");
  if (has_matrix == has_metric) throw ValidationError("instance needs exactly one of dist_matrix or metric");
  if (has_matrix) {
    if (j.contains("coords")) throw ValidationError("coords given together with dist_matrix");
    inst.metric = MetricSpace(labels, number_matrix(j["dist_matrix"], "dist_matrix"), allow_zero);
  } else {
    const std::string metric = j["metric"].is_string() ? j["metric"].get<std::string>() : "";
    if (metric == "euclidean") {
      if (!j.contains("coords")) throw ValidationError("metric 'euclidean' needs coords");
      inst.metric = MetricSpace::euclidean(labels, number_matrix(j["coords"], "coords"), allow_zero);
    } else if (metric == "uniform") {
      if (j.contains("coords")) throw ValidationError("metric 'uniform' takes no coords");
      std::vector<std::vector<double>> m(labels.size(), std::vector<double>(labels.size(), 1.0));
      for (std::size_t i = 0; i < labels.size(); ++i) m[i][i] = 0.0;
      inst.metric = MetricSpace(labels, m, allow_zero);
    } else {
      throw ValidationError("unknown metric '" + metric + "' (expected euclidean or uniform)");
    }
  }

  if (!j["requests"].is_array()) throw ValidationError("requests must be an array");
  for (const auto& r : j["requests"]) {
    expect_fields(r, "request", {"id", "point", "arrival"});
    const auto id = integer(r["id"], "request id");
    if (id < 0) throw ValidationError("request ids must be nonnegative");
    const std::string label = point_label(r["point"]);
    const auto point = inst.metric.find(label);
    if (!point) throw ValidationError("request " + std::to_string(id) + " names unknown point '" + label + "'");
    inst.requests.push_back({static_cast<RequestId>(id), *point, integer(r["arrival"], "arrival")});
  }
  inst.horizon = integer(j["horizon"], "horizon");
  inst.delay = delay_from_json(j["delay"], inst.requests.size());
  validate(inst);
  return inst;
}

json instance_to_json(const Instance& instance) {
  json matrix = json::array();
  for (PointId a = 0; a < instance.metric.size(); ++a) {
    json row = json::array();
    for (PointId b = 0; b < instance.metric.size(); ++b) row.push_back(instance.metric.distance(a, b));
    matrix.push_back(row);
  }
  json requests = json::array();
  for (const auto& r : instance.requests)
    requests.push_back({{"id", r.id}, {"point", instance.metric.label(r.point)}, {"arrival", r.arrival}});
  json out = {{"points", instance.metric.labels()},
              {"dist_matrix", matrix},
              {"requests", requests},
              {"delay", delay_to_json(instance.delay)},
              {"horizon", instance.horizon}};
  if (instance.metric.allows_zero_distance()) out["allow_zero_distance"] = true;
  return out;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid instance: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace mpmd
