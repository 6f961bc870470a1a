#include <algorithm>
#include <cmath>
#include <set>

#include "qdc/core/errors.hpp"
#include "qdc/ft.hpp"

namespace qdc::ft {

std::string to_string(DelayModel model) {
  switch (model) {
    case DelayModel::sqrt: return "sqrt";
    case DelayModel::log: return "log";
    case DelayModel::none: return "none";
  }
  return "none";
}

DelayModel parse_delay_model(const std::string& text) {
  if (text == "sqrt") return DelayModel::sqrt;
  if (text == "log") return DelayModel::log;
  if (text == "none") return DelayModel::none;
  throw ConfigError("delay model must be sqrt, log or none, got '" + text + "'");
}

std::vector<int> DistanceSet::values() const {
  std::vector<int> out;
  for (int d = min; d <= max; ++d)
    if (!odd_only || d % 2 == 1) out.push_back(d);
  return out;
}

void FtCostParams::validate() const {
  if (t_count_total < 1) throw ConfigError("t_count_total must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  if (!(budget > 0.0 && budget < 1.0)) throw ConfigError("budget must lie in (0, 1)");
  if (!(distillation_share > 0.0 && distillation_share < 1.0))
    throw ConfigError("distillation_share must lie in (0, 1)");
  if (!(f_outsourced >= 0.0 && f_outsourced <= 1.0)) throw ConfigError("f_outsourced must lie in [0, 1]");
  if (tiles < 1) throw ConfigError("tiles must be >= 1");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be a finite value >= 0");
  if (cycles_per_distill < 1) throw ConfigError("cycles_per_distill must be >= 1");
  if (factories < 1) throw ConfigError("factories must be >= 1");
  if (factory_tiles[0] > tiles) throw ConfigError("level-1 factory tiles exceed the tile count");
  if (!(io_cycles_per_outsourced_state >= 0.0)) throw ConfigError("io_cycles_per_outsourced_state must be >= 0");
  if (distances.min < 3 || distances.max < distances.min || distances.max > 999)
    throw ConfigError("distance range must satisfy 3 <= d_min <= d_max <= 999");
  if (distances.values().empty()) throw ConfigError("distance set is empty");
  if (!(cycle_time_us > 0.0)) throw ConfigError("cycle_time_us must be positive");
}

nlohmann::json FtCostParams::to_json() const {
  return {{"logical_qubits", logical_qubits},
          {"t_count_total", t_count_total},
          {"p", p},
          {"budget", budget},
          {"distillation_share", distillation_share},
          {"f_outsourced", f_outsourced},
          {"tiles", tiles},
          {"kappa", kappa},
          {"delay_model", to_string(delay_model)},
          {"cycles_per_distill", cycles_per_distill},
          {"factories", factories},
          {"factory_tiles", factory_tiles},
          {"io_cycles_per_outsourced_state", io_cycles_per_outsourced_state},
          {"d_min", distances.min},
          {"d_max", distances.max},
          {"odd_only", distances.odd_only},
          {"cycle_time_us", cycle_time_us}};
}

FtCostParams FtCostParams::from_json(const nlohmann::json& doc) { return from_json(doc, FtCostParams{}); }

FtCostParams FtCostParams::from_json(const nlohmann::json& doc, FtCostParams base) {
  if (!doc.is_object()) throw ConfigError("estimator parameters must be a JSON object");
  static const std::set<std::string> known{
      "logical_qubits", "t_count_total", "p", "budget", "distillation_share", "f_outsourced",
      "tiles", "kappa", "delay_model", "cycles_per_distill", "factories", "factory_tiles",
      "io_cycles_per_outsourced_state", "d_min", "d_max", "odd_only", "cycle_time_us"};
  for (const auto& [key, _] : doc.items())
    if (!known.contains(key)) throw ConfigError("unknown estimator key '" + key + "'");
  try {
    auto read = [&](const char* key, auto& field) {
      if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    read("logical_qubits", base.logical_qubits);
    read("t_count_total", base.t_count_total);
    read("p", base.p);
    read("budget", base.budget);
    read("distillation_share", base.distillation_share);
    read("f_outsourced", base.f_outsourced);
    read("tiles", base.tiles);
    read("kappa", base.kappa);
    if (doc.contains("delay_model")) base.delay_model = parse_delay_model(doc.at("delay_model").get<std::string>());
    read("cycles_per_distill", base.cycles_per_distill);
    read("factories", base.factories);
    read("factory_tiles", base.factory_tiles);
    read("io_cycles_per_outsourced_state", base.io_cycles_per_outsourced_state);
    read("d_min", base.distances.min);
    read("d_max", base.distances.max);
    read("odd_only", base.distances.odd_only);
    read("cycle_time_us", base.cycle_time_us);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed estimator parameter: ") + e.what());
  }
  base.validate();
  return base;
}

double logical_error_rate(double p, int d) {
  if (d < 3) throw ConfigError("code distance must be >= 3");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  return 0.1 * std::pow(100.0 * p, (d + 1) / 2.0) / d;
}

bool above_threshold(double p) { return p >= 0.01; }

double distillation_failure(double p, int level) {
  if (level < 1) throw ConfigError("distillation level must be >= 1");
  double f = 35.0 * p * p * p;
  for (int l = 1; l < level; ++l) f = 35.0 * f * f * f;
  return f;
}

DistillationScheme select_distillation(std::uint64_t states_needed, double p, double error_share) {
  const double states = static_cast<double>(states_needed);
  for (int level = 1; level <= kMaxDistillationLevel; ++level) {
    const double f = distillation_failure(p, level);
    if (states * f < error_share) return {level, f, states * f};
  }
  throw InfeasibleError("no distillation level <= " + std::to_string(kMaxDistillationLevel) +
                        " keeps " + std::to_string(states_needed) + " states below error share " +
                        std::to_string(error_share));
}

std::uint64_t tiles_for_level(const FtCostParams& params, int level) {
  if (level < 1 || level > kMaxDistillationLevel) throw ConfigError("distillation level out of range");
  return params.tiles - params.factory_tiles[0] + params.factory_tiles[static_cast<std::size_t>(level - 1)];
}

int required_distance(const FtCostParams& params, std::uint64_t tiles, double cycles_with_delay,
                      double logical_share) {
  const auto ds = params.distances.values();
  const double load = static_cast<double>(tiles) * std::max(cycles_with_delay, 1.0);
  auto ok = [&](int d) { return load * logical_error_rate(params.p, d) < logical_share; };
  if (!above_threshold(params.p)) {
    // The constraint is monotone in d below threshold.
    auto it = std::partition_point(ds.begin(), ds.end(), [&](int d) { return !ok(d); });
    if (it != ds.end()) return *it;
  } else {
    for (int d : ds)
      if (ok(d)) return d;
  }
  throw InfeasibleError("no code distance <= " + std::to_string(params.distances.max) +
                        " meets the logical error share");
}

std::uint64_t code_cycles_for_distillation(std::uint64_t states_needed, int level, int d,
                                           const FtCostParams& params) {
  if (states_needed == 0) return 0;
  std::uint64_t per_state = params.cycles_per_distill * static_cast<std::uint64_t>(d);
  for (int l = 1; l < level; ++l) per_state *= 15;
  const std::uint64_t total = states_needed * per_state;
  return (total + params.factories - 1) / params.factories;
}

double delay_factor(std::uint64_t n, DelayModel model, double kappa) {
  if (n < 2) throw ConfigError("delay factor needs N >= 2");
  switch (model) {
    case DelayModel::sqrt: return kappa * std::sqrt(static_cast<double>(n));
    case DelayModel::log: return kappa * std::log2(static_cast<double>(n));
    case DelayModel::none: return 0.0;
  }
  return 0.0;
}

nlohmann::json CostReport::to_json() const {
  return {{"scenario", scenario},
          {"states", states},
          {"outsourced_states", outsourced_states},
          {"chosen_level", chosen_level},
          {"chosen_distance", chosen_distance},
          {"tiles", tiles},
          {"code_cycles", code_cycles},
          {"io_cycles", io_cycles},
          {"delay", delay},
          {"cycles_with_delay", cycles_with_delay},
          {"distillation_error", distillation_error},
          {"logical_error", logical_error},
          {"total_error", total_error},
          {"wall_time_s", wall_time_s},
          {"iterations", iterations},
          {"warnings", warnings}};
}

namespace {

CostReport solve(const FtCostParams& params, std::string scenario, std::uint64_t states,
                 std::uint64_t outsourced, double delay) {
  params.validate();
  CostReport r;
  r.scenario = std::move(scenario);
  r.states = states;
  r.outsourced_states = outsourced;
  r.delay = delay;
  if (above_threshold(params.p)) r.warnings.push_back("p at or above the 1% fit threshold");

  const double distill_share = params.budget * params.distillation_share;
  const double logical_share = params.budget - distill_share;
  const auto scheme = select_distillation(states, params.p, distill_share);
  r.chosen_level = scheme.level;
  r.distillation_error = scheme.total_failure;
  r.tiles = tiles_for_level(params, scheme.level);

  auto cycles_at = [&](int d) {
    r.code_cycles = code_cycles_for_distillation(states, scheme.level, d, params);
    r.io_cycles = static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(outsourced) * params.io_cycles_per_outsourced_state * d));
    return static_cast<double>(r.code_cycles + r.io_cycles) * (1.0 + delay);
  };

  constexpr int kMaxIterations = 10;
  int d = params.distances.values().front();
  bool converged = false;
  for (int it = 1; it <= kMaxIterations; ++it) {
    r.iterations = it;
    const int next = required_distance(params, r.tiles, cycles_at(d), logical_share);
    if (next == d) {
      converged = true;
      break;
    }
    d = next;
  }
  if (!converged) throw InfeasibleError("distance/cycle fixed point not reached in 10 iterations");

  r.chosen_distance = d;
  r.cycles_with_delay = cycles_at(d);
  r.logical_error = static_cast<double>(r.tiles) * std::max(r.cycles_with_delay, 1.0) *
                    logical_error_rate(params.p, d);
  r.total_error = r.distillation_error + r.logical_error;
  r.wall_time_s = r.cycles_with_delay * params.cycle_time_us * 1e-6;
  return r;
}

}  // namespace

CostReport estimate_without_qdc(const FtCostParams& params) {
  return solve(params, "without_qdc", params.t_count_total, 0, 0.0);
}

CostReport estimate_with_qdc(const FtCostParams& params, std::uint64_t n, DelayModel model) {
  params.validate();
  const auto total = static_cast<double>(params.t_count_total);
  const auto user = static_cast<std::uint64_t>(std::llround((1.0 - params.f_outsourced) * total));
  const std::uint64_t outsourced = params.t_count_total - std::min(user, params.t_count_total);
  const double delay = outsourced > 0 ? delay_factor(n, model, params.kappa) : 0.0;
  return solve(params, "with_qdc", user, outsourced, delay);
}

RelativeCost relative_time_cost(const FtCostParams& params, std::uint64_t n, DelayModel model) {
  RelativeCost rc{0.0, estimate_with_qdc(params, n, model), estimate_without_qdc(params)};
  rc.ratio = rc.with_qdc.cycles_with_delay / rc.without_qdc.cycles_with_delay;
  return rc;
}

RelativeCost relative_time_cost(const FtCostParams& params, std::uint64_t n) {
  return relative_time_cost(params, n, params.delay_model);
}

}  // namespace qdc::ft
