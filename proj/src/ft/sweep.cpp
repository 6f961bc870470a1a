#include <cmath>
#include <cstdio>
#include <sstream>

#include "qdc/core/errors.hpp"
#include "qdc/core/layout.hpp"
#include "qdc/ft.hpp"

namespace qdc::ft {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void add_flag(std::string& flags, const std::string& flag) {
  if (!flags.empty()) flags += ';';
  flags += flag;
}

nlohmann::json cost_json(const std::optional<RelativeCost>& rc) {
  if (!rc) return nullptr;
  return {{"ratio", rc->ratio}, {"with_qdc", rc->with_qdc.to_json()},
          {"without_qdc", rc->without_qdc.to_json()}};
}

}  // namespace

std::vector<std::uint64_t> powers_of_two(int log_min, int log_max) {
  if (log_min < 1 || log_max < log_min || log_max > 62)
    throw ConfigError("N range must satisfy 1 <= log2 N_min <= log2 N_max <= 62");
  std::vector<std::uint64_t> out;
  for (int k = log_min; k <= log_max; ++k) out.push_back(std::uint64_t{1} << k);
  return out;
}

std::vector<SweepRow> sweep(const FtCostParams& params, const std::vector<std::uint64_t>& ns) {
  params.validate();
  const bool delay_free = params.delay_model == DelayModel::none;
  std::vector<SweepRow> rows;
  rows.reserve(ns.size());
  for (const auto n : ns) {
    if (n < 2 || !is_power_of_two(n)) throw ConfigError("sweep N values must be powers of two >= 2");
    SweepRow row;
    row.n = n;
    auto run = [&](DelayModel model, std::optional<RelativeCost>& slot, const char* tag) {
      try {
        slot = relative_time_cost(params, n, delay_free ? DelayModel::none : model);
      } catch (const InfeasibleError& e) {
        add_flag(row.flags, std::string("infeasible_") + tag);
      }
    };
    run(DelayModel::sqrt, row.sqrt_cost, "sqrt");
    run(DelayModel::log, row.log_cost, "log");
    if (row.sqrt_cost) {
      row.ratio_sqrt = row.sqrt_cost->ratio;
      row.d_with = row.sqrt_cost->with_qdc.chosen_distance;
      row.d_without = row.sqrt_cost->without_qdc.chosen_distance;
    }
    if (row.log_cost) {
      row.ratio_log = row.log_cost->ratio;
      row.d_with_log = row.log_cost->with_qdc.chosen_distance;
      row.d_without = row.log_cost->without_qdc.chosen_distance;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double threshold_preset_kappa(const FtCostParams& params, double threshold, std::uint64_t anchor_n) {
  auto ratio_at = [&](double kappa) {
    FtCostParams p = params;
    p.kappa = kappa;
    return relative_time_cost(p, anchor_n, DelayModel::log).ratio;
  };
  if (ratio_at(0.0) >= threshold)
    throw InfeasibleError("delay-free ratio already exceeds threshold " + num(threshold));
  double lo = 0.0;
  double hi = 1.0;
  while (ratio_at(hi) < threshold) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw InfeasibleError("no kappa reaches threshold " + num(threshold));
  }
  for (int i = 0; i < 100 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ratio_at(mid) < threshold ? lo : hi) = mid;
  }
  return hi;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool threshold_rows) {
  std::ostringstream out;
  out << "N,ratio_sqrt,ratio_log,d_with,d_without,flags\n";
  for (const auto& r : rows) {
    out << r.n << ',' << (r.ratio_sqrt ? num(*r.ratio_sqrt) : "") << ','
        << (r.ratio_log ? num(*r.ratio_log) : "") << ',';
    if (r.d_with) out << r.d_with;
    out << ',';
    if (r.d_without) out << r.d_without;
    out << ',' << r.flags << '\n';
  }
  if (threshold_rows && !rows.empty()) {
    for (const double t : kThresholds)
      for (const auto n : {rows.front().n, rows.back().n})
        out << n << ',' << num(t) << ',' << num(t) << ",,,threshold\n";
  }
  return out.str();
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"N", r.n},
                   {"ratio_sqrt", r.ratio_sqrt ? nlohmann::json(*r.ratio_sqrt) : nlohmann::json(nullptr)},
                   {"ratio_log", r.ratio_log ? nlohmann::json(*r.ratio_log) : nlohmann::json(nullptr)},
                   {"d_with", r.d_with},
                   {"d_with_log", r.d_with_log},
                   {"d_without", r.d_without},
                   {"flags", r.flags},
                   {"sqrt", cost_json(r.sqrt_cost)},
                   {"log", cost_json(r.log_cost)}});
  }
  return {{"rows", std::move(arr)}, {"thresholds", kThresholds}};
}

}  // namespace qdc::ft
