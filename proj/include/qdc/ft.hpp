#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Surface-code resource estimation for a user who either distills every
// magic state locally or outsources the QRAM-heavy part of the algorithm to a
// QDC and pays a query delay instead.
namespace qdc::ft {

enum class DelayModel { sqrt, log, none };

std::string to_string(DelayModel model);
DelayModel parse_delay_model(const std::string& text);

struct DistanceSet {
  int min = 3;
  int max = 51;
  bool odd_only = false;

  std::vector<int> values() const;
};

struct FtCostParams {
  std::uint64_t logical_qubits = 100;
  std::uint64_t t_count_total = 100'000'000;
  double p = 1e-3;
  double budget = 0.01;
  // Fraction of the budget reserved for distillation failures; the rest goes
  // to logical (tile) errors.
  double distillation_share = 0.5;
  double f_outsourced = 0.99;
  std::uint64_t tiles = 164;
  double kappa = 1.0;
  DelayModel delay_model = DelayModel::sqrt;
  std::uint64_t cycles_per_distill = 11;
  std::uint64_t factories = 1;
  // Extra tiles for a level-ℓ factory; tiles already includes level 1.
  std::array<std::uint64_t, 4> factory_tiles = {11, 44, 176, 704};
  // Code cycles (in units of d) the user spends per outsourced T-state on
  // shipping query registers and classical feed-forward.
  double io_cycles_per_outsourced_state = 0.01;
  DistanceSet distances;
  double cycle_time_us = 1.0;

  void validate() const;
  nlohmann::json to_json() const;
  // Overlays the keys present in `doc`; unknown keys are rejected.
  static FtCostParams from_json(const nlohmann::json& doc);
  static FtCostParams from_json(const nlohmann::json& doc, FtCostParams base);
};

inline constexpr int kMaxDistillationLevel = 4;

// 0.1·(100p)^((d+1)/2) / d per tile per code cycle.
double logical_error_rate(double p, int d);
// True where the fit above is no longer meaningful (p ≥ 1%).
bool above_threshold(double p);

// f₁ = 35p³, f_{ℓ+1} = 35 f_ℓ³.
double distillation_failure(double p, int level);

struct DistillationScheme {
  int level = 1;
  double per_state_failure = 0.0;
  double total_failure = 0.0;  // states_needed · per_state_failure
};

DistillationScheme select_distillation(std::uint64_t states_needed, double p, double error_share);

std::uint64_t tiles_for_level(const FtCostParams& params, int level);

// Smallest d in params.distances with tiles·cycles·p_L(p,d) < logical_share.
int required_distance(const FtCostParams& params, std::uint64_t tiles, double cycles_with_delay,
                      double logical_share);

std::uint64_t code_cycles_for_distillation(std::uint64_t states_needed, int level, int d,
                                           const FtCostParams& params);

double delay_factor(std::uint64_t n, DelayModel model, double kappa);

struct CostReport {
  std::string scenario;
  std::uint64_t states = 0;
  std::uint64_t outsourced_states = 0;
  int chosen_level = 1;
  int chosen_distance = 0;
  std::uint64_t tiles = 0;
  std::uint64_t code_cycles = 0;  // distillation only
  std::uint64_t io_cycles = 0;
  double delay = 0.0;
  double cycles_with_delay = 0.0;
  double distillation_error = 0.0;
  double logical_error = 0.0;
  double total_error = 0.0;
  double wall_time_s = 0.0;
  int iterations = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

CostReport estimate_without_qdc(const FtCostParams& params);
CostReport estimate_with_qdc(const FtCostParams& params, std::uint64_t n, DelayModel model);

struct RelativeCost {
  double ratio = 0.0;
  CostReport with_qdc;
  CostReport without_qdc;
};

RelativeCost relative_time_cost(const FtCostParams& params, std::uint64_t n);
RelativeCost relative_time_cost(const FtCostParams& params, std::uint64_t n, DelayModel model);

struct SweepRow {
  std::uint64_t n = 0;
  std::optional<double> ratio_sqrt;
  std::optional<double> ratio_log;
  int d_with = 0;      // with-QDC distance under the sqrt model
  int d_with_log = 0;
  int d_without = 0;
  std::string flags;
  std::optional<RelativeCost> sqrt_cost;
  std::optional<RelativeCost> log_cost;
};

// Rows for every N; infeasible rows are flagged rather than thrown. With
// delay_model none both columns are delay-free.
std::vector<SweepRow> sweep(const FtCostParams& params, const std::vector<std::uint64_t>& ns);

std::vector<std::uint64_t> powers_of_two(int log_min, int log_max);

inline constexpr std::array<double, 3> kThresholds = {0.1, 1.0, 10.0};

// κ at which the log-model ratio reaches `threshold` at N = anchor_n, found by
// bisection. Since √N = log₂N at N = 16 both curves start together and the
// sqrt curve crosses first.
double threshold_preset_kappa(const FtCostParams& params, double threshold,
                              std::uint64_t anchor_n = std::uint64_t{1} << 12);

std::string sweep_csv(const std::vector<SweepRow>& rows, bool threshold_rows = true);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

}  // namespace qdc::ft
