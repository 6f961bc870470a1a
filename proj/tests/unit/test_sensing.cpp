#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qdc/sensing.hpp"

using namespace qdc;
using namespace qdc::sensing;

TEST_CASE("hardware account") {
  const auto c = hardware_cost(4, 256);
  CHECK(c.qubits_reference == 32);
  CHECK(c.qubits_qdc == 12);
  CHECK(c.pairs_unary == 1024);
  CHECK(c.pairs_binary == 10);
  CHECK_FALSE(c.comparison_inverted);
  // R·log2 T < R + log2 T only for tiny R.
  CHECK(hardware_cost(1, 4).comparison_inverted);
  for (std::uint64_t r : {1, 2, 8, 64})
    for (std::uint64_t t : {2, 16, 1024}) {
      const auto a = hardware_cost(r, t);
      const auto lt = static_cast<std::uint64_t>(std::log2(static_cast<double>(t)));
      CHECK(a.qubits_reference == r * lt);
      CHECK(a.qubits_qdc == r + lt);
      CHECK(a.pairs_binary == static_cast<std::uint64_t>(std::log2(static_cast<double>(r * t))));
    }
  CHECK_THROWS_AS(hardware_cost(3, 4), ConfigError);
  CHECK_THROWS_AS(hardware_cost(4, 1), ConfigError);
  const auto doc = c.to_json();
  CHECK(doc["R"] == 4);
  CHECK(doc["T_bin"] == 256);
}

TEST_CASE("Schumacher bound") {
  CHECK(schumacher_bound(100, 0.5) == doctest::Approx(100.0));
  CHECK(schumacher_bound(100, 0.0) == 0.0);
  CHECK(schumacher_bound(10, 0.1) == doctest::Approx(10 * oracle::binary_entropy(0.1)));
}

TEST_CASE("capture step holds the per-step slice") {
  const auto m = ArrivalModel::single(4, 2, 2, 1);
  CHECK(capture_step(m, 0).probability(0) == doctest::Approx(1.0));
  CHECK(capture_step(m, 1).probability(0b0010) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ArrivalModel::single(4, 2, 4, 0), IndexError);
}

TEST_CASE("which-frequency compression maps excitations to addresses and vacuum to flag 0") {
  const RegisterLayout layout{{"D1", 1}, {"D2", 1}, {"D3", 1}, {"D4", 1}};
  const auto excited = compress_which_frequency(QuantumState::basis(layout, "0010"));
  REQUIRE(excited.address.has_value());
  CHECK(excited.address->probability(2) == doctest::Approx(1.0));
  CHECK(excited.flag->probability(1) == doctest::Approx(1.0));
  const auto vac = compress_which_frequency(QuantumState::basis(layout, "0000"));
  CHECK(vac.address->probability(0) == doctest::Approx(1.0));
  CHECK(vac.flag->probability(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(compress_which_frequency(QuantumState::basis(layout, "0011")), SubspaceViolation);
}

TEST_CASE("coherent pipeline equals the direct binary encoding") {
  Rng rng(4);
  for (int bands : {2, 4}) {
    for (int bins : {2, 4}) {
      for (int t = 0; t < 5; ++t) {
        const auto model = ArrivalModel::random(bands, bins, rng);
        const auto got = run_pipeline(model);
        const auto want = direct_encoding(model);
        CHECK(fidelity(got, want) == doctest::Approx(1.0).epsilon(1e-10));
        // Oracle: amplitude a(r, t) sits at |r⟩|t⟩|1⟩.
        for (int r = 0; r < bands; ++r)
          for (int tb = 0; tb < bins; ++tb) {
            const auto idx = ((static_cast<std::uint64_t>(r) * bins + tb) << 1) | 1U;
            CHECK(std::abs(want.amplitudes()[static_cast<Eigen::Index>(idx)] - model.amplitude(r, tb)) < 1e-12);
          }
      }
    }
  }
}

TEST_CASE("two-site interference follows (1 + cos phi)/2 for every bin") {
  for (int bins : {2, 4, 8}) {
    for (double phi : {0.0, 0.4, 1.0, 2.5, std::numbers::pi}) {
      for (int b = 0; b < bins; ++b) {
        const auto pair = compressed_pair(phi, bins, b);
        CHECK(pair.num_qubits() == 2 * (log2_exact(static_cast<std::uint64_t>(bins)) + 1));
        const auto p = outcome_probabilities(interfere(pair), "FL");
        CHECK(p[0] == doctest::Approx((1 + std::cos(phi)) / 2).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(compressed_pair(0.1, 3, 0), ConfigError);
  CHECK_THROWS_AS(compressed_pair(0.1, 4, 4), IndexError);
}

TEST_CASE("grid MLE inverts the outcome fraction") {
  for (double phi : {0.0, 0.3, 1.0, 2.0, 3.0}) {
    const double p0 = (1 + std::cos(phi)) / 2;
    const auto zeros = static_cast<std::uint64_t>(std::llround(p0 * 1e6));
    const double est = mle_phase(zeros, 1'000'000 - zeros);
    CHECK(std::abs(est - phi) < 2 * std::numbers::pi / 1024);
    CHECK(est >= 0.0);
    CHECK(est <= std::numbers::pi + 1e-12);
  }
  CHECK(mle_phase(100, 0) == 0.0);
}

TEST_CASE("phase estimation run") {
  PhaseEstimationConfig cfg;
  cfg.phi_true = 1.0;
  cfg.shots = 4000;
  cfg.trials = 3;
  cfg.seed = 12;
  const auto r = phase_estimation_run(cfg);
  CHECK(r.estimates.size() == 3);
  CHECK(std::abs(r.phi_est - 1.0) < 0.08);
  CHECK(r.pairs_consumed_per_event == 3);
  CHECK(r.pairs_uncompressed_per_event == 4);
  CHECK(r.events == 12000);
  CHECK(r.p0_exact == doctest::Approx((1 + std::cos(1.0)) / 2));
  CHECK(phase_estimation_run(cfg).to_json() == r.to_json());
  cfg.seed = 13;
  CHECK(phase_estimation_run(cfg).estimates != r.estimates);

  cfg.bins = 8;
  CHECK(phase_estimation_run(cfg).pairs_consumed_per_event == 4);
  cfg.shots = 0;
  CHECK_THROWS_AS(phase_estimation_run(cfg), ConfigError);
  cfg.shots = 10;
  cfg.phi_true = -0.5;
  CHECK_THROWS_AS(phase_estimation_run(cfg), ConfigError);
}

TEST_CASE("loss pushes the estimate toward pi/2") {
  PhaseEstimationConfig cfg;
  cfg.phi_true = 0.3;
  cfg.shots = 3000;
  cfg.trials = 1;
  cfg.loss_probability = 0.4;
  const auto r = phase_estimation_run(cfg);
  CHECK(r.erasures > 0);
  CHECK(r.phi_est > 0.5);
}
