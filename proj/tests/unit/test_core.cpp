#include <doctest.h>

#include <set>

#include "oracle.hpp"
#include "qdc/core.hpp"

using namespace qdc;

namespace {

QuantumState random_pure(const RegisterLayout& layout, oracle::Gen& gen) {
  return QuantumState::from_amplitudes(layout, gen.state(static_cast<Eigen::Index>(layout.dimension())));
}

QuantumState random_mixed(const RegisterLayout& layout, oracle::Gen& gen, int rank = 3) {
  return QuantumState::from_density(layout, gen.density(static_cast<Eigen::Index>(layout.dimension()), rank));
}

}  // namespace

TEST_CASE("layout offsets are register-major with the first register most significant") {
  const RegisterLayout layout{{"A", 2}, {"B", 1}, {"C", 3}};
  CHECK(layout.total_qubits() == 6);
  CHECK(layout.dimension() == 64);
  CHECK(layout.offset("B") == 2);
  CHECK(layout.qubit("C", 2) == 5);
  const BitField a = layout.field("A");
  CHECK(a.shift == 4);
  CHECK(a.get(0b110000) == 3);
  CHECK(layout.field("C").with(0, 5) == 0b000101);
  CHECK(layout.select(std::vector<std::string>{"C", "A"}).describe() ==
        RegisterLayout({{"A", 2}, {"C", 3}}).describe());
  CHECK_THROWS_AS(layout.at("Z"), LayoutError);
  CHECK_THROWS_AS(RegisterLayout({{"A", 1}, {"A", 1}}), ConfigError);
  CHECK_THROWS_AS(RegisterLayout({{"A", 0}}), ConfigError);
  CHECK(cell_name(0) == "D1");
  CHECK(cell_names(3, "K") == std::vector<std::string>{"K1", "K2", "K3"});
  CHECK(to_bitstring(5, 4) == "0101");
  CHECK(parse_bitstring("0101") == 5);
  CHECK(log2_exact(1024) == 10);
  CHECK_THROWS_AS(log2_exact(12), ConfigError);
}

TEST_CASE("basis and amplitude constructors validate") {
  const RegisterLayout layout{{"A", 1}, {"B", 2}};
  const auto s = QuantumState::basis(layout, "101");
  CHECK(s.probability(5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(QuantumState::basis(layout, "10"), ConfigError);
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(8);
  CHECK_THROWS_AS(QuantumState::from_amplitudes(layout, v), PreconditionError);
  CHECK(QuantumState::from_amplitudes(layout, v, true).trace() == doctest::Approx(1.0));
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(8, 8) / 8.0;
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(QuantumState::from_density(layout, bad), PreconditionError);
  CHECK_THROWS_AS(QuantumState::maximally_mixed(RegisterLayout{{"big", 13}}), ConfigError);
  CHECK_THROWS_AS(QuantumState::basis(RegisterLayout{{"big", 23}}, std::uint64_t{0}), ConfigError);
}

TEST_CASE("gates match Kronecker-product oracles on random states") {
  oracle::Gen gen(11);
  const int n = 4;
  const RegisterLayout layout{{"q", n}};
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto psi = random_pure(layout, gen);
    const int q = static_cast<int>(gen.below(n));
    const int c = (q + 1 + static_cast<int>(gen.below(n - 1))) % n;
    int c2 = 0;
    while (c2 == q || c2 == c) ++c2;

    Eigen::MatrixXcd expect = oracle::embed(oracle::hadamard(), q, n);
    CHECK((apply(psi, GateOp::h(q)).amplitudes() - expect * psi.amplitudes()).norm() < 1e-12);

    expect = oracle::permutation(n, [&](oracle::Bits b) {
      b[static_cast<std::size_t>(q)] ^= b[static_cast<std::size_t>(c)];
      return b;
    });
    CHECK((apply(psi, GateOp::cnot(c, q)).amplitudes() - expect * psi.amplitudes()).norm() < 1e-12);

    expect = oracle::permutation(n, [&](oracle::Bits b) {
      b[static_cast<std::size_t>(q)] ^= b[static_cast<std::size_t>(c)] & b[static_cast<std::size_t>(c2)];
      return b;
    });
    CHECK((apply(psi, GateOp::toffoli(c, c2, q)).amplitudes() - expect * psi.amplitudes()).norm() < 1e-12);

    expect = oracle::permutation(n, [&](oracle::Bits b) {
      if (b[static_cast<std::size_t>(c2)]) std::swap(b[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(q)]);
      return b;
    });
    CHECK((apply(psi, GateOp::cswap(c2, c, q)).amplitudes() - expect * psi.amplitudes()).norm() < 1e-12);

    const double theta = 2 * M_PI * gen.uniform();
    Eigen::MatrixXcd cp = Eigen::MatrixXcd::Identity(16, 16);
    for (Eigen::Index i = 0; i < 16; ++i) {
      const auto b = oracle::bits_of(static_cast<std::uint64_t>(i), n);
      if (b[static_cast<std::size_t>(c)] && b[static_cast<std::size_t>(q)]) cp(i, i) = std::polar(1.0, theta);
    }
    CHECK((apply(psi, GateOp::cphase(c, q, theta)).amplitudes() - cp * psi.amplitudes()).norm() < 1e-12);

    // Mixed states follow U ρ U†.
    const auto rho = random_mixed(layout, gen);
    const Eigen::MatrixXcd u = oracle::embed(oracle::hadamard(), q, n);
    CHECK((apply(rho, GateOp::h(q)).density() - u * rho.density() * u.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("gate inverses undo the gate") {
  oracle::Gen gen(5);
  const RegisterLayout layout{{"q", 3}};
  const auto psi = random_pure(layout, gen);
  for (const auto& g : {GateOp::s(0), GateOp::t(1), GateOp::cphase(0, 2, 0.7), GateOp::toffoli(0, 1, 2),
                        GateOp::single(1, pauli_y())}) {
    const auto back = apply(apply(psi, g), g.inverse());
    CHECK(fidelity(back, psi) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(apply(psi, GateOp::cnot(1, 1)), IndexError);
  CHECK_THROWS_AS(apply(psi, GateOp::x(3)), IndexError);
}

TEST_CASE("partial trace matches the brute-force oracle") {
  oracle::Gen gen(21);
  const RegisterLayout layout{{"A", 1}, {"B", 2}, {"C", 1}};
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = random_mixed(layout, gen);
    const auto got = partial_trace(rho, {"A", "C"});
    CHECK(got.layout().describe() == RegisterLayout({{"A", 1}, {"C", 1}}).describe());
    CHECK((got.density() - oracle::partial_trace(rho.density(), 4, {0, 3})).norm() < 1e-12);
    const auto psi = random_pure(layout, gen);
    const Eigen::MatrixXcd dens = psi.amplitudes() * psi.amplitudes().adjoint();
    CHECK((partial_trace(psi, {"B"}).density() - oracle::partial_trace(dens, 4, {1, 2})).norm() < 1e-12);
  }
}

TEST_CASE("fidelity and trace distance agree with dense oracles") {
  oracle::Gen gen(8);
  const RegisterLayout layout{{"q", 2}};
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_pure(layout, gen);
    const auto b = random_pure(layout, gen);
    const double f = oracle::overlap2(a.amplitudes(), b.amplitudes());
    CHECK(fidelity(a, b) == doctest::Approx(f).epsilon(1e-10));
    CHECK(fidelity(a.to_mixed(), b) == doctest::Approx(f).epsilon(1e-7));
    const Eigen::MatrixXcd da = a.amplitudes() * a.amplitudes().adjoint();
    const Eigen::MatrixXcd db = b.amplitudes() * b.amplitudes().adjoint();
    CHECK(trace_distance(a, b) == doctest::Approx(oracle::trace_norm_half(da - db)).epsilon(1e-9));
    CHECK(trace_distance(a, b) == doctest::Approx(std::sqrt(1 - f)).epsilon(1e-9));

    const auto r = random_mixed(layout, gen);
    const auto s = random_mixed(layout, gen);
    const double td = trace_distance(r, s);
    CHECK(td == doctest::Approx(oracle::trace_norm_half(r.density() - s.density())).epsilon(1e-10));
    // Fuchs-van de Graaf.
    const double fr = fidelity(r, s);
    CHECK(1 - std::sqrt(fr) <= td + 1e-9);
    CHECK(td <= std::sqrt(1 - fr) + 1e-9);
    CHECK(trace_distance(r, r) < 1e-12);
    CHECK(trace_distance(a, a) < 1e-12);
    CHECK(fidelity(r, r) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("measurement statistics follow the Born rule") {
  const RegisterLayout layout{{"A", 1}, {"B", 1}};
  Eigen::VectorXcd v(4);
  v << std::sqrt(0.2), 0, 0, std::sqrt(0.8);
  const auto psi = QuantumState::from_amplitudes(layout, v);
  const auto probs = outcome_probabilities(psi, "A");
  CHECK(probs[0] == doctest::Approx(0.2));
  Rng rng(99);
  int ones = 0;
  const int shots = 20000;
  for (int i = 0; i < shots; ++i) {
    const auto m = measure(psi, "A", rng);
    ones += static_cast<int>(m.value);
    // Post-measurement B agrees with A.
    CHECK(m.collapsed.probability(m.value ? 3 : 0) == doctest::Approx(1.0));
  }
  const double sigma = std::sqrt(0.8 * 0.2 / shots);
  CHECK(std::abs(ones / static_cast<double>(shots) - 0.8) < 4 * sigma);
  CHECK(measure(psi, "A", std::uint64_t{4}).value == measure(psi, "A", std::uint64_t{4}).value);
}

TEST_CASE("condition_on, split_product and tensor are consistent") {
  oracle::Gen gen(2);
  const auto a = random_pure(RegisterLayout{{"A", 2}}, gen);
  const auto b = random_pure(RegisterLayout{{"B", 1}}, gen);
  const auto ab = tensor(a, b);
  CHECK((ab.amplitudes() - oracle::kron(a.amplitudes(), b.amplitudes())).norm() < 1e-12);
  const auto parts = split_product(ab, {"B"});
  REQUIRE(parts.has_value());
  CHECK(fidelity(parts->first, b) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(parts->second, a) == doctest::Approx(1.0).epsilon(1e-10));

  const auto bell = apply(apply(QuantumState::basis(RegisterLayout{{"X", 1}, {"Y", 1}}, "00"), GateOp::h(0)),
                          GateOp::cnot(0, 1));
  CHECK_FALSE(split_product(bell, {"X"}).has_value());
  const auto c = condition_on(bell, {{"X", 1}});
  CHECK(c.probability == doctest::Approx(0.5));
  CHECK(c.state.probability(1) == doctest::Approx(1.0));
  CHECK(partial_trace(bell, {"Y"}).purity() == doctest::Approx(0.5));
}

TEST_CASE("depolarizing channel shrinks the Bloch vector") {
  const auto plus = apply(QuantumState::basis(RegisterLayout{{"q", 1}}, "0"), GateOp::h(0));
  for (double p : {0.0, 0.25, 1.0}) {
    const auto out = depolarize(plus, 0, p);
    CHECK(out.density()(0, 1).real() == doctest::Approx(0.5 * (1 - p)));
    CHECK(out.trace() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(depolarize(plus, 0, 1.5), ConfigError);
}

TEST_CASE("rng is reproducible and splits into distinct streams") {
  Rng a(7), b(7);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  const Rng root(7);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 100; ++s) seeds.insert(root.split(s).seed());
  CHECK(seeds.size() == 100);
  Rng u(1);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / 10000 - 0.5) < 0.02);
  for (int i = 0; i < 1000; ++i) CHECK(u.below(3) < 3);
}

TEST_CASE("property: random unitary circuits preserve norm and invert exactly") {
  oracle::Gen gen(1234);
  const RegisterLayout layout{{"q", 5}};
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = random_pure(layout, gen);
    std::vector<GateOp> circuit;
    for (int k = 0; k < 30; ++k) {
      const int a = static_cast<int>(gen.below(5));
      const int b = (a + 1 + static_cast<int>(gen.below(4))) % 5;
      switch (gen.below(5)) {
        case 0: circuit.push_back(GateOp::h(a)); break;
        case 1: circuit.push_back(GateOp::t(a)); break;
        case 2: circuit.push_back(GateOp::cnot(a, b)); break;
        case 3: circuit.push_back(GateOp::cphase(a, b, gen.uniform())); break;
        default: circuit.push_back(GateOp::s(b)); break;
      }
    }
    QuantumState s = psi;
    for (const auto& g : circuit) s = apply(s, g);
    CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (auto it = circuit.rbegin(); it != circuit.rend(); ++it) s = apply(s, it->inverse());
    CHECK((s.amplitudes() - psi.amplitudes()).norm() < 1e-10);
  }
}
