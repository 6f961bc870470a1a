#include "qdc/core/ops.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qdc/core/errors.hpp"
#include "qdc/core/gates.hpp"

namespace qdc {

namespace {

// Maps full basis indices onto the index space of a sub-layout.
class Reindexer {
 public:
  Reindexer(const RegisterLayout& full, const RegisterLayout& sub) {
    for (const auto& r : sub.registers()) pairs_.emplace_back(full.field(r.name), sub.field(r.name));
  }
  std::uint64_t operator()(std::uint64_t index) const {
    std::uint64_t out = 0;
    for (const auto& [from, to] : pairs_) out |= from.get(index) << to.shift;
    return out;
  }

 private:
  std::vector<std::pair<BitField, BitField>> pairs_;
};

void require_same_layout(const QuantumState& a, const QuantumState& b) {
  if (!(a.layout() == b.layout()))
    throw LayoutError("layout mismatch: " + a.layout().describe() + " vs " + b.layout().describe());
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::vector<double> outcome_probabilities(const QuantumState& state, std::string_view reg) {
  const BitField f = state.layout().field(reg);
  std::vector<double> probs(std::size_t{1} << f.width, 0.0);
  for (std::uint64_t i = 0; i < state.dimension(); ++i) probs[f.get(i)] += state.probability(i);
  return probs;
}

MeasurementResult measure(const QuantumState& state, std::string_view reg, Rng& rng) {
  const BitField f = state.layout().field(reg);
  const auto probs = outcome_probabilities(state, reg);

  // Zero-probability outcomes are never returned, even when rounding pushes
  // the draw past the cumulative sum.
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = rng.uniform() * total;
  std::uint64_t value = probs.size();
  double acc = 0.0;
  for (std::uint64_t v = 0; v < probs.size(); ++v) {
    if (probs[v] <= 0.0) continue;
    acc += probs[v];
    value = v;
    if (u < acc) break;
  }
  if (value == probs.size()) throw PreconditionError("cannot measure a zero state");

  const double p = probs[value];
  if (state.is_pure()) {
    Eigen::VectorXcd psi = state.amplitudes();
    for (std::uint64_t i = 0; i < state.dimension(); ++i)
      if (f.get(i) != value) psi[static_cast<Eigen::Index>(i)] = 0.0;
    psi /= std::sqrt(p);
    return {to_bitstring(value, f.width), value, p / total,
            QuantumState::pure_unchecked(state.layout(), std::move(psi))};
  }
  Eigen::MatrixXcd rho = state.density();
  for (std::uint64_t i = 0; i < state.dimension(); ++i) {
    if (f.get(i) == value) continue;
    rho.row(static_cast<Eigen::Index>(i)).setZero();
    rho.col(static_cast<Eigen::Index>(i)).setZero();
  }
  rho /= p;
  return {to_bitstring(value, f.width), value, p / total,
          QuantumState::mixed_unchecked(state.layout(), std::move(rho))};
}

MeasurementResult measure(const QuantumState& state, std::string_view reg, std::uint64_t seed) {
  Rng rng(seed);
  return measure(state, reg, rng);
}

QuantumState partial_trace(const QuantumState& state, const std::vector<std::string>& keep) {
  if (keep.empty()) throw ConfigError("partial_trace needs at least one register to keep");
  const RegisterLayout kept = state.layout().select(keep);
  const RegisterLayout rest = state.layout().without(keep);
  check_qubit_cap(kept, StateKind::mixed);

  const Reindexer to_kept(state.layout(), kept);
  const Reindexer to_rest(state.layout(), rest);
  const auto dk = static_cast<Eigen::Index>(kept.dimension());
  const auto dr = static_cast<Eigen::Index>(rest.dimension());

  if (state.is_pure()) {
    const auto& psi = state.amplitudes();
    struct Entry {
      std::uint64_t rest;
      Eigen::Index kept;
      cplx amp;
    };
    std::vector<Entry> support;
    for (std::uint64_t i = 0; i < state.dimension(); ++i) {
      const cplx a = psi[static_cast<Eigen::Index>(i)];
      if (a != cplx(0.0)) support.push_back({to_rest(i), static_cast<Eigen::Index>(to_kept(i)), a});
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    if (support.size() * 8 < state.dimension()) {
      // Sparse states: only amplitudes sharing a traced-out index interfere.
      std::stable_sort(support.begin(), support.end(),
                       [](const Entry& x, const Entry& y) { return x.rest < y.rest; });
      for (std::size_t lo = 0; lo < support.size();) {
        std::size_t hi = lo;
        while (hi < support.size() && support[hi].rest == support[lo].rest) ++hi;
        for (std::size_t x = lo; x < hi; ++x)
          for (std::size_t y = lo; y < hi; ++y)
            rho(support[x].kept, support[y].kept) += support[x].amp * std::conj(support[y].amp);
        lo = hi;
      }
      return QuantumState::mixed_unchecked(kept, std::move(rho));
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dk, dr);
    for (const auto& e : support) m(e.kept, static_cast<Eigen::Index>(e.rest)) = e.amp;
    rho = m * m.adjoint();
    return QuantumState::mixed_unchecked(kept, std::move(rho));
  }

  // full index of (a, r)
  std::vector<std::uint64_t> full(static_cast<std::size_t>(dk * dr));
  for (std::uint64_t i = 0; i < state.dimension(); ++i)
    full[to_kept(i) * static_cast<std::uint64_t>(dr) + to_rest(i)] = i;
  const auto& in = state.density();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dr; ++r)
    for (Eigen::Index b = 0; b < dk; ++b) {
      const auto jb = static_cast<Eigen::Index>(full[static_cast<std::size_t>(b * dr + r)]);
      for (Eigen::Index a = 0; a < dk; ++a)
        rho(a, b) += in(static_cast<Eigen::Index>(full[static_cast<std::size_t>(a * dr + r)]), jb);
    }
  return QuantumState::mixed_unchecked(kept, std::move(rho));
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  require_same_layout(a, b);
  if (a.is_pure() && b.is_pure()) return clamp01(std::norm(a.amplitudes().dot(b.amplitudes())));
  if (a.is_pure()) return clamp01((a.amplitudes().adjoint() * b.density() * a.amplitudes())(0, 0).real());
  if (b.is_pure()) return clamp01((b.amplitudes().adjoint() * a.density() * b.amplitudes())(0, 0).real());
  const Eigen::MatrixXcd s = hermitian_sqrt(a.density());
  const Eigen::MatrixXcd m = s * b.density() * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const double root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return clamp01(root * root);
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  require_same_layout(a, b);
  if (a.is_pure() && b.is_pure()) {
    // √(1 − |c|²) written as ‖a − e^{i arg c} b‖·√((1 + |c|)/2), which stays
    // accurate when the states nearly coincide.
    const cplx c = a.amplitudes().dot(b.amplitudes());
    const double mag = std::abs(c);
    const cplx phase = mag > 0.0 ? std::conj(c) / mag : cplx(1.0);
    const double gap = (a.amplitudes() - phase * b.amplitudes()).norm();
    return clamp01(gap * std::sqrt(0.5 * (1.0 + std::min(mag, 1.0))));
  }
  const Eigen::MatrixXcd diff = a.density_matrix() - b.density_matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return clamp01(0.5 * es.eigenvalues().cwiseAbs().sum());
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  RegisterLayout layout = a.layout() + b.layout();
  if (a.is_pure() && b.is_pure()) {
    check_qubit_cap(layout, StateKind::pure);
    const auto& x = a.amplitudes();
    const auto& y = b.amplitudes();
    Eigen::VectorXcd out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x[i] * y;
    return QuantumState::pure_unchecked(std::move(layout), std::move(out));
  }
  check_qubit_cap(layout, StateKind::mixed);
  const Eigen::MatrixXcd x = a.density_matrix();
  const Eigen::MatrixXcd y = b.density_matrix();
  Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return QuantumState::mixed_unchecked(std::move(layout), std::move(out));
}

Conditioned condition_on(const QuantumState& state,
                         const std::vector<std::pair<std::string, std::uint64_t>>& fixed) {
  std::vector<std::string> names;
  std::vector<std::pair<BitField, std::uint64_t>> checks;
  for (const auto& [name, value] : fixed) {
    const BitField f = state.layout().field(name);
    if (value > f.low_mask()) throw IndexError("value out of range for register '" + name + "'");
    names.push_back(name);
    checks.emplace_back(f, value);
  }
  const RegisterLayout rest = state.layout().without(names);
  if (rest.total_qubits() == 0) throw ConfigError("condition_on must leave at least one register");
  const Reindexer to_rest(state.layout(), rest);
  auto selected = [&](std::uint64_t i) {
    return std::all_of(checks.begin(), checks.end(),
                       [&](const auto& c) { return c.first.get(i) == c.second; });
  };

  if (state.is_pure()) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rest.dimension()));
    const auto& psi = state.amplitudes();
    for (std::uint64_t i = 0; i < state.dimension(); ++i)
      if (selected(i)) out[static_cast<Eigen::Index>(to_rest(i))] = psi[static_cast<Eigen::Index>(i)];
    const double p = out.squaredNorm();
    if (p <= 0.0) throw PreconditionError("conditioned branch has zero probability");
    out /= std::sqrt(p);
    return {QuantumState::pure_unchecked(rest, std::move(out)), p};
  }
  std::vector<std::uint64_t> idx;  // full indices in the branch, ordered by rest index
  idx.assign(rest.dimension(), 0);
  for (std::uint64_t i = 0; i < state.dimension(); ++i)
    if (selected(i)) idx[to_rest(i)] = i;
  const auto d = static_cast<Eigen::Index>(rest.dimension());
  Eigen::MatrixXcd out(d, d);
  const auto& rho = state.density();
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r)
      out(r, c) = rho(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                      static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
  const double p = out.trace().real();
  if (p <= 0.0) throw PreconditionError("conditioned branch has zero probability");
  out /= p;
  return {QuantumState::mixed_unchecked(rest, std::move(out)), p};
}

std::optional<QuantumState> as_pure(const QuantumState& state, double tol) {
  if (state.is_pure()) return state;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(state.density());
  const Eigen::Index top = es.eigenvalues().size() - 1;
  if (es.eigenvalues()[top] < 1.0 - tol) return std::nullopt;
  Eigen::VectorXcd v = es.eigenvectors().col(top);
  // Fix the global phase so the largest component is real and positive.
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  v *= std::conj(v[k]) / std::abs(v[k]);
  return QuantumState::pure_unchecked(state.layout(), v.normalized());
}

std::optional<std::pair<QuantumState, QuantumState>> split_product(
    const QuantumState& state, const std::vector<std::string>& first, double tol) {
  auto pure = as_pure(state, tol);
  if (!pure) return std::nullopt;
  const RegisterLayout a_layout = state.layout().select(first);
  const RegisterLayout b_layout = state.layout().without(first);
  const Reindexer to_a(state.layout(), a_layout);
  const Reindexer to_b(state.layout(), b_layout);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(a_layout.dimension()),
                     static_cast<Eigen::Index>(b_layout.dimension()));
  const auto& psi = pure->amplitudes();
  for (std::uint64_t i = 0; i < state.dimension(); ++i)
    m(static_cast<Eigen::Index>(to_a(i)), static_cast<Eigen::Index>(to_b(i))) =
        psi[static_cast<Eigen::Index>(i)];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv[1] * sv[1] > tol) return std::nullopt;
  Eigen::VectorXcd a = svd.matrixU().col(0);
  Eigen::VectorXcd b = sv[0] * svd.matrixV().col(0).conjugate();
  return std::make_pair(QuantumState::pure_unchecked(a_layout, a.normalized()),
                        QuantumState::pure_unchecked(b_layout, b.normalized()));
}

QuantumState depolarize(const QuantumState& state, int qubit, double p) {
  if (p < 0.0 || p > 1.0) throw ConfigError("depolarizing probability must lie in [0, 1]");
  const QuantumState mixed = state.to_mixed();
  if (p == 0.0) return mixed;
  Eigen::MatrixXcd out = (1.0 - 0.75 * p) * mixed.density();
  for (const auto& pauli : {pauli_x(), pauli_y(), pauli_z()})
    out += 0.25 * p * apply_matrix(mixed, {qubit}, pauli).density();
  return QuantumState::mixed_unchecked(state.layout(), std::move(out));
}

QuantumState random_state(const RegisterLayout& layout, Rng& rng) {
  check_qubit_cap(layout, StateKind::pure);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(layout.dimension()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v[i] = cplx(re, im);
  }
  return QuantumState::pure_unchecked(layout, v.normalized());
}

}  // namespace qdc
