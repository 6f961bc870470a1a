#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "qdc/privacy.hpp"

namespace qdc::privacy {

namespace {

std::string sender_id(int a) { return "A" + std::to_string(a); }
std::string receiver_id(int b) { return "B" + std::to_string(b); }
std::string qdc_id(int k) { return "QDC" + std::to_string(k); }

std::uint64_t memory_size(int senders) {
  std::uint64_t n = 2;
  while (n < static_cast<std::uint64_t>(senders)) n *= 2;
  return n;
}

std::vector<std::pair<int, int>> effective_pairing(const SessionConfig& c) {
  if (!c.pairing.empty()) return c.pairing;
  std::vector<std::pair<int, int>> p;
  for (int a = 0; a < std::min(c.senders, c.receivers); ++a) p.emplace_back(a, a);
  return p;
}

std::vector<int> effective_colluders(const SessionConfig& c) {
  if (!c.adversary.colluders.empty()) return c.adversary.colluders;
  std::vector<int> out;
  for (int k = 0; k < c.shares; ++k) out.push_back(k);
  return out;
}

// Share index of sender `a` held by QDC `k`, if any.
std::optional<int> share_at(int a, int k, const SessionConfig& c) {
  for (int s = 0; s < c.shares; ++s)
    if (share_holder(a, s, c.qdc_count) == k) return s;
  return std::nullopt;
}

RegisterLayout secret_layout(int w) { return RegisterLayout{{"S", w}}; }

// The memory as a server that lacks part of the pad key sees it: cell `reg`
// averaged over every Pauli pad.
QuantumState pad_twirl(const QuantumState& memory, const std::string& reg) {
  const int w = memory.layout().width(reg);
  const int first = memory.layout().qubit(reg);
  const QuantumState mixed = memory.to_mixed();
  const auto keys = std::uint64_t{1} << (2 * w);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(mixed.density().rows(), mixed.density().cols());
  for (std::uint64_t key = 0; key < keys; ++key) {
    QuantumState padded = mixed;
    for (int q = 0; q < w; ++q) {
      if ((key >> (2 * (w - 1 - q))) & 1U) padded = apply(padded, GateOp::z(first + q));
      if ((key >> (2 * (w - 1 - q) + 1)) & 1U) padded = apply(padded, GateOp::x(first + q));
    }
    acc += padded.density();
  }
  return QuantumState::mixed_unchecked(memory.layout(), acc / static_cast<double>(keys));
}

// Final state of everything QDC k holds (quantum cells D<i> and classical key
// cells K<i>), averaged over pads and key splits, after the swap reads that
// `pairing` triggers at this QDC.
QuantumState qdc_view(int k, const SessionConfig& c, const std::vector<QuantumState>& secrets,
                      const std::vector<std::pair<int, int>>& pairing) {
  const std::uint64_t cells = memory_size(c.senders);
  const int w = c.width;
  std::optional<QuantumState> view;
  for (std::uint64_t a = 0; a < cells; ++a) {
    const RegisterLayout cell_layout{{cell_name(a), w}, {cell_name(a, "K"), 2 * w}};
    QuantumState cell = QuantumState::basis(cell_layout, std::uint64_t{0});
    const auto s = a < static_cast<std::uint64_t>(c.senders) ? share_at(static_cast<int>(a), k, c) : std::nullopt;
    if (s) {
      const QuantumState held = share_view(secrets[a], c.shares, {*s});
      cell = *s == 0 ? held.with_layout(cell_layout)
                     : tensor(QuantumState::basis(RegisterLayout{{"S", w}}, std::uint64_t{0}), held)
                           .with_layout(cell_layout);
    }
    view = view ? tensor(*view, cell) : cell;
  }
  for (const auto& [a, b] : pairing) {
    (void)b;
    if (share_holder(a, 0, c.qdc_count) == k)
      view = private_read_swap(*view, static_cast<std::uint64_t>(a), maximally_mixed_probe(w)).memory_after;
  }
  return *view;
}

double max_pairwise(const std::vector<const QuantumState*>& views) {
  double worst = 0.0;
  for (std::size_t i = 0; i < views.size(); ++i)
    for (std::size_t j = i + 1; j < views.size(); ++j) worst = std::max(worst, trace_distance(*views[i], *views[j]));
  return worst;
}

std::vector<QuantumState> counterfactual_secrets() {
  const RegisterLayout l = secret_layout(1);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd plus(2), plus_i(2);
  plus << r, r;
  plus_i << r, cplx(0.0, r);
  return {QuantumState::basis(l, std::uint64_t{0}), QuantumState::basis(l, std::uint64_t{1}),
          QuantumState::from_amplitudes(l, plus), QuantumState::from_amplitudes(l, plus_i)};
}

QdcPrivacy privacy_for(int k, const SessionConfig& c) {
  QdcPrivacy out;
  out.qdc = k;
  const auto basis = counterfactual_secrets();
  std::vector<std::vector<QuantumState>> assignments{{}};
  for (int a = 0; a < c.senders; ++a) {
    std::vector<std::vector<QuantumState>> next;
    for (const auto& partial : assignments)
      for (const auto& s : basis) {
        auto extended = partial;
        extended.push_back(s);
        next.push_back(std::move(extended));
      }
    assignments = std::move(next);
  }
  const auto matchings = partial_matchings(c.senders, c.receivers);

  std::vector<std::vector<QuantumState>> views(assignments.size());
  for (std::size_t i = 0; i < assignments.size(); ++i)
    for (const auto& m : matchings) views[i].push_back(qdc_view(k, c, assignments[i], m));

  double secret_d = 0.0;
  for (std::size_t m = 0; m < matchings.size(); ++m) {
    std::vector<const QuantumState*> column;
    for (auto& row : views) column.push_back(&row[m]);
    secret_d = std::max(secret_d, max_pairwise(column));
  }
  double receiver_d = 0.0;
  for (auto& row : views) {
    std::vector<const QuantumState*> ptrs;
    for (auto& v : row) ptrs.push_back(&v);
    receiver_d = std::max(receiver_d, max_pairwise(ptrs));
  }
  out.secret_distance = secret_d;
  out.receiver_distance = receiver_d;
  return out;
}

}  // namespace

std::vector<std::vector<std::pair<int, int>>> partial_matchings(int senders, int receivers) {
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<std::pair<int, int>> current;
  std::vector<bool> used(static_cast<std::size_t>(receivers), false);
  std::function<void(int)> rec = [&](int a) {
    if (a == senders) {
      out.push_back(current);
      return;
    }
    rec(a + 1);
    for (int b = 0; b < receivers; ++b) {
      if (used[static_cast<std::size_t>(b)]) continue;
      used[static_cast<std::size_t>(b)] = true;
      current.emplace_back(a, b);
      rec(a + 1);
      current.pop_back();
      used[static_cast<std::size_t>(b)] = false;
    }
  };
  rec(0);
  return out;
}

void SessionConfig::validate() const {
  if (senders < 1 || senders > 4) throw ConfigError("senders must lie in [1, 4]");
  if (receivers < 1 || receivers > 4) throw ConfigError("receivers must lie in [1, 4]");
  if (shares < 2) throw ConfigError("shares must be >= 2");
  if (qdc_count < shares)
    throw ConfigError("qdc_count (" + std::to_string(qdc_count) + ") must be >= shares (" +
                      std::to_string(shares) + ")");
  if (qdc_count > 8) throw ConfigError("qdc_count must be <= 8");
  if (width < 1 || width > 2) throw ConfigError("secret width must be 1 or 2 qubits");
  if (loss_probability < 0.0 || loss_probability >= 1.0) throw ConfigError("loss probability must lie in [0, 1)");
  std::set<int> seen_a, seen_b;
  for (const auto& [a, b] : pairing) {
    if (a < 0 || a >= senders || b < 0 || b >= receivers) throw ConfigError("pairing refers to an unknown user");
    if (!seen_a.insert(a).second || !seen_b.insert(b).second) throw ConfigError("pairing must be a partial matching");
  }
  if (!secrets.empty()) {
    if (secrets.size() != static_cast<std::size_t>(senders)) throw ConfigError("need one secret per sender");
    for (const auto& s : secrets)
      if (s.num_qubits() != width) throw ConfigError("secret width does not match");
  }
  for (int k : adversary.colluders)
    if (k < 0 || k >= qdc_count) throw ConfigError("colluder index out of range");
}

double SessionReport::max_privacy_metric() const {
  double worst = 0.0;
  for (const auto& p : privacy) {
    if (p.secret_distance) worst = std::max(worst, *p.secret_distance);
    if (p.receiver_distance) worst = std::max(worst, *p.receiver_distance);
  }
  return worst;
}

nlohmann::json SessionReport::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json doc;
  doc["delivered"] = nlohmann::json::array();
  for (const auto& d : delivered)
    doc["delivered"].push_back({{"sender", d.sender}, {"receiver", d.receiver}, {"fidelity", d.fidelity}});
  doc["qpq_checks"] = qpq_checks;
  doc["nondegenerate_checks"] = nondegenerate_checks;
  doc["detection_events"] = detection_events;
  doc["privacy"] = nlohmann::json::array();
  for (const auto& p : privacy)
    doc["privacy"].push_back({{"qdc", p.qdc},
                              {"secret_distance", opt(p.secret_distance)},
                              {"receiver_distance", opt(p.receiver_distance)}});
  doc["colluder_fidelities"] = nlohmann::json::array();
  for (const auto& [a, f] : colluder_fidelities) doc["colluder_fidelities"].push_back({{"sender", a}, {"fidelity", f}});
  doc["backreactions"] = backreactions;
  doc["metrics"] = metrics.to_json();
  return doc;
}

SessionReport run_session(const SessionConfig& c) {
  c.validate();
  const Rng root(c.seed);
  Rng secret_rng = root.split(1);
  Rng rng = root.split(2);
  netsim::Network net(root.split(3).next_u64());
  const std::uint64_t cells = memory_size(c.senders);
  const int w = c.width;

  for (int a = 0; a < c.senders; ++a) net.add_user(sender_id(a));
  for (int b = 0; b < c.receivers; ++b) net.add_user(receiver_id(b));
  std::vector<qram::QramInstance> key_store;
  for (int k = 0; k < c.qdc_count; ++k) {
    net.add_node({qdc_id(k), qram::QramInstance::empty_quantum(cells, w)});
    key_store.push_back(qram::QramInstance::classical(std::vector<std::uint64_t>(cells, 0), 2 * w));
    for (int a = 0; a < c.senders; ++a) net.connect(sender_id(a), qdc_id(k), c.loss_probability);
    for (int b = 0; b < c.receivers; ++b) net.connect(receiver_id(b), qdc_id(k), c.loss_probability);
  }

  std::vector<QuantumState> secrets = c.secrets;
  if (secrets.empty())
    for (int a = 0; a < c.senders; ++a) secrets.push_back(random_state(secret_layout(w), secret_rng));
  for (auto& s : secrets) s = s.with_layout(secret_layout(w));

  SessionReport report;

  // Upload: share s of sender a goes to QDC (a + s) mod q at public address a.
  for (int a = 0; a < c.senders; ++a) {
    const ShareSet set = qss_split(secrets[static_cast<std::size_t>(a)], c.shares, rng);
    for (const auto& share : set.shares) {
      const int k = share_holder(a, share.index, c.qdc_count);
      if (share.quantum) {
        net.distribute_epr(sender_id(a), qdc_id(k), static_cast<std::uint64_t>(w));
        auto delivered = net.teleport(sender_id(a), qdc_id(k), *share.quantum);
        auto& node = net.node(qdc_id(k));
        node.qram = qram::write(node.qram, static_cast<std::uint64_t>(a), delivered.state).db;
      }
      net.send_classical(sender_id(a), qdc_id(k), static_cast<std::uint64_t>(2 * w),
                         {{"event", "key_upload"}, {"address", a}});
      key_store[static_cast<std::size_t>(k)] =
          qram::write(key_store[static_cast<std::size_t>(k)], static_cast<std::uint64_t>(a), share.key);
    }
  }

  if (c.adversary.kind == AdversaryKind::colluding) {
    const auto colluders = effective_colluders(c);
    const std::set<int> pool(colluders.begin(), colluders.end());
    for (int a = 0; a < c.senders; ++a) {
      ShareSet pooled;
      pooled.n = c.shares;
      pooled.width = w;
      for (int s = 0; s < c.shares; ++s) {
        const int k = share_holder(a, s, c.qdc_count);
        if (!pool.contains(k)) break;
        Share share{s, std::nullopt, key_store[static_cast<std::size_t>(k)].data()[static_cast<std::size_t>(a)]};
        if (s == 0)
          share.quantum = partial_trace(net.node(qdc_id(k)).qram.cells(), {cell_name(static_cast<std::uint64_t>(a))})
                              .with_layout(secret_layout(w));
        pooled.shares.push_back(std::move(share));
      }
      if (pooled.shares.size() != static_cast<std::size_t>(c.shares)) continue;
      const double f = fidelity(qss_reconstruct(pooled), secrets[static_cast<std::size_t>(a)]);
      report.colluder_fidelities.emplace_back(a, f);
      net.note("collusion", {{"sender", a}, {"qdcs", colluders}});
    }
  }

  const AdversaryKind server_kind =
      c.adversary.kind == AdversaryKind::measuring ? AdversaryKind::measuring : AdversaryKind::honest;
  const auto pairing = effective_pairing(c);
  for (const auto& [a, b] : pairing) {
    const std::string user = receiver_id(b);
    ShareSet got;
    got.n = c.shares;
    got.width = w;
    for (int s = 0; s < c.shares; ++s) {
      const int k = share_holder(a, s, c.qdc_count);
      const std::string qdc = qdc_id(k);
      const auto& keys = key_store[static_cast<std::size_t>(k)];
      const auto query_qubits = static_cast<std::uint64_t>(keys.address_width() + keys.word_width());
      net.distribute_epr(user, qdc, 4 * query_qubits);
      auto server = [&](const QuantumState& q) {
        auto there = net.teleport(user, qdc, q);
        net.note("qpq_answer", {{"qdc", qdc}});
        auto answered = server_answer(there.state, keys, server_kind, rng);
        return net.teleport(qdc, user, answered).state;
      };
      const auto qpq = qpq_run(static_cast<std::uint64_t>(a), keys, server, rng);
      report.qpq_checks += 1;
      if (a != 0) report.nondegenerate_checks += 1;
      if (!qpq.verified) {
        report.detection_events += 1;
        net.note("cheat_detected", {{"qdc", qdc}, {"user", user}});
      }
      Share share{s, std::nullopt, qpq.answer};

      if (s == 0) {
        auto& node = net.node(qdc);
        net.distribute_epr(user, qdc, 2 * static_cast<std::uint64_t>(w));
        auto probe = net.teleport(user, qdc, maximally_mixed_probe(w));
        const auto address = static_cast<std::uint64_t>(a);
        const QuantumState server_view = pad_twirl(node.qram.cells(), cell_name(address));
        report.backreactions.push_back(private_read_swap(server_view, address, probe.state).backreaction);
        auto read = private_read_swap(node.qram.cells(), address, probe.state);
        node.qram = qram::QramInstance::quantum(read.memory_after);
        share.quantum = net.teleport(qdc, user, read.payload).state.with_layout(secret_layout(w));
      }
      got.shares.push_back(std::move(share));
    }
    const double f = fidelity(qss_reconstruct(got), secrets[static_cast<std::size_t>(a)]);
    report.delivered.push_back({a, b, f});
    net.note("delivered", {{"sender", sender_id(a)}, {"receiver", user}});
  }

  const bool metrics_feasible = c.privacy_metrics && c.senders <= 2 && w == 1 && c.shares <= 3;
  for (int k = 0; k < c.qdc_count && c.privacy_metrics; ++k) {
    if (metrics_feasible) {
      report.privacy.push_back(privacy_for(k, c));
    } else {
      report.privacy.push_back({k, std::nullopt, std::nullopt});
    }
  }

  report.metrics = net.metrics();
  report.transcript = net.event_log_jsonl();
  return report;
}

}  // namespace qdc::privacy
