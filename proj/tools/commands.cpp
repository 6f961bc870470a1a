#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qdc/ft.hpp"
#include "qdc/privacy.hpp"
#include "qdc/qram.hpp"
#include "qdc/sensing.hpp"

namespace qdc::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

void reject_unknown(const json& section, const std::set<std::string>& known, const std::string& where) {
  if (!section.is_object()) throw ConfigError("config section '" + where + "' must be an object");
  for (const auto& [key, _] : section.items())
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in config section '" + where + "'");
}

template <class T>
T get_or(const json& section, const char* key, T fallback) {
  if (!section.contains(key)) return fallback;
  try {
    return section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

bool given(const CLI::App* app, const std::string& name) { return app->get_option(name)->count() > 0; }

template <class T>
void override(const CLI::App* app, const std::string& name, T& target, const T& flag) {
  if (given(app, name)) target = flag;
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("expected a comma-separated list of integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

// ---- estimate -------------------------------------------------------------

struct EstimateFlags {
  std::string delay_model;
  double kappa = 1.0;
  double threshold_preset = 1.0;
  int n_min_log = 4;
  int n_max_log = 20;
  double p = 1e-3;
  double budget = 0.01;
  double distillation_share = 0.5;
  double f_outsourced = 0.99;
  std::uint64_t t_count = 0;
  std::uint64_t tiles = 0;
  std::uint64_t factories = 1;
  int d_max = 51;
  bool odd_only = false;
};

std::string cmd_estimate(const json& section, const CLI::App* sub, const EstimateFlags& f, const std::string& format) {
  json params_doc = section;
  for (const char* k : {"n_min_log", "n_max_log", "threshold_preset"}) params_doc.erase(k);
  ft::FtCostParams params = ft::FtCostParams::from_json(params_doc);
  if (given(sub, "--delay-model")) params.delay_model = ft::parse_delay_model(f.delay_model);
  override(sub, "--kappa", params.kappa, f.kappa);
  override(sub, "--p", params.p, f.p);
  override(sub, "--budget", params.budget, f.budget);
  override(sub, "--distillation-share", params.distillation_share, f.distillation_share);
  override(sub, "--f-outsourced", params.f_outsourced, f.f_outsourced);
  override(sub, "--t-count", params.t_count_total, f.t_count);
  override(sub, "--tiles", params.tiles, f.tiles);
  override(sub, "--factories", params.factories, f.factories);
  override(sub, "--d-max", params.distances.max, f.d_max);
  if (f.odd_only) params.distances.odd_only = true;
  params.validate();

  int n_min = get_or(section, "n_min_log", 4);
  int n_max = get_or(section, "n_max_log", 20);
  override(sub, "--n-min-log", n_min, f.n_min_log);
  override(sub, "--n-max-log", n_max, f.n_max_log);
  std::optional<double> preset;
  if (section.contains("threshold_preset")) preset = get_or(section, "threshold_preset", 1.0);
  if (given(sub, "--threshold-preset")) preset = f.threshold_preset;
  if (preset) {
    bool known = false;
    for (double t : ft::kThresholds) known = known || t == *preset;
    if (!known) throw ConfigError("threshold preset must be one of 0.1, 1, 10");
    params.kappa = ft::threshold_preset_kappa(params, *preset);
  }

  const auto rows = ft::sweep(params, ft::powers_of_two(n_min, n_max));
  if (format == "json") {
    json doc = ft::sweep_json(rows);
    doc["params"] = params.to_json();
    if (preset) doc["threshold_preset"] = *preset;
    return doc.dump(2) + "\n";
  }
  return ft::sweep_csv(rows);
}

// ---- qram -----------------------------------------------------------------

struct QramFlags {
  std::string demo = "all";
  std::string data;
  int word_width = 2;
  std::string addresses;
  std::string unary;
  std::uint64_t n = 4;
};

std::string basis_label(const RegisterLayout& layout, std::uint64_t index) {
  std::string label;
  for (const auto& r : layout.registers()) {
    if (!label.empty()) label += ' ';
    label += to_bitstring(layout.field(r.name).get(index), r.width);
  }
  return label;
}

json summarize(const std::string& demo, const QuantumState& state) {
  json terms = json::array();
  const QuantumState pure = state.is_pure() ? state : as_pure(state).value_or(state);
  if (pure.is_pure()) {
    const auto& a = pure.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (std::abs(a[i]) > 1e-12)
        terms.push_back({{"basis", basis_label(pure.layout(), static_cast<std::uint64_t>(i))},
                         {"re", a[i].real()}, {"im", a[i].imag()}});
  } else {
    for (std::uint64_t i = 0; i < state.dimension(); ++i)
      if (state.probability(i) > 1e-12)
        terms.push_back({{"basis", basis_label(state.layout(), i)}, {"probability", state.probability(i)}});
  }
  std::string regs;
  for (const auto& r : state.layout().registers())
    regs += (regs.empty() ? "" : " ") + r.name + "[" + std::to_string(r.width) + "]";
  return {{"demo", demo}, {"registers", regs}, {"pure", pure.is_pure()}, {"terms", std::move(terms)}};
}

json demo_classical(const json& section, const CLI::App* sub, const QramFlags& f) {
  std::vector<std::uint64_t> data = get_or(section, "data", std::vector<std::uint64_t>{3, 0, 1, 2});
  if (given(sub, "--data")) data = parse_list(f.data);
  int w = get_or(section, "word_width", 2);
  override(sub, "--word-width", w, f.word_width);
  const auto db = qram::QramInstance::classical(data, w);
  std::vector<std::uint64_t> addrs = get_or(section, "addresses", std::vector<std::uint64_t>{});
  if (given(sub, "--addresses")) addrs = parse_list(f.addresses);
  if (addrs.empty()) addrs = db.size() >= 4 ? std::vector<std::uint64_t>{0, 2} : std::vector<std::uint64_t>{0, 1};

  const RegisterLayout layout{{"Q1", db.address_width()}, {"Q2", db.word_width()}};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  for (auto a : addrs) {
    if (a >= db.size()) throw IndexError("address " + std::to_string(a) + " >= N = " + std::to_string(db.size()));
    psi[static_cast<Eigen::Index>(layout.field("Q1").with(0, a))] += 1.0;
  }
  const auto input = QuantumState::from_amplitudes(layout, std::move(psi), true);
  json doc = summarize("classical_query", qram::classical_query(input, db));
  doc["input"] = summarize("input", input)["terms"];
  doc["db"] = db.to_json();
  return doc;
}

json demo_swap() {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::VectorXcd plus(2);
  plus << r, r;
  const auto q1 = QuantumState::from_amplitudes(RegisterLayout{{"Q1", 1}}, plus);
  const auto q2 = QuantumState::basis(RegisterLayout{{"Q2", 1}}, std::uint64_t{0});
  const auto d1 = QuantumState::basis(RegisterLayout{{"D1", 1}}, std::uint64_t{1});
  const auto d2 = QuantumState::from_amplitudes(RegisterLayout{{"D2", 1}}, plus);
  const auto input = tensor(tensor(q1, q2), tensor(d1, d2));
  json doc = summarize("quantum_query_swap", qram::quantum_query_swap(input));
  doc["input"] = summarize("input", input)["terms"];
  return doc;
}

json demo_compress(const json& section, const CLI::App* sub, const QramFlags& f) {
  std::string unary = get_or(section, "unary", std::string{});
  override(sub, "--unary", unary, f.unary);
  std::uint64_t n = get_or(section, "n", std::uint64_t{4});
  override(sub, "--n", n, f.n);

  QuantumState memory = QuantumState::basis(RegisterLayout{{"D1", 1}, {"D2", 1}}, std::uint64_t{0});
  if (!unary.empty()) {
    std::vector<Register> regs;
    for (const auto& name : cell_names(unary.size())) regs.push_back({name, 1});
    memory = QuantumState::basis(RegisterLayout(std::move(regs)), unary);
  } else {
    if (n < 2 || n > 16 || !is_power_of_two(n)) throw ConfigError("compression demo needs N a power of two in [2, 16]");
    std::vector<cplx> alpha(n, cplx(1.0 / std::sqrt(static_cast<double>(n))));
    memory = qram::unary_state(alpha);
  }
  const auto result = qram::compress_unary(memory);
  const auto back = qram::decompress(result.binary, memory.layout().registers().size());
  json doc = summarize("compress_unary", result.binary);
  doc["input"] = summarize("input", memory)["terms"];
  doc["binary_purity"] = result.binary_purity;
  doc["round_trip_fidelity"] = fidelity(back, memory);
  return doc;
}

std::string cmd_qram(const json& section, const CLI::App* sub, const QramFlags& f, const std::string& format) {
  std::string demo = get_or(section, "demo", std::string{"all"});
  override(sub, "--demo", demo, f.demo);
  if (demo != "all" && demo != "classical" && demo != "swap" && demo != "compress")
    throw ConfigError("demo must be classical, swap, compress or all");
  json demos = json::array();
  if (demo == "all" || demo == "classical") demos.push_back(demo_classical(section, sub, f));
  if (demo == "all" || demo == "swap") demos.push_back(demo_swap());
  if (demo == "all" || demo == "compress") demos.push_back(demo_compress(section, sub, f));

  if (format == "json") return json{{"demos", demos}}.dump(2) + "\n";
  std::ostringstream csv;
  csv << "demo,basis,re,im\n";
  for (const auto& d : demos)
    for (const auto& t : d["terms"]) {
      csv << d["demo"].get<std::string>() << ',' << t["basis"].get<std::string>() << ',';
      if (t.contains("re")) csv << num(t["re"].get<double>()) << ',' << num(t["im"].get<double>());
      else csv << num(t["probability"].get<double>()) << ",";
      csv << '\n';
    }
  return csv.str();
}

// ---- protocol -------------------------------------------------------------

struct ProtocolFlags {
  int senders = 2;
  int receivers = 2;
  int qdcs = 2;
  int shares = 2;
  int width = 1;
  std::string adversary = "honest";
  std::string colluders;
  int sessions = 1;
  double loss = 0.0;
  std::string transcript;
  bool no_privacy_metrics = false;
};

std::string cmd_protocol(const json& section, const CLI::App* sub, const ProtocolFlags& f, std::uint64_t seed,
                         const std::string& format) {
  privacy::SessionConfig base;
  base.senders = get_or(section, "senders", base.senders);
  base.receivers = get_or(section, "receivers", base.receivers);
  base.qdc_count = get_or(section, "qdcs", base.qdc_count);
  base.shares = get_or(section, "shares", base.shares);
  base.width = get_or(section, "width", base.width);
  base.loss_probability = get_or(section, "loss", base.loss_probability);
  base.privacy_metrics = get_or(section, "privacy_metrics", true);
  std::string adversary = get_or(section, "adversary", std::string{"honest"});
  std::vector<std::uint64_t> colluders = get_or(section, "colluders", std::vector<std::uint64_t>{});
  int sessions = get_or(section, "sessions", 1);
  std::string transcript = get_or(section, "transcript", std::string{});
  if (section.contains("pairing")) {
    for (const auto& p : section.at("pairing")) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("pairing entries must be [sender, receiver]");
      base.pairing.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
  }

  override(sub, "--senders", base.senders, f.senders);
  override(sub, "--receivers", base.receivers, f.receivers);
  override(sub, "--qdcs", base.qdc_count, f.qdcs);
  override(sub, "--shares", base.shares, f.shares);
  override(sub, "--width", base.width, f.width);
  override(sub, "--loss", base.loss_probability, f.loss);
  override(sub, "--adversary", adversary, f.adversary);
  override(sub, "--sessions", sessions, f.sessions);
  override(sub, "--transcript", transcript, f.transcript);
  if (given(sub, "--colluders")) colluders = parse_list(f.colluders);
  if (f.no_privacy_metrics) base.privacy_metrics = false;
  base.adversary.kind = privacy::parse_adversary(adversary);
  for (auto k : colluders) base.adversary.colluders.push_back(static_cast<int>(k));
  if (sessions < 1 || sessions > 100000) throw ConfigError("sessions must lie in [1, 100000]");
  base.validate();

  const Rng root(seed);
  json reports = json::array();
  std::ostringstream log;
  std::uint64_t checks = 0, nondegenerate = 0, detections = 0;
  double min_fidelity = 1.0, worst_privacy = 0.0;
  std::optional<double> min_colluder;
  std::ostringstream csv;
  csv << "session,sender,receiver,fidelity\n";
  for (int i = 0; i < sessions; ++i) {
    privacy::SessionConfig cfg = base;
    cfg.seed = root.split(static_cast<std::uint64_t>(i)).seed();
    // Exact privacy metrics are costly; the first session carries them.
    cfg.privacy_metrics = base.privacy_metrics && i == 0;
    const auto report = privacy::run_session(cfg);
    checks += report.qpq_checks;
    nondegenerate += report.nondegenerate_checks;
    detections += report.detection_events;
    for (const auto& d : report.delivered) {
      min_fidelity = std::min(min_fidelity, d.fidelity);
      csv << i << ',' << d.sender << ',' << d.receiver << ',' << num(d.fidelity) << '\n';
    }
    worst_privacy = std::max(worst_privacy, report.max_privacy_metric());
    for (const auto& [a, fid] : report.colluder_fidelities) min_colluder = std::min(min_colluder.value_or(1.0), fid);
    json r = report.to_json();
    r["session"] = i;
    r["seed"] = cfg.seed;
    reports.push_back(std::move(r));
    std::istringstream lines(report.transcript);
    for (std::string line; std::getline(lines, line);) {
      json e = json::parse(line);
      e["session"] = i;
      log << e.dump() << '\n';
    }
  }

  if (!transcript.empty()) {
    std::ofstream t(transcript, std::ios::binary);
    if (!t) throw ConfigError("cannot write transcript '" + transcript + "'");
    t << log.str();
  }
  if (format == "csv") return csv.str();

  const bool measuring = base.adversary.kind == privacy::AdversaryKind::measuring;
  json summary = {{"sessions", sessions},
                  {"qpq_checks", checks},
                  {"detection_events", detections},
                  {"detection_rate", checks ? static_cast<double>(detections) / static_cast<double>(checks) : 0.0},
                  {"expected_detection_rate",
                   measuring && checks ? 0.5 * static_cast<double>(nondegenerate) / static_cast<double>(checks) : 0.0},
                  {"min_delivered_fidelity", min_fidelity},
                  {"max_privacy_metric", worst_privacy},
                  {"min_colluder_fidelity", min_colluder ? json(*min_colluder) : json(nullptr)}};
  json config = {{"senders", base.senders}, {"receivers", base.receivers}, {"qdcs", base.qdc_count},
                 {"shares", base.shares},   {"width", base.width},         {"adversary", adversary},
                 {"loss", base.loss_probability}, {"seed", seed}};
  return json{{"config", config}, {"summary", summary}, {"sessions", reports}}.dump(2) + "\n";
}

// ---- sense ----------------------------------------------------------------

struct SenseFlags {
  double phi = 1.0;
  int bins = 4;
  std::uint64_t shots = 10000;
  int trials = 16;
  std::uint64_t bands = 4;
  std::uint64_t time_bins = 256;
  double loss = 0.0;
};

std::string cmd_sense(const json& section, const CLI::App* sub, const SenseFlags& f, std::uint64_t seed,
                      const std::string& format) {
  sensing::PhaseEstimationConfig cfg;
  cfg.phi_true = get_or(section, "phi", 1.0);
  cfg.bins = get_or(section, "bins", cfg.bins);
  const auto shots = get_or(section, "shots", json(cfg.shots));
  if (!shots.is_number_unsigned() && !(shots.is_number_integer() && shots.get<long long>() >= 0))
    throw ConfigError("shots must be a non-negative integer");
  cfg.shots = shots.get<std::uint64_t>();
  cfg.trials = get_or(section, "trials", cfg.trials);
  cfg.loss_probability = get_or(section, "loss", 0.0);
  std::uint64_t bands = get_or(section, "R", std::uint64_t{4});
  std::uint64_t time_bins = get_or(section, "T_bin", std::uint64_t{256});
  override(sub, "--phi", cfg.phi_true, f.phi);
  override(sub, "--bins", cfg.bins, f.bins);
  override(sub, "--shots", cfg.shots, f.shots);
  override(sub, "--trials", cfg.trials, f.trials);
  override(sub, "--loss", cfg.loss_probability, f.loss);
  override(sub, "--R", bands, f.bands);
  override(sub, "--T-bin", time_bins, f.time_bins);
  cfg.seed = seed;
  if (cfg.shots == 0) throw ConfigError("shots must be >= 1");
  const auto cost = sensing::hardware_cost(bands, time_bins);
  const auto result = sensing::phase_estimation_run(cfg);

  if (format == "csv") {
    std::ostringstream csv;
    csv << "phi_true,phi_est,rmse,shots,pairs_consumed_per_event,pairs_uncompressed_per_event,qubits_reference,qubits_qdc\n"
        << num(result.phi_true) << ',' << num(result.phi_est) << ',' << num(result.rmse) << ',' << result.shots << ','
        << result.pairs_consumed_per_event << ',' << result.pairs_uncompressed_per_event << ','
        << cost.qubits_reference << ',' << cost.qubits_qdc << '\n';
    return csv.str();
  }
  json doc = result.to_json();
  doc["cost_account"] = cost.to_json();
  doc["seed"] = seed;
  return doc.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum data center simulator", "qdc"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string config_path, out_path, format;
  app.add_option("--seed", seed, "Seed for every stochastic step");
  app.add_option("--config", config_path, "JSON config file; flags override it");
  app.add_option("--out", out_path, "Write output here instead of stdout");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  EstimateFlags ef;
  auto* est = app.add_subcommand("estimate", "Relative time-cost sweep over N");
  est->add_option("--delay-model", ef.delay_model)->check(CLI::IsMember({"sqrt", "log", "none"}));
  est->add_option("--kappa", ef.kappa, "Delay prefactor");
  est->add_option("--threshold-preset", ef.threshold_preset, "Pick kappa so the curves cross 0.1, 1 or 10");
  est->add_option("--n-min-log", ef.n_min_log);
  est->add_option("--n-max-log", ef.n_max_log);
  est->add_option("--p", ef.p, "Physical error rate");
  est->add_option("--budget", ef.budget);
  est->add_option("--distillation-share", ef.distillation_share);
  est->add_option("--f-outsourced", ef.f_outsourced);
  est->add_option("--t-count", ef.t_count);
  est->add_option("--tiles", ef.tiles);
  est->add_option("--factories", ef.factories);
  est->add_option("--d-max", ef.d_max);
  est->add_flag("--odd-only", ef.odd_only, "Restrict to odd code distances");

  QramFlags qf;
  auto* qr = app.add_subcommand("qram", "QRAM query and compression demos");
  qr->add_option("--demo", qf.demo)->check(CLI::IsMember({"all", "classical", "swap", "compress"}));
  qr->add_option("--data", qf.data, "Classical words, e.g. 3,0,1,2");
  qr->add_option("--word-width", qf.word_width);
  qr->add_option("--addresses", qf.addresses, "Addresses superposed in the query, e.g. 0,2");
  qr->add_option("--unary", qf.unary, "Basis memory to compress, e.g. 0100");
  qr->add_option("--n", qf.n, "Uniform single-excitation memory size when --unary is absent");

  ProtocolFlags pf;
  auto* pr = app.add_subcommand("protocol", "Multi-party private communication sessions");
  pr->add_option("--senders", pf.senders);
  pr->add_option("--receivers", pf.receivers);
  pr->add_option("--qdcs", pf.qdcs);
  pr->add_option("--shares", pf.shares);
  pr->add_option("--width", pf.width);
  pr->add_option("--adversary", pf.adversary)->check(CLI::IsMember({"honest", "measuring", "colluding"}));
  pr->add_option("--colluders", pf.colluders, "Colluding QDC indices, e.g. 0,1");
  pr->add_option("--sessions", pf.sessions);
  pr->add_option("--loss", pf.loss);
  pr->add_option("--transcript", pf.transcript, "JSON-lines event log path");
  pr->add_flag("--no-privacy-metrics", pf.no_privacy_metrics);

  SenseFlags sf;
  auto* se = app.add_subcommand("sense", "Two-site phase estimation with compressed which-bin data");
  se->add_option("--phi", sf.phi);
  se->add_option("--bins", sf.bins);
  se->add_option("--shots", sf.shots);
  se->add_option("--trials", sf.trials);
  se->add_option("--R", sf.bands, "Frequency bands for the cost account");
  se->add_option("--T-bin", sf.time_bins, "Time bins for the cost account");
  se->add_option("--loss", sf.loss);

  std::vector<std::string> storage = args;
  if (storage.empty()) storage.emplace_back("qdc");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    json config = config_path.empty() ? json::object() : load_config(config_path);
    reject_unknown(config, {"seed", "format", "out", "estimate", "qram", "protocol", "sense"}, "top level");
    if (!given(&app, "--seed")) seed = get_or(config, "seed", seed);
    if (!given(&app, "--out")) out_path = get_or(config, "out", out_path);
    if (!given(&app, "--format")) format = get_or(config, "format", format);
    if (!format.empty() && format != "csv" && format != "json") throw ConfigError("format must be csv or json");

    auto section = [&](const char* name, const std::set<std::string>& known) {
      json s = config.contains(name) ? config.at(name) : json::object();
      reject_unknown(s, known, name);
      return s;
    };

    std::string payload;
    if (est->parsed()) {
      const auto s = section("estimate", {"logical_qubits", "t_count_total", "p", "budget", "distillation_share",
                                          "f_outsourced", "tiles", "kappa", "delay_model", "cycles_per_distill",
                                          "factories", "factory_tiles", "io_cycles_per_outsourced_state", "d_min",
                                          "d_max", "odd_only", "cycle_time_us", "n_min_log", "n_max_log",
                                          "threshold_preset"});
      payload = cmd_estimate(s, est, ef, format.empty() ? "csv" : format);
    } else if (qr->parsed()) {
      const auto s = section("qram", {"demo", "data", "word_width", "addresses", "unary", "n"});
      payload = cmd_qram(s, qr, qf, format.empty() ? "json" : format);
    } else if (pr->parsed()) {
      const auto s = section("protocol", {"senders", "receivers", "qdcs", "shares", "width", "adversary", "colluders",
                                          "sessions", "loss", "transcript", "pairing", "privacy_metrics"});
      payload = cmd_protocol(s, pr, pf, seed, format.empty() ? "json" : format);
    } else {
      const auto s = section("sense", {"phi", "bins", "shots", "trials", "R", "T_bin", "loss"});
      payload = cmd_sense(s, se, sf, seed, format.empty() ? "json" : format);
    }

    if (out_path.empty()) {
      out << payload;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot write output file '" + out_path + "'");
      file << payload;
    }
    return kExitOk;
  } catch (const SubspaceViolation& e) {
    err << "error: " << e.what() << "\nleaked weight: " << e.leaked_weight() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace qdc::cli
