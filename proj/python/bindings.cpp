#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdc/ft.hpp"
#include "qdc/privacy.hpp"
#include "qdc/qram.hpp"
#include "qdc/sensing.hpp"

namespace py = pybind11;
using namespace qdc;

namespace {

QuantumState pure_on(const RegisterLayout& layout, const Eigen::VectorXcd& amps) {
  return QuantumState::from_amplitudes(layout, amps, true);
}

Eigen::VectorXcd classical_query(const std::vector<std::uint64_t>& data, int word_width,
                                 const Eigen::VectorXcd& address_amplitudes) {
  const auto db = qram::QramInstance::classical(data, word_width);
  const RegisterLayout layout{{"Q1", db.address_width()}, {"Q2", word_width}};
  if (static_cast<std::uint64_t>(address_amplitudes.size()) != db.size())
    throw ConfigError("need one address amplitude per QRAM cell");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  for (Eigen::Index a = 0; a < address_amplitudes.size(); ++a) psi[a << word_width] = address_amplitudes[a];
  return qram::classical_query(pure_on(layout, psi), db).amplitudes();
}

py::dict compress(const std::vector<cplx>& alpha) {
  const auto r = qram::compress_unary(qram::unary_state(alpha));
  py::dict out;
  out["binary"] = Eigen::VectorXcd(r.binary.amplitudes());
  out["purity"] = r.binary_purity;
  return out;
}

Eigen::VectorXcd decompress(const Eigen::VectorXcd& binary) {
  const auto n = static_cast<std::uint64_t>(binary.size());
  const auto b = pure_on(RegisterLayout{{"Q1", log2_exact(n)}}, binary);
  return qram::decompress(b, n).amplitudes();
}

std::string estimate(const std::string& params_json, std::uint64_t n) {
  const auto params = ft::FtCostParams::from_json(nlohmann::json::parse(params_json));
  const auto rc = ft::relative_time_cost(params, n);
  return nlohmann::json{{"ratio", rc.ratio}, {"with_qdc", rc.with_qdc.to_json()},
                        {"without_qdc", rc.without_qdc.to_json()}}
      .dump();
}

std::string sweep(const std::string& params_json, int log_min, int log_max) {
  const auto params = ft::FtCostParams::from_json(nlohmann::json::parse(params_json));
  return ft::sweep_json(ft::sweep(params, ft::powers_of_two(log_min, log_max))).dump();
}

double preset_kappa(const std::string& params_json, double threshold) {
  return ft::threshold_preset_kappa(ft::FtCostParams::from_json(nlohmann::json::parse(params_json)), threshold);
}

std::string session(int senders, int receivers, int qdcs, int shares, int width, const std::string& adversary,
                    std::uint64_t seed, double loss, bool privacy_metrics) {
  privacy::SessionConfig c;
  c.senders = senders;
  c.receivers = receivers;
  c.qdc_count = qdcs;
  c.shares = shares;
  c.width = width;
  c.adversary.kind = privacy::parse_adversary(adversary);
  c.seed = seed;
  c.loss_probability = loss;
  c.privacy_metrics = privacy_metrics;
  return privacy::run_session(c).to_json().dump();
}

std::string phase_estimation(double phi, int bins, std::uint64_t shots, std::uint64_t seed, int trials,
                             double loss) {
  sensing::PhaseEstimationConfig c;
  c.phi_true = phi;
  c.bins = bins;
  c.shots = shots;
  c.seed = seed;
  c.trials = trials;
  c.loss_probability = loss;
  return sensing::phase_estimation_run(c).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_qdcsim, m) {
  m.doc() = "Quantum data center simulator core";
  m.def("classical_query", &classical_query, py::arg("data"), py::arg("word_width"), py::arg("address"));
  m.def("compress_unary", &compress, py::arg("alpha"));
  m.def("decompress", &decompress, py::arg("binary"));
  m.def("estimate_json", &estimate, py::arg("params"), py::arg("n"));
  m.def("sweep_json", &sweep, py::arg("params"), py::arg("log_min"), py::arg("log_max"));
  m.def("threshold_preset_kappa", &preset_kappa, py::arg("params"), py::arg("threshold"));
  m.def("session_json", &session, py::arg("senders"), py::arg("receivers"), py::arg("qdcs"), py::arg("shares"),
        py::arg("width"), py::arg("adversary"), py::arg("seed"), py::arg("loss"), py::arg("privacy_metrics"));
  m.def("phase_estimation_json", &phase_estimation, py::arg("phi"), py::arg("bins"), py::arg("shots"),
        py::arg("seed"), py::arg("trials"), py::arg("loss"));
  m.def("hardware_cost", [](std::uint64_t r, std::uint64_t t) {
    const auto c = sensing::hardware_cost(r, t);
    return py::make_tuple(c.qubits_reference, c.qubits_qdc);
  });
}
