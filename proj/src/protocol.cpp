#include "cvqkd/protocol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cvqkd {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("SystemModel: ") + what);
}

}  // namespace

void SystemModel::validate() const {
  require(v >= 1.0, "source variance V must be >= 1");
  require(t > 0.0 && t <= 1.0, "channel transmissivity T must be in (0, 1]");
  require(xi >= 0.0, "excess noise xi must be >= 0");
  require(eta > 0.0 && eta <= 1.0, "detector efficiency eta must be in (0, 1]");
  require(v_el >= 0.0, "electronic noise v_el must be >= 0");
  require(memory.tau1 >= 0.0 && memory.tau1 <= 1.0, "memory tau1 must be in [0, 1]");
  require(memory.tau2 >= 0.0 && memory.tau2 <= 1.0, "memory tau2 must be in [0, 1]");
  require(memory.omega1 >= 1.0, "memory omega1 must be >= 1");
  require(memory.omega2 >= 1.0, "memory omega2 must be >= 1");
}

DerivedNoises derived_noises(const SystemModel& model) {
  model.validate();
  DerivedNoises d;
  d.chi_line = model.xi + 1.0 / model.t - 1.0;
  d.chi_het = (1.0 + (1.0 - model.eta) + 2.0 * model.v_el) / model.eta;
  d.chi_tot = d.chi_line + d.chi_het / model.t;
  d.chi_d = ((1.0 - model.eta) + 2.0 * model.v_el) / model.eta;
  d.chi_t = d.chi_line + d.chi_d / model.t;
  if (model.eta < 1.0) d.upsilon = 1.0 + 2.0 * model.v_el / (1.0 - model.eta);
  return d;
}

CovarianceMatrix shared_state_cm(const SystemModel& model) {
  const DerivedNoises d = derived_noises(model);
  const double c = std::sqrt(model.t) * std::sqrt(model.v * model.v - 1.0);
  const double vb = model.t * (model.v + d.chi_line);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = m(1, 1) = model.v;
  m(2, 2) = m(3, 3) = vb;
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return CovarianceMatrix(m, {"A", "B1"});
}

double mutual_info_ab(const SystemModel& model) {
  const DerivedNoises d = derived_noises(model);
  return std::log2((model.v + d.chi_tot) / (1.0 + d.chi_tot));
}

CovarianceMatrix detector_dilated_state(const SystemModel& model) {
  const DerivedNoises d = derived_noises(model);
  CovarianceMatrix state = shared_state_cm(model);
  if (model.eta == 1.0 && model.v_el == 0.0) {
    // Ideal detector: B2 is B1 itself, no dilation modes.
    return CovarianceMatrix(state.matrix(), {"A", "B2"});
  }
  if (!d.upsilon) {
    std::ostringstream os;
    os << "detector_dilated_state: eta = 1 with v_el = " << model.v_el
       << " has no finite-variance dilation";
    throw std::domain_error(os.str());
  }
  state = attach(state, tmsv_cm(*d.upsilon, "F0", "G"));
  state = apply_beamsplitter(state, "B1", "F0", model.eta);
  // B1 slot now holds the detected mode, F0 the detector loss mode.
  Eigen::MatrixXd m = state.matrix();
  return CovarianceMatrix(std::move(m), {"A", "B2", "F", "G"});
}

}  // namespace cvqkd
