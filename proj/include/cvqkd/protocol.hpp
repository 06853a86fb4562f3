// Physical model of the Gaussian no-switching protocol: Alice's
// entanglement-based source, the thermal lossy channel, and Bob's trusted
// noisy heterodyne detector.

#pragma once

#include "cvqkd/gaussian.hpp"

#include <optional>

namespace cvqkd {

// Eve's quantum-memory decoherence channels, one per stored arm.
struct MemoryParams {
  double tau1 = 1.0;
  double tau2 = 1.0;
  double omega1 = 1.0;
  double omega2 = 1.0;

  static MemoryParams identical(double tau, double omega) { return {tau, tau, omega, omega}; }
};

// All physical parameters of one evaluation point. V is the source quadrature
// variance (V = V_A + 1, shot-noise units); xi is the excess noise referred to
// the channel input.
struct SystemModel {
  double v = 3.0;       // source quadrature variance, >= 1
  double t = 1.0;       // channel transmissivity, (0, 1]
  double xi = 0.0;      // excess noise (channel-input referred), >= 0
  double eta = 1.0;     // detector efficiency, (0, 1]
  double v_el = 0.0;    // detector electronic noise variance, >= 0
  MemoryParams memory;

  void validate() const;  // throws std::domain_error on violation

  SystemModel with_v(double new_v) const {
    SystemModel m = *this;
    m.v = new_v;
    return m;
  }
};

struct DerivedNoises {
  double chi_line;               // xi + 1/T - 1
  double chi_het;                // (1 + (1-eta) + 2 v_el) / eta
  double chi_tot;                // chi_line + chi_het / T
  double chi_d;                  // ((1-eta) + 2 v_el) / eta
  double chi_t;                  // chi_line + chi_d / T
  std::optional<double> upsilon; // 1 + 2 v_el/(1-eta); empty when eta = 1
};

DerivedNoises derived_noises(const SystemModel& model);

// Covariance matrix of (A, B1) after the channel:
// [V I, sqrt(T) sqrt(V^2-1) Z; sqrt(T) sqrt(V^2-1) Z, T(V + chi_line) I].
CovarianceMatrix shared_state_cm(const SystemModel& model);

// Shannon mutual information of the double-heterodyne protocol,
// log2((V + chi_tot)/(1 + chi_tot)) bits per channel use.
double mutual_info_ab(const SystemModel& model);

// Shared state extended by Bob's detector dilation: a TMSV of variance
// upsilon mixed with B1 at transmissivity eta, producing the measured mode
// B2 and the loss mode F. Modes (A, B2, F, G); the dilation is skipped for an
// ideal detector (eta = 1, v_el = 0), leaving modes (A, B2).
CovarianceMatrix detector_dilated_state(const SystemModel& model);

}  // namespace cvqkd
