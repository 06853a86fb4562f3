// Eve's entangling-cloner hybrid attack: each channel ancilla is split at
// transmissivity mu between a decohering quantum memory (collective arm,
// modes Ecol1/Ecol2) and an immediate joint homodyne measurement (individual
// arm, modes Eind1/Eind2). Two independent constructions of the same state
// are provided: closed-form covariance blocks and a full circuit simulation.

#pragma once

#include "cvqkd/protocol.hpp"

#include <optional>

namespace cvqkd {

// Thermal variance of the entangling-cloner TMSV reproducing a channel
// (T, xi): omega_E = 1 + T xi / (1 - T). T = 1 requires xi = 0.
double cloner_variance(double t, double xi);

// Covariance blocks of the joint state (Ecol1, Ecol2, Eind1, Eind2, B2) at a
// given splitter transmissivity mu. Quadrature ordering is interleaved
// (q, p) per mode; cross blocks are stored row-major in the order named.
struct HybridBundle {
  double mu = 0.0;
  Eigen::Matrix4d m_col;           // stored (memory-decohered) arm Ecol1, Ecol2
  Eigen::Matrix4d m_ind;           // individual arm Eind1, Eind2
  Eigen::Matrix4d sigma_col_ind;   // rows Ecol quadratures, cols Eind quadratures
  Eigen::Matrix<double, 4, 2> sigma_col_b2;
  Eigen::Matrix<double, 2, 4> sigma_b2_ind;
  double v_b2 = 1.0;               // Bob's mode variance before ideal heterodyne

  // Joint 5-mode covariance matrix (Ecol1, Ecol2, Eind1, Eind2, B2).
  CovarianceMatrix joint_cm() const;
  // Joint 6-mode matrix with B2 replaced by its conjugate-homodyne
  // decomposition (Ecol1, Ecol2, Eind1, Eind2, B3, C).
  CovarianceMatrix joint_cm_b3c() const;
};

// Closed-form construction of every block.
HybridBundle hybrid_bundle_closed_form(const SystemModel& model, double mu);

// Independent construction simulating the attack circuit with beamsplitters
// on explicit purifications; reads off the same blocks.
HybridBundle hybrid_bundle_circuit(const SystemModel& model, double mu);

// Full circuit state before tracing out inaccessible modes, for purity and
// physicality checks. Includes Alice, Bob's detector dilation, the memory
// environments D1/D2 and all purifying twin modes.
CovarianceMatrix hybrid_global_state(const SystemModel& model, double mu);

// Holevo term chi_mu(B Eind : Ecol) = S(Ecol) - S(Ecol | q_Eind1, p_Eind2, B2het).
double chi_collective_part(const HybridBundle& bundle);

// Shannon term I_mu(B : Eind1 Eind2) of the joint q/p homodyne pair.
double shannon_individual_part(const HybridBundle& bundle);

// Holevo term chi_mu(Eind : Ecol) = S(Ecol) - S(Ecol | q_Eind1, p_Eind2).
double chi_cross_part(const HybridBundle& bundle);

// Eve's total information per channel use:
// chi(B Eind : Ecol) + I(B : Eind) - chi(Eind : Ecol).
double eve_information(const SystemModel& model, double mu);

// All three terms at once (one bundle construction).
struct EveInformationTerms {
  double chi_collective;
  double shannon_individual;
  double chi_cross;
  double total;
};
EveInformationTerms eve_information_terms(const SystemModel& model, double mu);

}  // namespace cvqkd
