#include "cvqkd/attacks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cvqkd {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

struct BaseQuantities {
  double omega_e;
  double v_e1;  // T omega_E + (1-T) V
  double v_e2;  // omega_E
  double c12;   // sqrt(T) sqrt(omega_E^2 - 1)
};

BaseQuantities base_quantities(const SystemModel& model) {
  BaseQuantities b;
  b.omega_e = cloner_variance(model.t, model.xi);
  b.v_e1 = model.t * b.omega_e + (1.0 - model.t) * model.v;
  b.v_e2 = b.omega_e;
  b.c12 = std::sqrt(model.t) * std::sqrt(std::max(b.omega_e * b.omega_e - 1.0, 0.0));
  return b;
}

}  // namespace

double cloner_variance(double t, double xi) {
  if (t <= 0.0 || t > 1.0) throw std::domain_error("cloner_variance: T must be in (0, 1]");
  if (xi < 0.0) throw std::domain_error("cloner_variance: xi must be >= 0");
  if (t == 1.0) {
    if (xi > 0.0)
      throw std::domain_error(
          "cloner_variance: a lossless channel with excess noise has no entangling-cloner "
          "representation (T = 1 requires xi = 0)");
    return 1.0;
  }
  return 1.0 + t * xi / (1.0 - t);
}

CovarianceMatrix HybridBundle::joint_cm() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(10, 10);
  m.block<4, 4>(0, 0) = m_col;
  m.block<4, 4>(4, 4) = m_ind;
  m.block<4, 4>(0, 4) = sigma_col_ind;
  m.block<4, 4>(4, 0) = sigma_col_ind.transpose();
  m.block<4, 2>(0, 8) = sigma_col_b2;
  m.block<2, 4>(8, 0) = sigma_col_b2.transpose();
  m.block<2, 4>(8, 4) = sigma_b2_ind;
  m.block<4, 2>(4, 8) = sigma_b2_ind.transpose();
  m.block<2, 2>(8, 8) = v_b2 * Eigen::Matrix2d::Identity();
  return CovarianceMatrix(std::move(m), {"Ecol1", "Ecol2", "Eind1", "Eind2", "B2"});
}

CovarianceMatrix HybridBundle::joint_cm_b3c() const {
  // Heterodyne of B2 as a conjugate homodyne pair: B3 = (B2 + vac)/sqrt(2),
  // C = (vac - B2)/sqrt(2).
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(12, 12);
  m.block<4, 4>(0, 0) = m_col;
  m.block<4, 4>(4, 4) = m_ind;
  m.block<4, 4>(0, 4) = sigma_col_ind;
  m.block<4, 4>(4, 0) = sigma_col_ind.transpose();

  const Eigen::Matrix2d mb3 = 0.5 * (v_b2 + 1.0) * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d scb3 = 0.5 * (1.0 - v_b2) * Eigen::Matrix2d::Identity();
  m.block<2, 2>(8, 8) = mb3;
  m.block<2, 2>(10, 10) = mb3;
  m.block<2, 2>(8, 10) = scb3;
  m.block<2, 2>(10, 8) = scb3;

  const Eigen::Matrix<double, 4, 2> s_col_b3 = sigma_col_b2 * kInvSqrt2;
  m.block<4, 2>(0, 8) = s_col_b3;
  m.block<2, 4>(8, 0) = s_col_b3.transpose();
  m.block<4, 2>(0, 10) = -s_col_b3;
  m.block<2, 4>(10, 0) = -s_col_b3.transpose();

  const Eigen::Matrix<double, 2, 4> s_b3_ind = sigma_b2_ind * kInvSqrt2;
  m.block<2, 4>(8, 4) = s_b3_ind;
  m.block<4, 2>(4, 8) = s_b3_ind.transpose();
  m.block<2, 4>(10, 4) = -s_b3_ind;
  m.block<4, 2>(4, 10) = -s_b3_ind.transpose();

  return CovarianceMatrix(std::move(m), {"Ecol1", "Ecol2", "Eind1", "Eind2", "B3", "C"});
}

HybridBundle hybrid_bundle_closed_form(const SystemModel& model, double mu) {
  model.validate();
  if (mu < 0.0 || mu > 1.0)
    throw std::domain_error("hybrid_bundle_closed_form: mu must be in [0, 1]");
  const BaseQuantities b = base_quantities(model);
  const MemoryParams& mem = model.memory;
  const DerivedNoises noise = derived_noises(model);

  HybridBundle out;
  out.mu = mu;

  const double v_c1 = mu * b.v_e1 + (1.0 - mu);
  const double v_c2 = mu * b.v_e2 + (1.0 - mu);
  const double c_c = mu * b.c12;
  const double v_i1 = (1.0 - mu) * b.v_e1 + mu;
  const double v_i2 = (1.0 - mu) * b.v_e2 + mu;
  const double c_i = (1.0 - mu) * b.c12;

  out.m_col.setZero();
  out.m_col(0, 0) = out.m_col(1, 1) = mem.tau1 * v_c1 + (1.0 - mem.tau1) * mem.omega1;
  out.m_col(2, 2) = out.m_col(3, 3) = mem.tau2 * v_c2 + (1.0 - mem.tau2) * mem.omega2;
  const double cc = std::sqrt(mem.tau1 * mem.tau2) * c_c;
  out.m_col(0, 2) = out.m_col(2, 0) = cc;
  out.m_col(1, 3) = out.m_col(3, 1) = -cc;

  const double vq1 = (v_i1 + v_i2) / 2.0 - c_i;  // q of Eind1, p of Eind2
  const double vp1 = (v_i1 + v_i2) / 2.0 + c_i;  // p of Eind1, q of Eind2
  const double cqq = (v_i1 - v_i2) / 2.0;
  out.m_ind.setZero();
  out.m_ind(0, 0) = vq1;
  out.m_ind(1, 1) = vp1;
  out.m_ind(2, 2) = vp1;
  out.m_ind(3, 3) = vq1;
  out.m_ind(0, 2) = out.m_ind(2, 0) = cqq;
  out.m_ind(1, 3) = out.m_ind(3, 1) = cqq;

  // Cross covariances between the individual-arm inputs and the stored modes.
  const double root1 = std::sqrt(mem.tau1 * (1.0 - mu) * mu);
  const double root2 = std::sqrt(mem.tau2 * (1.0 - mu) * mu);
  const double a1 = root1 * (1.0 - b.v_e1);
  const double a2 = -root1 * b.c12;
  const double a3 = -root2 * b.c12;
  const double a4 = root2 * (1.0 - b.v_e2);
  out.sigma_col_ind.setZero();
  out.sigma_col_ind(0, 0) = (a1 - a2) * kInvSqrt2;
  out.sigma_col_ind(0, 2) = (a1 + a2) * kInvSqrt2;
  out.sigma_col_ind(1, 1) = (a1 + a2) * kInvSqrt2;
  out.sigma_col_ind(1, 3) = (a1 - a2) * kInvSqrt2;
  out.sigma_col_ind(2, 0) = (a3 - a4) * kInvSqrt2;
  out.sigma_col_ind(2, 2) = (a3 + a4) * kInvSqrt2;
  out.sigma_col_ind(3, 1) = -(a3 + a4) * kInvSqrt2;
  out.sigma_col_ind(3, 3) = (-a3 + a4) * kInvSqrt2;

  const double c_col1_b2 =
      std::sqrt(mem.tau1 * mu * (1.0 - model.t) * model.t * model.eta) * (b.omega_e - model.v);
  const double c_col2_b2 = std::sqrt(mem.tau2 * mu * (1.0 - model.t) * model.eta) *
                           std::sqrt(std::max(b.omega_e * b.omega_e - 1.0, 0.0));
  out.sigma_col_b2.setZero();
  out.sigma_col_b2(0, 0) = c_col1_b2;
  out.sigma_col_b2(1, 1) = c_col1_b2;
  out.sigma_col_b2(2, 0) = c_col2_b2;
  out.sigma_col_b2(3, 1) = -c_col2_b2;

  const double c_b2_i1 =
      std::sqrt((1.0 - mu) * (1.0 - model.t) * model.t * model.eta) * (model.v - b.omega_e);
  const double c_b2_i2 = -std::sqrt((1.0 - mu) * (1.0 - model.t) * model.eta) *
                         std::sqrt(std::max(b.omega_e * b.omega_e - 1.0, 0.0));
  out.sigma_b2_ind.setZero();
  out.sigma_b2_ind(0, 0) = (c_b2_i1 - c_b2_i2) * kInvSqrt2;
  out.sigma_b2_ind(0, 2) = (c_b2_i1 + c_b2_i2) * kInvSqrt2;
  out.sigma_b2_ind(1, 1) = (c_b2_i1 + c_b2_i2) * kInvSqrt2;
  out.sigma_b2_ind(1, 3) = (c_b2_i1 - c_b2_i2) * kInvSqrt2;

  out.v_b2 = model.eta * model.t * (model.v + noise.chi_t);
  return out;
}

CovarianceMatrix hybrid_global_state(const SystemModel& model, double mu) {
  model.validate();
  if (mu < 0.0 || mu > 1.0)
    throw std::domain_error("hybrid_bundle_circuit: mu must be in [0, 1]");
  const BaseQuantities b = base_quantities(model);
  const MemoryParams& mem = model.memory;

  // Slot names are the roles the modes end up in. Thermal inputs enter as
  // halves of TMSV purifications so the global state stays pure.
  CovarianceMatrix st = tmsv_cm(model.v, "A", "B2");
  st = attach(st, tmsv_cm(b.omega_e, "Ecol1", "Ecol2"));
  st = apply_beamsplitter(st, "B2", "Ecol1", model.t);  // channel: B2 slot -> B1

  st = attach(st, vacuum_cm("Eind1"));
  st = apply_beamsplitter(st, "Ecol1", "Eind1", mu);
  st = attach(st, vacuum_cm("Eind2"));
  st = apply_beamsplitter(st, "Ecol2", "Eind2", mu);

  st = attach(st, tmsv_cm(mem.omega1, "D1", "D1twin"));
  st = apply_beamsplitter(st, "Ecol1", "D1", mem.tau1);
  st = attach(st, tmsv_cm(mem.omega2, "D2", "D2twin"));
  st = apply_beamsplitter(st, "Ecol2", "D2", mem.tau2);

  // Balanced mixing of the individual arm: feeding (Eind2, Eind1) puts
  // (Ei1 - Ei2)/sqrt(2) in the Eind1 slot and (Ei1 + Ei2)/sqrt(2) in Eind2.
  st = apply_beamsplitter(st, "Eind2", "Eind1", 0.5);

  if (!(model.eta == 1.0 && model.v_el == 0.0)) {
    const DerivedNoises noise = derived_noises(model);
    if (!noise.upsilon)
      throw std::domain_error(
          "hybrid_bundle_circuit: eta = 1 with v_el > 0 has no finite-variance dilation");
    st = attach(st, tmsv_cm(*noise.upsilon, "F", "G"));
    st = apply_beamsplitter(st, "B2", "F", model.eta);  // B2 slot -> detected mode
  }
  return st;
}

HybridBundle hybrid_bundle_circuit(const SystemModel& model, double mu) {
  const CovarianceMatrix st = hybrid_global_state(model, mu);
  const CovarianceMatrix joint = marginal(st, {"Ecol1", "Ecol2", "Eind1", "Eind2", "B2"});

  HybridBundle out;
  out.mu = mu;
  const Eigen::MatrixXd& m = joint.matrix();
  out.m_col = m.block<4, 4>(0, 0);
  out.m_ind = m.block<4, 4>(4, 4);
  out.sigma_col_ind = m.block<4, 4>(0, 4);
  out.sigma_col_b2 = m.block<4, 2>(0, 8);
  out.sigma_b2_ind = m.block<2, 4>(8, 4);
  out.v_b2 = m(8, 8);
  return out;
}

namespace {

double entropy_of_stored_arm(const HybridBundle& bundle) {
  return von_neumann_entropy(CovarianceMatrix(bundle.m_col, {"Ecol1", "Ecol2"}));
}

}  // namespace

double chi_collective_part(const HybridBundle& bundle) {
  const CovarianceMatrix joint = bundle.joint_cm_b3c();
  const CovarianceMatrix cond = condition_on_homodyne(joint, {{"Eind1", Quadrature::q},
                                                              {"Eind2", Quadrature::p},
                                                              {"B3", Quadrature::q},
                                                              {"C", Quadrature::p}});
  return entropy_of_stored_arm(bundle) - von_neumann_entropy(cond);
}

double shannon_individual_part(const HybridBundle& bundle) {
  const double v_het = (bundle.v_b2 + 1.0) / 2.0;
  const double c_q = bundle.sigma_b2_ind(0, 0);  // C(q_B2, q_Eind1)
  const double v_q = bundle.m_ind(0, 0);         // V(q_Eind1)
  const double c_p = bundle.sigma_b2_ind(1, 3);  // C(p_B2, p_Eind2)
  const double v_p = bundle.m_ind(3, 3);         // V(p_Eind2)

  const double vq_cond = bundle.v_b2 - c_q * c_q / v_q;
  const double vp_cond = bundle.v_b2 - c_p * c_p / v_p;
  if (std::abs(vq_cond - vp_cond) > 1e-9 * std::max(1.0, bundle.v_b2)) {
    std::ostringstream os;
    os << "shannon_individual_part: q/p symmetry violated (" << vq_cond << " vs " << vp_cond
       << ")";
    throw std::runtime_error(os.str());
  }
  const double term_q = 0.5 * std::log2(v_het / ((vq_cond + 1.0) / 2.0));
  const double term_p = 0.5 * std::log2(v_het / ((vp_cond + 1.0) / 2.0));
  return term_q + term_p;
}

double chi_cross_part(const HybridBundle& bundle) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  m.block<4, 4>(0, 0) = bundle.m_col;
  m.block<4, 4>(4, 4) = bundle.m_ind;
  m.block<4, 4>(0, 4) = bundle.sigma_col_ind;
  m.block<4, 4>(4, 0) = bundle.sigma_col_ind.transpose();
  const CovarianceMatrix joint(std::move(m), {"Ecol1", "Ecol2", "Eind1", "Eind2"});
  const CovarianceMatrix cond =
      condition_on_homodyne(joint, {{"Eind1", Quadrature::q}, {"Eind2", Quadrature::p}});
  return entropy_of_stored_arm(bundle) - von_neumann_entropy(cond);
}

EveInformationTerms eve_information_terms(const SystemModel& model, double mu) {
  const HybridBundle bundle = hybrid_bundle_closed_form(model, mu);
  EveInformationTerms t;
  t.chi_collective = chi_collective_part(bundle);
  t.shannon_individual = shannon_individual_part(bundle);
  t.chi_cross = chi_cross_part(bundle);
  t.total = t.chi_collective + t.shannon_individual - t.chi_cross;
  // Conditioning noise can leave a few-ulp negative total at degenerate points.
  if (t.total < 0.0 && t.total > -1e-9) t.total = 0.0;
  return t;
}

double eve_information(const SystemModel& model, double mu) {
  return eve_information_terms(model, mu).total;
}

}  // namespace cvqkd
