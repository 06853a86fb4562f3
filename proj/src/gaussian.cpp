#include "cvqkd/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace cvqkd {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kSpectrumClampTol = 1e-7;
constexpr double kPinvCutoff = 1e-10;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries, std::vector<std::string> labels)
    : m_(std::move(entries)), labels_(std::move(labels)) {
  if (m_.rows() != m_.cols()) fail("covariance matrix must be square");
  if (m_.rows() == 0 || m_.rows() % 2 != 0) fail("covariance matrix dimension must be positive and even");
  if (static_cast<int>(labels_.size()) * 2 != m_.rows())
    fail("covariance matrix needs one label per mode");
  std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) fail("mode labels must be unique");
  const double scale = std::max(m_.cwiseAbs().maxCoeff(), 1.0);
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    std::ostringstream os;
    os << "covariance matrix not symmetric: max asymmetry " << asym << " (scale " << scale << ")";
    fail(os.str());
  }
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

bool CovarianceMatrix::has_mode(std::string_view label) const {
  for (const auto& l : labels_)
    if (l == label) return true;
  return false;
}

int CovarianceMatrix::mode_index(std::string_view label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  fail("no mode labelled '" + std::string(label) + "'");
}

double CovarianceMatrix::variance(std::string_view label, Quadrature quad) const {
  const int i = 2 * mode_index(label) + (quad == Quadrature::q ? 0 : 1);
  return m_(i, i);
}

Eigen::Matrix2d CovarianceMatrix::block(std::string_view a, std::string_view b) const {
  const int i = 2 * mode_index(a);
  const int j = 2 * mode_index(b);
  return m_.block<2, 2>(i, j);
}

double g_function(double x) {
  if (x < -1e-12) throw std::domain_error("g_function: argument must be non-negative");
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

CovarianceMatrix tmsv_cm(double v, std::string label_a, std::string label_b) {
  if (v < 1.0) throw std::domain_error("tmsv_cm: quadrature variance must be >= 1");
  const double c = std::sqrt(v * v - 1.0);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = v;
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return CovarianceMatrix(m, {std::move(label_a), std::move(label_b)});
}

CovarianceMatrix thermal_cm(double w, std::string label) {
  if (w < 1.0) throw std::domain_error("thermal_cm: variance must be >= 1");
  return CovarianceMatrix(w * Eigen::Matrix2d::Identity(), {std::move(label)});
}

CovarianceMatrix vacuum_cm(std::string label) { return thermal_cm(1.0, std::move(label)); }

CovarianceMatrix attach(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  for (const auto& l : b.mode_labels())
    if (a.has_mode(l)) fail("attach: duplicate mode label '" + l + "'");
  const int na = a.dim(), nb = b.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.matrix();
  m.bottomRightCorner(nb, nb) = b.matrix();
  std::vector<std::string> labels = a.mode_labels();
  labels.insert(labels.end(), b.mode_labels().begin(), b.mode_labels().end());
  return CovarianceMatrix(std::move(m), std::move(labels));
}

CovarianceMatrix marginal(const CovarianceMatrix& m, const std::vector<std::string>& keep) {
  if (keep.empty()) fail("marginal: at least one mode must be kept");
  std::vector<int> rows;
  rows.reserve(2 * keep.size());
  for (const auto& l : keep) {
    const int i = m.mode_index(l);
    rows.push_back(2 * i);
    rows.push_back(2 * i + 1);
  }
  Eigen::MatrixXd sub(rows.size(), rows.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows.size(); ++c) sub(r, c) = m.matrix()(rows[r], rows[c]);
  return CovarianceMatrix(std::move(sub), keep);
}

CovarianceMatrix trace_out(const CovarianceMatrix& m, const std::vector<std::string>& drop) {
  std::vector<std::string> keep;
  for (const auto& l : m.mode_labels()) {
    if (std::find(drop.begin(), drop.end(), l) == drop.end()) keep.push_back(l);
  }
  if (keep.size() + drop.size() != m.mode_labels().size())
    fail("trace_out: a listed mode is not present");
  return marginal(m, keep);
}

CovarianceMatrix apply_beamsplitter(const CovarianceMatrix& m, std::string_view mode_i,
                                    std::string_view mode_j, double t_bs) {
  if (t_bs < 0.0 || t_bs > 1.0)
    throw std::domain_error("apply_beamsplitter: transmissivity must be in [0, 1]");
  const int i = m.mode_index(mode_i);
  const int j = m.mode_index(mode_j);
  if (i == j) fail("apply_beamsplitter: modes must differ");
  const double st = std::sqrt(t_bs);
  const double sr = std::sqrt(1.0 - t_bs);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(m.dim(), m.dim());
  for (int k = 0; k < 2; ++k) {  // k = 0 for q, 1 for p
    s(2 * i + k, 2 * i + k) = st;
    s(2 * i + k, 2 * j + k) = sr;
    s(2 * j + k, 2 * i + k) = -sr;
    s(2 * j + k, 2 * j + k) = st;
  }
  return CovarianceMatrix(s * m.matrix() * s.transpose(), m.mode_labels());
}

namespace {

// Raw symplectic spectrum via the eigenvalues of Omega*M, whose spectrum is
// {+-i nu_k} for physical M. Returns one value per mode, sorted ascending.
std::vector<double> raw_symplectic_values(const CovarianceMatrix& m) {
  const int n = m.dim();
  Eigen::MatrixXd om(n, n);
  om.setZero();
  for (int k = 0; k < n / 2; ++k) {
    om(2 * k, 2 * k + 1) = 1.0;
    om(2 * k + 1, 2 * k) = -1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(om * m.matrix(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "symplectic_eigenvalues: eigensolver failed to converge (dim " << n << ", |M|_max "
       << m.matrix().cwiseAbs().maxCoeff() << ")";
    throw std::runtime_error(os.str());
  }
  std::vector<double> mags(n);
  for (int k = 0; k < n; ++k) mags[k] = std::abs(solver.eigenvalues()[k]);
  std::sort(mags.begin(), mags.end());
  std::vector<double> out(n / 2);
  for (int k = 0; k < n / 2; ++k) out[k] = (mags[2 * k] + mags[2 * k + 1]) / 2.0;
  return out;
}

}  // namespace

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& m) {
  SymplecticSpectrum spec{raw_symplectic_values(m)};
  for (double& nu : spec.values) {
    if (nu < 1.0 - kSpectrumClampTol) {
      std::ostringstream os;
      os << "symplectic_eigenvalues: unphysical covariance matrix, eigenvalue " << nu << " < 1";
      throw std::domain_error(os.str());
    }
    if (nu < 1.0) nu = 1.0;
  }
  return spec;
}

double min_symplectic_eigenvalue(const CovarianceMatrix& m) {
  return raw_symplectic_values(m).front();
}

bool is_physical(const CovarianceMatrix& m, double tol) {
  return min_symplectic_eigenvalue(m) >= 1.0 - tol;
}

double von_neumann_entropy(const CovarianceMatrix& m) {
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(m).values) s += g_function((nu - 1.0) / 2.0);
  return s;
}

CovarianceMatrix condition_on_homodyne(
    const CovarianceMatrix& m, const std::vector<std::pair<std::string, Quadrature>>& measured) {
  if (measured.empty()) fail("condition_on_homodyne: nothing measured");
  std::vector<std::string> meas_modes;
  std::vector<int> meas_quad;  // global row index of each measured quadrature
  for (const auto& [label, quad] : measured) {
    if (std::find(meas_modes.begin(), meas_modes.end(), label) != meas_modes.end())
      fail("condition_on_homodyne: mode '" + label + "' measured twice");
    meas_modes.push_back(label);
    meas_quad.push_back(2 * m.mode_index(label) + (quad == Quadrature::q ? 0 : 1));
  }
  std::vector<std::string> keep;
  for (const auto& l : m.mode_labels())
    if (std::find(meas_modes.begin(), meas_modes.end(), l) == meas_modes.end()) keep.push_back(l);
  if (keep.empty()) fail("condition_on_homodyne: no modes left after measurement");

  std::vector<int> kept_rows, meas_rows;
  for (const auto& l : keep) {
    const int i = m.mode_index(l);
    kept_rows.push_back(2 * i);
    kept_rows.push_back(2 * i + 1);
  }
  for (const auto& l : meas_modes) {
    const int i = m.mode_index(l);
    meas_rows.push_back(2 * i);
    meas_rows.push_back(2 * i + 1);
  }

  const int ka = static_cast<int>(kept_rows.size());
  const int kb = static_cast<int>(meas_rows.size());
  Eigen::MatrixXd ma(ka, ka), sigma(ka, kb), mb(kb, kb);
  for (int r = 0; r < ka; ++r) {
    for (int c = 0; c < ka; ++c) ma(r, c) = m.matrix()(kept_rows[r], kept_rows[c]);
    for (int c = 0; c < kb; ++c) sigma(r, c) = m.matrix()(kept_rows[r], meas_rows[c]);
  }
  for (int r = 0; r < kb; ++r)
    for (int c = 0; c < kb; ++c) mb(r, c) = m.matrix()(meas_rows[r], meas_rows[c]);

  // X M_B X: keep only rows/columns of measured quadratures.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(kb);
  for (size_t k = 0; k < meas_quad.size(); ++k) {
    const auto it = std::find(meas_rows.begin(), meas_rows.end(), meas_quad[k]);
    x(static_cast<int>(it - meas_rows.begin())) = 1.0;
  }
  const Eigen::MatrixXd xmx = x.asDiagonal() * mb * x.asDiagonal();

  // Moore-Penrose pseudoinverse; the projector makes xmx rank-deficient by
  // construction, so singular values below 1e-10 * max are treated as zero.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xmx);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("condition_on_homodyne: pseudoinverse eigensolve failed");
  const double lmax = eig.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(kb);
  for (int k = 0; k < kb; ++k)
    if (std::abs(eig.eigenvalues()[k]) > kPinvCutoff * lmax) inv(k) = 1.0 / eig.eigenvalues()[k];
  const Eigen::MatrixXd h = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();

  Eigen::MatrixXd cond = ma - sigma * h * sigma.transpose();
  cond = ((cond + cond.transpose()) / 2.0).eval();
  return CovarianceMatrix(std::move(cond), keep);
}

CovarianceMatrix condition_on_heterodyne(const CovarianceMatrix& m, std::string_view mode) {
  const int j = m.mode_index(mode);
  std::vector<std::string> keep;
  for (const auto& l : m.mode_labels())
    if (l != mode) keep.push_back(l);
  if (keep.empty()) fail("condition_on_heterodyne: no modes left after measurement");

  std::vector<int> kept_rows;
  for (const auto& l : keep) {
    const int i = m.mode_index(l);
    kept_rows.push_back(2 * i);
    kept_rows.push_back(2 * i + 1);
  }
  const int ka = static_cast<int>(kept_rows.size());
  Eigen::MatrixXd ma(ka, ka), sigma(ka, 2);
  for (int r = 0; r < ka; ++r) {
    for (int c = 0; c < ka; ++c) ma(r, c) = m.matrix()(kept_rows[r], kept_rows[c]);
    for (int c = 0; c < 2; ++c) sigma(r, c) = m.matrix()(kept_rows[r], 2 * j + c);
  }
  const Eigen::Matrix2d mb =
      m.matrix().block<2, 2>(2 * j, 2 * j) + Eigen::Matrix2d::Identity();
  Eigen::MatrixXd cond = ma - sigma * mb.inverse() * sigma.transpose();
  cond = ((cond + cond.transpose()) / 2.0).eval();
  return CovarianceMatrix(std::move(cond), keep);
}

}  // namespace cvqkd
