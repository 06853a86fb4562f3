// Symplectic algebra for zero-mean Gaussian states in shot-noise units
// (vacuum quadrature variance = 1). Covariance matrices use the
// quadrature-interleaved mode ordering (q1, p1, q2, p2, ...).

#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cvqkd {

enum class Quadrature { q, p };

// Real symmetric 2m x 2m second-moment matrix of an m-mode Gaussian state.
// Mode labels are immutable and carried through every transform, so named
// modes stay addressable after beamsplitters and conditioning.
class CovarianceMatrix {
 public:
  CovarianceMatrix(Eigen::MatrixXd entries, std::vector<std::string> labels);

  int num_modes() const { return static_cast<int>(labels_.size()); }
  int dim() const { return static_cast<int>(m_.rows()); }

  const Eigen::MatrixXd& matrix() const { return m_; }
  const std::vector<std::string>& mode_labels() const { return labels_; }

  bool has_mode(std::string_view label) const;
  int mode_index(std::string_view label) const;  // throws if absent

  // Variance of one quadrature of a labelled mode.
  double variance(std::string_view label, Quadrature quad) const;

  // 2x2 block between two modes (covariance of mode a's quadratures with b's).
  Eigen::Matrix2d block(std::string_view a, std::string_view b) const;

 private:
  Eigen::MatrixXd m_;
  std::vector<std::string> labels_;
};

struct SymplecticSpectrum {
  std::vector<double> values;  // sorted ascending, one per mode, each >= 1
};

// G(x) = (x+1)log2(x+1) - x log2(x), with x log2(x) -> 0 as x -> 0.
// Inputs in [-1e-12, 0) are clamped to 0; below that is a domain error.
double g_function(double x);

// Two-mode squeezed vacuum with quadrature variance V >= 1:
// [V I, sqrt(V^2-1) Z; sqrt(V^2-1) Z, V I].
CovarianceMatrix tmsv_cm(double v, std::string label_a = "m1", std::string label_b = "m2");

// Single thermal mode diag(w, w), w >= 1.
CovarianceMatrix thermal_cm(double w, std::string label = "m1");

CovarianceMatrix vacuum_cm(std::string label = "m1");

// Tensor product: block-diagonal concatenation. Labels must be disjoint.
CovarianceMatrix attach(const CovarianceMatrix& a, const CovarianceMatrix& b);

// Marginal state of the listed modes, in the listed order.
CovarianceMatrix marginal(const CovarianceMatrix& m, const std::vector<std::string>& keep);

// Marginal state with the listed modes removed.
CovarianceMatrix trace_out(const CovarianceMatrix& m, const std::vector<std::string>& drop);

// Two-port beamsplitter of transmissivity t_bs on (mode_i, mode_j):
// q_i' =  sqrt(t) q_i + sqrt(1-t) q_j,
// q_j' = -sqrt(1-t) q_i + sqrt(t) q_j,  and identically for p.
// Mode i keeps the transmitted output, mode j the reflected one.
CovarianceMatrix apply_beamsplitter(const CovarianceMatrix& m, std::string_view mode_i,
                                    std::string_view mode_j, double t_bs);

// Symplectic eigenvalues: absolute values of the eigenvalues of i*Omega*M,
// deduplicated to one per mode and sorted ascending. Values in [1-1e-7, 1)
// are clamped to 1; anything below 1-1e-7 means the matrix is unphysical.
SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& m);

// Smallest raw symplectic eigenvalue, no clamping or physicality check.
double min_symplectic_eigenvalue(const CovarianceMatrix& m);

bool is_physical(const CovarianceMatrix& m, double tol = 1e-7);

// S(rho) = sum_i G((nu_i - 1)/2) in bits.
double von_neumann_entropy(const CovarianceMatrix& m);

// Conditional state of the unmeasured modes after homodyne detection of the
// listed quadratures: M_A - sigma (X M_B X)^MP sigma^T, where X projects onto
// the measured quadratures. Measured modes are removed from the output.
CovarianceMatrix condition_on_homodyne(
    const CovarianceMatrix& m, const std::vector<std::pair<std::string, Quadrature>>& measured);

// Conditional state after heterodyne detection of one mode:
// M_A - sigma (M_B + I)^{-1} sigma^T, the measured mode removed.
CovarianceMatrix condition_on_heterodyne(const CovarianceMatrix& m, std::string_view mode);

}  // namespace cvqkd
