#pragma once

// Sufficient conditions for |rho^T|^T >= 0 on two qubits with exactly one
// negative partial-transpose eigenvalue E.
//
// Write rho^T = A - rho_minus with rho_minus = |Psi><Psi|, A Psi = 0, and
// local unitaries chosen so Psi = alpha|00> + beta|11>, alpha >= beta >= 0,
// alpha^2 + beta^2 = |E|. With mu = alpha^2, nu = beta^2, A11 = <00|A|00>,
// |rho^T|^T equals the Schur product rho o S where S is all ones except
//
//   S00 = (A11 + mu) / (A11 - mu)
//   S12 = S21 = (A11 - nu) / (A11 + nu)
//   S33 = (A11 + nu^2/mu) / (A11 - nu^2/mu)
//
// so S >= 0 implies |rho^T|^T >= 0.

#include <optional>

#include <Eigen/Dense>

#include "ppt/ensembles.hpp"
#include "ppt/linalg.hpp"

namespace ppt {

/// sqrt(sqrt(2) + 1), upper end of the admissible Schmidt ratio alpha/beta.
double theorem3_k_max();

/// (1 + k^2) / (k^2 (k + 1)^2 - (k - 1)^2): upper bound on |E| from rho >= 0.
/// ArgumentError if k < 1.
double e1_bound(double k);

/// (1 + k^2)(k - 1)^2 / (2 k^2 - (k - 1)^4): |E| >= E2 makes S >= 0 follow
/// from rho >= 0. ArgumentError if k < 1, SingularityError at a vanishing
/// denominator.
double e2_bound(double k);

/// S for given (mu, nu, A11), A44 eliminated through A11 / A44 = nu / mu.
HermitianMatrix build_s_matrix(double mu, double nu, double a11);

struct SDeterminants {
  double leading3;  // det of the {0,1,2} principal block
  double full;      // det(S)
  /// det(S) with a single factor of nu in the prefactor, as sometimes
  /// printed; off from `full` by exactly a factor nu. Reported for comparison.
  double full_single_nu_variant;
};

/// Closed forms
///   det(S_3x3) = 4 nu [(2mu - nu) A11 + mu nu] / ((A11 - mu)(A11 + nu)^2)
///   det(S)     = -8 nu^2 [(mu - nu)^2 A11 - 2 mu nu^2] / ((A11 - mu)(A11 + nu)^2 (mu A11 - nu^2))
/// Requires a11 > mu >= nu > 0 and mu a11 > nu^2 (ArgumentError);
/// SingularityError if a denominator is within 1e-12 of zero.
SDeterminants s_matrix_dets(double mu, double nu, double a11);

struct Theorem3Options {
  double negative_tol = 1e-10;  // eigenvalue < -negative_tol is negative
  double gap_tol = 1e-8;        // required separation of E from the next eigenvalue
  double beta_zero_tol = 1e-12; // beta <= this counts as beta = 0
  double psd_tol = 1e-9;
  double boundary_tol = 1e-12;  // slack on the k <= k_max comparison
};

struct BetaZeroDeterminants {
  double det_gap;    // Det(|rho^T|^T) - Det(rho) in the Schmidt frame
  double predicted;  // 2 alpha^2 Det(rho[{1,2,3}])
};

struct Theorem3Details {
  double schmidt_alpha = 0;
  double schmidt_beta = 0;
  std::optional<double> k;  // alpha / beta; absent when beta = 0
  double mu = 0;
  double nu = 0;
  double a11 = 0;
  std::optional<double> e1;
  std::optional<double> e2;
  bool e_within_bounds = false;  // E2 <= |E| <= E1
  std::optional<HermitianMatrix> s_matrix;  // absent when a denominator vanishes
  double s_min_eig = 0;
  bool s_psd = false;
  bool beta_zero = false;           // product eigenvector
  bool ratio_in_window = false;     // 1 <= k <= k_max
  bool a11_ge_mu = false;           // A11 >= mu
  bool a11_ge_nu2_over_mu = false;  // A11 >= nu^2 / mu
  bool trace_compatible = false;    // ((alpha + beta) / beta)^2 A11 <= 1 + (alpha - beta)^2
  bool det_s_nonneg = false;        // (mu - nu)^2 A11 <= 2 mu nu^2
  double annihilation_residual = 0;  // ||A rho_minus||_F
  double schur_residual = 0;         // ||rho o S - |rho^T|^T||_F in the frame
  Eigen::Matrix2cd u_local;          // Schmidt frame, subsystem A
  Eigen::Matrix2cd v_local;          // Schmidt frame, subsystem B
  HermitianMatrix frame_state = HermitianMatrix::zero(4);  // rho in the Schmidt frame
  std::optional<BetaZeroDeterminants> beta_zero_dets;  // present iff beta_zero
};

struct Theorem3Report {
  bool applicable = false;       // exactly one negative eigenvalue, simple
  bool near_degenerate = false;  // one negative eigenvalue but gap <= gap_tol
  int negative_count = 0;
  double e = 0;                  // smallest PT eigenvalue
  double abs_pt_pt_min_eig = 0;
  double negativity = 0;
  double sqrt_abs_e = 0;         // compared against negativity, not asserted
  std::optional<Theorem3Details> details;  // present iff applicable
};

/// Full pipeline on a two-qubit state. Hard-asserts (TheoremViolation) that
/// applicable and (beta = 0 or 1 <= k <= k_max) imply
/// min eig |rho^T|^T >= -psd_tol. ArgumentError unless the shape is 2 x 2.
Theorem3Report theorem3_analyze(const DensityMatrix& rho, const Theorem3Options& opt = {});

/// Same pipeline on any 4x4 Hermitian matrix, no positivity assumed and
/// nothing asserted. Used to exercise algebraic identities off the state space.
Theorem3Report theorem3_analyze_hermitian(const HermitianMatrix& rho, const Theorem3Options& opt = {});

/// A random two-qubit state whose PT has exactly one negative eigenvalue with
/// eigenvector of Schmidt ratio `k`, scrambled by Haar local unitaries. Built
/// as rho^T = A - |Psi><Psi| with A a random PSD matrix on Psi's orthogonal
/// complement and |E| uniform on (0, E1(k)], rejecting until rho >= 0.
/// NumericError after `max_tries` rejections.
DensityMatrix synthesize_theorem3_state(double k, const SampleStream& stream, int max_tries = 200000);

}  // namespace ppt
