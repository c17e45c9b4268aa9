#pragma once

// Two-qubit canonical form and the determinant test for at most one negative
// partial-transpose eigenvalue.
//
// In the local eigenbases of the two reduced states, with phases fixed so the
// (0,1) and (0,2) entries are real and non-negative, every two-qubit state
// reads
//
//   [ a11   A     B     alpha ]
//   [ A     a22   beta  -B    ]
//   [ B     beta* a33   -A    ]
//   [ alpha* -B   -A    a44   ]
//
// The -A / -B placements follow from the reduced states being diagonal.

#include <Eigen/Dense>

#include "ppt/linalg.hpp"

namespace ppt {

struct CanonicalForm2Q {
  double a11 = 0, a22 = 0, a33 = 0, a44 = 0;
  double A = 0;  // entry (0,1)
  double B = 0;  // entry (0,2)
  Complex alpha;  // entry (0,3)
  Complex beta;   // entry (1,2)
  Eigen::Matrix2cd u_local;  // columns: new basis of subsystem A
  Eigen::Matrix2cd v_local;  // columns: new basis of subsystem B
  /// Largest deviation of `transformed` from the exact pattern above.
  double residual = 0;
  /// (u (x) v)^dagger rho (u (x) v).
  HermitianMatrix transformed = HermitianMatrix::zero(4);
};

/// Basis change into canonical form. ArgumentError unless the shape is 2 x 2.
///
/// Degenerate reduced states (e.g. I/2) leave the local eigenbasis free; it is
/// then taken from the correlation operator tr_B[rho (I (x) Z_B)] (resp.
/// tr_A[rho (Z_A (x) I)]), and from the computational basis if that is
/// degenerate too. Each basis vector's phase is first normalized so its first
/// nonzero component is real positive.
CanonicalForm2Q canonicalize_two_qubit(const DensityMatrix& rho, double degeneracy_tol = 1e-10);

/// Canonical form built directly from parameters, no basis change.
HermitianMatrix canonical_matrix(double a11, double a22, double a33, double a44, double A, double B,
                                 Complex alpha, Complex beta);

struct Theorem2Report {
  bool applicable = false;  // AB = 0 or Re(alpha) = Re(beta), within tol
  // Det(A1) - Det(A1^T), A1 the {0,1,2} principal block.
  double det_gap_1_closed = 0;
  double det_gap_1_direct = 0;
  // Det(A2) - Det(A2^T), A2 the {0,1,3} principal block.
  double det_gap_2_closed = 0;
  double det_gap_2_direct = 0;
  /// The second closed form with the a11 prefactor, for comparison only; the
  /// correct prefactor is a22.
  double det_gap_2_a11_variant = 0;
  double block1_pt_min_eig = 0;  // min eig of A1^T
  double block2_pt_min_eig = 0;  // min eig of A2^T
  bool some_block_psd = false;
  int negative_count = 0;
};

/// 2 AB Re(beta - alpha) + a11 (|alpha|^2 - |beta|^2).
double det_gap_block1(const CanonicalForm2Q& f);
/// 2 AB Re(beta - alpha) + a22 (|beta|^2 - |alpha|^2).
double det_gap_block2(const CanonicalForm2Q& f);

/// Evaluates both determinant gaps in closed form and directly. When
/// applicable, hard-asserts (TheoremViolation) that one of the transposed
/// 3x3 blocks is PSD at `psd_tol` and that PT(rho) has at most one negative
/// eigenvalue. PreconditionError if form.residual > tol.
Theorem2Report theorem2_check(const CanonicalForm2Q& form, double tol = 1e-8, double psd_tol = 1e-9);

}  // namespace ppt
