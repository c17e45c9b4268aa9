#pragma once

// Dense complex Hermitian linear algebra on bipartite operators.
//
// Index convention: a bipartite basis state |i_A, i_B> maps to the flat
// index i_A * dimB + i_B, so the matrix is a dimA x dimA grid of
// dimB x dimB blocks. Eigenvalues are always reported in increasing order.

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ppt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Numerical slack used throughout. Every threshold is a parameter; these are
/// only the defaults.
struct Tolerances {
  double psd_slack = 1e-10;    // min eigenvalue >= -psd_slack counts as PSD
  double trace = 1e-12;        // |tr(rho) - 1| for density matrices
  double interlacing = 1e-9;
};

/// Which tensor factor an operation acts on.
enum class Subsystem { A, B };

/// Factorization dim = dimA * dimB. The partial transpose acts on A by default.
class BipartiteShape {
 public:
  BipartiteShape(int dim_a, int dim_b);

  int dim_a() const noexcept { return dim_a_; }
  int dim_b() const noexcept { return dim_b_; }
  int total() const noexcept { return dim_a_ * dim_b_; }
  bool is_square() const noexcept { return dim_a_ == dim_b_; }

  /// The same factorization with the two subsystems exchanged.
  BipartiteShape swapped() const noexcept { return {dim_b_, dim_a_}; }

  friend bool operator==(const BipartiteShape&, const BipartiteShape&) = default;

 private:
  int dim_a_;
  int dim_b_;
};

/// Square complex matrix that is exactly Hermitian.
///
/// Construction symmetrizes once, M <- (M + M^dagger) / 2. The result has
/// entry(i,j) == conj(entry(j,i)) bit-for-bit and a real diagonal; all
/// downstream operations rely on that.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m);
  explicit HermitianMatrix(const Eigen::MatrixXd& m) : HermitianMatrix(ComplexMatrix(m.cast<Complex>())) {}

  static HermitianMatrix zero(int dim);
  static HermitianMatrix identity(int dim);
  static HermitianMatrix diagonal(std::span<const double> diag);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  double frobenius_norm() const { return m_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& rhs) const;
  HermitianMatrix operator-(const HermitianMatrix& rhs) const;
  HermitianMatrix operator*(double s) const;

  /// U * this * U^dagger. U need not be unitary.
  HermitianMatrix conjugated_by(const ComplexMatrix& u) const;

  /// Bitwise equality of all entries.
  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  ComplexMatrix m_;
};

/// Eigendecomposition with eigenvalues in increasing order; column k of
/// `eigenvectors` is the unit eigenvector for `eigenvalues[k]`.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Positive and negative parts of a Hermitian matrix: h = positive - negative,
/// both PSD, positive * negative = 0.
struct JordanParts {
  HermitianMatrix positive;
  HermitianMatrix negative;
};

struct InterlacingReport {
  bool holds = true;
  /// Smallest slack over all checked inequalities; negative means violated.
  double worst_margin = 0.0;
};

/// A quantum state on C^dimA (x) C^dimB: Hermitian, PSD, unit trace.
class DensityMatrix {
 public:
  /// Validates every invariant; throws InvariantError naming the violated one
  /// and the margin by which it fails, ShapeError on dimension mismatch.
  DensityMatrix(HermitianMatrix m, BipartiteShape shape, const Tolerances& tol = {});

  const HermitianMatrix& matrix() const noexcept { return m_; }
  const BipartiteShape& shape() const noexcept { return shape_; }
  int dim() const noexcept { return m_.dim(); }

  /// The same state with subsystems A and B exchanged.
  DensityMatrix swapped() const;

 private:
  struct Unchecked {};
  DensityMatrix(HermitianMatrix m, BipartiteShape shape, Unchecked) : m_(std::move(m)), shape_(shape) {}

  HermitianMatrix m_;
  BipartiteShape shape_;
};

/// Transpose on one tensor factor. With Subsystem::A, block (i, j) of the
/// output is block (j, i) of the input.
HermitianMatrix partial_transpose(const HermitianMatrix& rho, const BipartiteShape& shape,
                                  Subsystem on = Subsystem::A);

/// Trace over the factor not named by `keep`.
HermitianMatrix partial_trace(const HermitianMatrix& rho, const BipartiteShape& shape, Subsystem keep);

/// Full eigendecomposition. Throws NumericError if the solver fails.
Spectrum hermitian_eig(const HermitianMatrix& h);

/// Eigenvalues only, increasing. Cheaper than hermitian_eig.
RealVector hermitian_eigenvalues(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);

/// sum_k |lambda_k| v_k v_k^dagger.
HermitianMatrix operator_abs(const HermitianMatrix& h);

JordanParts jordan_split(const HermitianMatrix& h);

/// Entrywise (Hadamard) product.
HermitianMatrix schur_product(const HermitianMatrix& a, const HermitianMatrix& b);

/// Rows and columns restricted to `keep`, order preserved. Indices must be
/// distinct, in range, and nonempty (ArgumentError otherwise).
HermitianMatrix principal_submatrix(const HermitianMatrix& h, std::span<const int> keep);

/// Cauchy interlacing lambda_k(H) <= lambda_k(H_r) <= lambda_{k+n-r}(H) for
/// the principal submatrix on `keep`, each side relaxed by `tol`.
InterlacingReport interlacing_check(const HermitianMatrix& h, std::span<const int> keep, double tol = 1e-9);

/// sum_k |lambda_k|.
double trace_norm(const HermitianMatrix& h);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace ppt
