#pragma once

#include <optional>
#include <vector>

#include "ppt/linalg.hpp"

namespace ppt {

/// Census of the negative eigenvalues of the partial transpose (on A).
struct NegativeSpectrumReport {
  BipartiteShape shape{1, 1};
  std::vector<double> eigenvalues;  // of PT(rho), increasing
  int negative_count = 0;           // #{lambda < -tolerance_used}
  int negative_count_tight = 0;     // same, threshold tolerance_used / 10
  int negative_count_loose = 0;     // same, threshold tolerance_used * 10
  double most_negative = 0.0;       // min(lambda_1, 0)
  double negativity = 0.0;          // (||PT(rho)||_1 - 1) / 2
  int theorem1_bound = 0;
  std::optional<int> conjecture_bound;  // square shapes only
  double tolerance_used = 1e-10;
};

/// dimA * dimB - max(dimA, dimB): the most negative eigenvalues PT(rho) can have.
int theorem1_bound(const BipartiteShape& shape);

/// n (n - 1) / 2, the conjectured maximum for n x n states.
int conjecture_bound(int n);

/// Eigenvalues of PT(rho) classified against `tol`. ArgumentError if tol <= 0.
/// Throws TheoremViolation if the count exceeds theorem1_bound, which no
/// valid state can do.
NegativeSpectrumReport count_negative(const DensityMatrix& rho, double tol = 1e-10);

/// Census from an already computed PT spectrum (increasing order).
NegativeSpectrumReport census_from_eigenvalues(const BipartiteShape& shape, const RealVector& pt_eigenvalues,
                                               double tol = 1e-10);

/// (||PT(rho)||_1 - 1) / 2.
double negativity(const DensityMatrix& rho);

/// |PT(rho)| transposed back on A, with its smallest eigenvalue. For two
/// qubits the minimum is conjectured (Audenaert et al.) to be >= 0.
struct AbsPtPt {
  HermitianMatrix matrix;
  double min_eigenvalue;
};
AbsPtPt abs_pt_pt(const DensityMatrix& rho);

}  // namespace ppt
