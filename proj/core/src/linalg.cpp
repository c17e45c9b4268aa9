#include "ppt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ppt/errors.hpp"

namespace ppt {

namespace {

void require_dims(const HermitianMatrix& rho, const BipartiteShape& shape, const char* op) {
  if (rho.dim() != shape.total()) {
    std::ostringstream os;
    os << op << ": matrix dimension " << rho.dim() << " does not factor as " << shape.dim_a() << " x "
       << shape.dim_b();
    throw ShapeError(os.str());
  }
}

HermitianMatrix from_spectrum(const Spectrum& s, const RealVector& weights) {
  const ComplexMatrix& v = s.eigenvectors;
  return HermitianMatrix(ComplexMatrix(v * weights.cast<Complex>().asDiagonal() * v.adjoint()));
}

}  // namespace

BipartiteShape::BipartiteShape(int dim_a, int dim_b) : dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a < 1 || dim_b < 1) {
    throw ArgumentError("BipartiteShape: both factors must be >= 1");
  }
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError("HermitianMatrix: input must be square and nonempty");
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(ComplexMatrix(ComplexMatrix::Zero(dim, dim)));
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(ComplexMatrix(ComplexMatrix::Identity(dim, dim)));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return HermitianMatrix(m);
}

double HermitianMatrix::trace() const {
  return m_.diagonal().real().sum();
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& rhs) const {
  if (dim() != rhs.dim()) throw ShapeError("HermitianMatrix: dimension mismatch in +");
  return HermitianMatrix(ComplexMatrix(m_ + rhs.m_));
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& rhs) const {
  if (dim() != rhs.dim()) throw ShapeError("HermitianMatrix: dimension mismatch in -");
  return HermitianMatrix(ComplexMatrix(m_ - rhs.m_));
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(ComplexMatrix(m_ * s));
}

HermitianMatrix HermitianMatrix::conjugated_by(const ComplexMatrix& u) const {
  if (u.cols() != m_.rows()) throw ShapeError("conjugated_by: dimension mismatch");
  return HermitianMatrix(ComplexMatrix(u * m_ * u.adjoint()));
}

DensityMatrix::DensityMatrix(HermitianMatrix m, BipartiteShape shape, const Tolerances& tol)
    : m_(std::move(m)), shape_(shape) {
  require_dims(m_, shape_, "DensityMatrix");
  const double trace_dev = std::abs(m_.trace() - 1.0);
  if (!(trace_dev <= tol.trace)) {
    std::ostringstream os;
    os << "density matrix trace invariant violated: |tr - 1| = " << trace_dev << " > " << tol.trace;
    throw InvariantError("trace", trace_dev, os.str());
  }
  const double lmin = min_eigenvalue(m_);
  if (!(lmin >= -tol.psd_slack)) {
    std::ostringstream os;
    os << "density matrix PSD invariant violated: min eigenvalue " << lmin << " < -" << tol.psd_slack;
    throw InvariantError("psd", -lmin, os.str());
  }
}

DensityMatrix DensityMatrix::swapped() const {
  const int a = shape_.dim_a();
  const int b = shape_.dim_b();
  const int n = a * b;
  ComplexMatrix out(n, n);
  for (int ia = 0; ia < a; ++ia)
    for (int ib = 0; ib < b; ++ib)
      for (int ja = 0; ja < a; ++ja)
        for (int jb = 0; jb < b; ++jb) out(ib * a + ia, jb * a + ja) = m_(ia * b + ib, ja * b + jb);
  // A permutation similarity: trace and spectrum are unchanged.
  return DensityMatrix(HermitianMatrix(out), shape_.swapped(), Unchecked{});
}

HermitianMatrix partial_transpose(const HermitianMatrix& rho, const BipartiteShape& shape, Subsystem on) {
  require_dims(rho, shape, "partial_transpose");
  const int a = shape.dim_a();
  const int b = shape.dim_b();
  const ComplexMatrix& in = rho.matrix();
  ComplexMatrix out(rho.dim(), rho.dim());
  for (int ia = 0; ia < a; ++ia)
    for (int ja = 0; ja < a; ++ja)
      for (int ib = 0; ib < b; ++ib)
        for (int jb = 0; jb < b; ++jb) {
          const int src_row = on == Subsystem::A ? ja * b + ib : ia * b + jb;
          const int src_col = on == Subsystem::A ? ia * b + jb : ja * b + ib;
          out(ia * b + ib, ja * b + jb) = in(src_row, src_col);
        }
  return HermitianMatrix(out);
}

HermitianMatrix partial_trace(const HermitianMatrix& rho, const BipartiteShape& shape, Subsystem keep) {
  require_dims(rho, shape, "partial_trace");
  const int a = shape.dim_a();
  const int b = shape.dim_b();
  const ComplexMatrix& in = rho.matrix();
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(a, a);
    for (int ia = 0; ia < a; ++ia)
      for (int ja = 0; ja < a; ++ja)
        for (int k = 0; k < b; ++k) out(ia, ja) += in(ia * b + k, ja * b + k);
    return HermitianMatrix(out);
  }
  ComplexMatrix out = ComplexMatrix::Zero(b, b);
  for (int ib = 0; ib < b; ++ib)
    for (int jb = 0; jb < b; ++jb)
      for (int k = 0; k < a; ++k) out(ib, jb) += in(k * b + ib, k * b + jb);
  return HermitianMatrix(out);
}

Spectrum hermitian_eig(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eig: eigensolver did not converge", h.frobenius_norm());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eigenvalues: eigensolver did not converge", h.frobenius_norm());
  }
  return solver.eigenvalues();
}

double min_eigenvalue(const HermitianMatrix& h) {
  return hermitian_eigenvalues(h)(0);
}

HermitianMatrix operator_abs(const HermitianMatrix& h) {
  const Spectrum s = hermitian_eig(h);
  return from_spectrum(s, s.eigenvalues.cwiseAbs());
}

JordanParts jordan_split(const HermitianMatrix& h) {
  const Spectrum s = hermitian_eig(h);
  const RealVector pos = s.eigenvalues.cwiseMax(0.0);
  const RealVector neg = (-s.eigenvalues).cwiseMax(0.0);
  return {from_spectrum(s, pos), from_spectrum(s, neg)};
}

HermitianMatrix schur_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("schur_product: dimension mismatch");
  return HermitianMatrix(ComplexMatrix(a.matrix().cwiseProduct(b.matrix())));
}

HermitianMatrix principal_submatrix(const HermitianMatrix& h, std::span<const int> keep) {
  if (keep.empty()) throw ArgumentError("principal_submatrix: index set is empty");
  std::vector<bool> seen(static_cast<std::size_t>(h.dim()), false);
  for (int idx : keep) {
    if (idx < 0 || idx >= h.dim()) {
      throw ArgumentError("principal_submatrix: index " + std::to_string(idx) + " out of range");
    }
    if (seen[static_cast<std::size_t>(idx)]) {
      throw ArgumentError("principal_submatrix: duplicate index " + std::to_string(idx));
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
  const auto r = static_cast<Eigen::Index>(keep.size());
  ComplexMatrix out(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) out(i, j) = h(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
  return HermitianMatrix(out);
}

InterlacingReport interlacing_check(const HermitianMatrix& h, std::span<const int> keep, double tol) {
  const HermitianMatrix sub = principal_submatrix(h, keep);
  const RealVector full = hermitian_eigenvalues(h);
  const RealVector part = hermitian_eigenvalues(sub);
  const Eigen::Index n = full.size();
  const Eigen::Index r = part.size();

  InterlacingReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < r; ++k) {
    const double lower = part(k) - full(k);
    const double upper = full(k + n - r) - part(k);
    report.worst_margin = std::min({report.worst_margin, lower, upper});
  }
  report.holds = report.worst_margin >= -tol;
  return report;
}

double trace_norm(const HermitianMatrix& h) {
  return hermitian_eigenvalues(h).cwiseAbs().sum();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace ppt
