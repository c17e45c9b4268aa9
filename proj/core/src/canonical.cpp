#include "ppt/canonical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "ppt/errors.hpp"
#include "ppt/spectra.hpp"

namespace ppt {

namespace {

using Mat2 = Eigen::Matrix2cd;

constexpr double kPhaseFloor = 1e-15;

// First nonzero component real positive.
void normalize_column_phases(Mat2& u) {
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const double mag = std::abs(u(i, j));
      if (mag > 1e-14) {
        u.col(j) *= std::conj(u(i, j)) / mag;
        break;
      }
    }
  }
}

// Eigenbasis ordered by decreasing eigenvalue, or nothing if degenerate.
std::optional<Mat2> nondegenerate_basis(const Mat2& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  if (es.info() != Eigen::Success) throw NumericError("canonicalize: 2x2 eigensolver failed");
  if (es.eigenvalues()(1) - es.eigenvalues()(0) <= tol) return std::nullopt;
  Mat2 u;
  u.col(0) = es.eigenvectors().col(1);
  u.col(1) = es.eigenvectors().col(0);
  normalize_column_phases(u);
  return u;
}

Mat2 pauli_z_in(const Mat2& basis) {
  Mat2 z = Mat2::Zero();
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return basis * z * basis.adjoint();
}

Mat2 to_mat2(const HermitianMatrix& h) {
  return h.matrix().topLeftCorner<2, 2>();
}

double det3(const ComplexMatrix& m) {
  return m.determinant().real();
}

}  // namespace

HermitianMatrix canonical_matrix(double a11, double a22, double a33, double a44, double A, double B,
                                 Complex alpha, Complex beta) {
  ComplexMatrix m(4, 4);
  m << a11, A, B, alpha,
       A, a22, beta, -B,
       B, std::conj(beta), a33, -A,
       std::conj(alpha), -B, -A, a44;
  return HermitianMatrix(m);
}

CanonicalForm2Q canonicalize_two_qubit(const DensityMatrix& rho, double degeneracy_tol) {
  const BipartiteShape& shape = rho.shape();
  if (shape.dim_a() != 2 || shape.dim_b() != 2) {
    throw ArgumentError("canonicalize_two_qubit: shape must be 2 x 2");
  }
  const HermitianMatrix& m = rho.matrix();
  const Mat2 rho_a = to_mat2(partial_trace(m, shape, Subsystem::A));
  const Mat2 rho_b = to_mat2(partial_trace(m, shape, Subsystem::B));

  std::optional<Mat2> u = nondegenerate_basis(rho_a, degeneracy_tol);
  std::optional<Mat2> v = nondegenerate_basis(rho_b, degeneracy_tol);

  if (!u) {
    const Mat2 zb = pauli_z_in(v.value_or(Mat2::Identity()));
    const HermitianMatrix corr(ComplexMatrix(m.matrix() * kron(Mat2::Identity(), zb)));
    u = nondegenerate_basis(to_mat2(partial_trace(corr, shape, Subsystem::A)), degeneracy_tol)
            .value_or(Mat2::Identity());
  }
  if (!v) {
    const Mat2 za = pauli_z_in(*u);
    const HermitianMatrix corr(ComplexMatrix(m.matrix() * kron(za, Mat2::Identity())));
    v = nondegenerate_basis(to_mat2(partial_trace(corr, shape, Subsystem::B)), degeneracy_tol)
            .value_or(Mat2::Identity());
  }

  // Spend the |1>_B and |1>_A phases on entries (0,1) and (0,2).
  ComplexMatrix w = kron(*u, *v);
  HermitianMatrix t = m.conjugated_by(w.adjoint());
  const Complex e01 = t(0, 1);
  const Complex e02 = t(0, 2);
  if (std::abs(e01) > kPhaseFloor) v->col(1) *= std::conj(e01) / std::abs(e01);
  if (std::abs(e02) > kPhaseFloor) u->col(1) *= std::conj(e02) / std::abs(e02);
  w = kron(*u, *v);
  t = m.conjugated_by(w.adjoint());

  CanonicalForm2Q f;
  f.a11 = t(0, 0).real();
  f.a22 = t(1, 1).real();
  f.a33 = t(2, 2).real();
  f.a44 = t(3, 3).real();
  f.A = t(0, 1).real();
  f.B = t(0, 2).real();
  f.alpha = t(0, 3);
  f.beta = t(1, 2);
  f.u_local = *u;
  f.v_local = *v;

  const Mat2 ta = to_mat2(partial_trace(t, shape, Subsystem::A));
  const Mat2 tb = to_mat2(partial_trace(t, shape, Subsystem::B));
  f.residual = std::max({std::abs(t(0, 1).imag()), std::abs(t(0, 2).imag()), std::max(0.0, -f.A),
                         std::max(0.0, -f.B), std::abs(t(1, 3) + f.B), std::abs(t(2, 3) + f.A),
                         std::abs(ta(0, 1)), std::abs(tb(0, 1))});
  f.transformed = std::move(t);
  return f;
}

double det_gap_block1(const CanonicalForm2Q& f) {
  return 2.0 * f.A * f.B * (f.beta - f.alpha).real() + f.a11 * (std::norm(f.alpha) - std::norm(f.beta));
}

double det_gap_block2(const CanonicalForm2Q& f) {
  return 2.0 * f.A * f.B * (f.beta - f.alpha).real() + f.a22 * (std::norm(f.beta) - std::norm(f.alpha));
}

Theorem2Report theorem2_check(const CanonicalForm2Q& form, double tol, double psd_tol) {
  if (!(form.residual <= tol)) {
    std::ostringstream os;
    os << "theorem2_check: canonical-form residual " << form.residual << " exceeds " << tol;
    throw PreconditionError(os.str());
  }
  const BipartiteShape shape(2, 2);
  const HermitianMatrix& rho = form.transformed;
  const HermitianMatrix rho_pt = partial_transpose(rho, shape);

  constexpr std::array<int, 3> block1{0, 1, 2};
  constexpr std::array<int, 3> block2{0, 1, 3};
  const HermitianMatrix a1 = principal_submatrix(rho, block1);
  const HermitianMatrix a1t = principal_submatrix(rho_pt, block1);
  const HermitianMatrix a2 = principal_submatrix(rho, block2);
  const HermitianMatrix a2t = principal_submatrix(rho_pt, block2);

  Theorem2Report r;
  r.applicable = std::abs(form.A * form.B) <= tol || std::abs(form.alpha.real() - form.beta.real()) <= tol;
  r.det_gap_1_closed = det_gap_block1(form);
  r.det_gap_2_closed = det_gap_block2(form);
  r.det_gap_2_a11_variant =
      2.0 * form.A * form.B * (form.beta - form.alpha).real() + form.a11 * (std::norm(form.beta) - std::norm(form.alpha));
  r.det_gap_1_direct = det3(a1.matrix()) - det3(a1t.matrix());
  r.det_gap_2_direct = det3(a2.matrix()) - det3(a2t.matrix());
  r.block1_pt_min_eig = min_eigenvalue(a1t);
  r.block2_pt_min_eig = min_eigenvalue(a2t);
  r.some_block_psd = r.block1_pt_min_eig >= -psd_tol || r.block2_pt_min_eig >= -psd_tol;
  r.negative_count = census_from_eigenvalues(shape, hermitian_eigenvalues(rho_pt)).negative_count;

  if (r.applicable && (!r.some_block_psd || r.negative_count > 1)) {
    std::ostringstream os;
    os << "Theorem 2 violated: applicable form with block min eigs " << r.block1_pt_min_eig << ", "
       << r.block2_pt_min_eig << " and " << r.negative_count << " negative eigenvalues";
    throw TheoremViolation(os.str());
  }
  return r;
}

}  // namespace ppt
