#include "ppt/theorem3.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "ppt/errors.hpp"
#include "ppt/spectra.hpp"

namespace ppt {

namespace {

constexpr double kSingular = 1e-12;

const BipartiteShape& two_qubits() {
  static const BipartiteShape shape(2, 2);
  return shape;
}

void require_k(double k, const char* op) {
  if (!(k >= 1.0)) throw ArgumentError(std::string(op) + ": k must be >= 1 (order alpha >= beta first)");
}

bool s_denominators_ok(double mu, double nu, double a11) {
  return std::abs(a11 - mu) > kSingular && std::abs(a11 + nu) > kSingular && mu > 0.0 &&
         std::abs(a11 - nu * nu / mu) > kSingular;
}

Theorem3Report analyze(const HermitianMatrix& rho, const Theorem3Options& opt) {
  if (rho.dim() != 4) throw ArgumentError("theorem3_analyze: state must be two-qubit (4 x 4)");
  const BipartiteShape& shape = two_qubits();

  const HermitianMatrix rho_pt = partial_transpose(rho, shape);
  const Spectrum spec = hermitian_eig(rho_pt);
  const RealVector& ev = spec.eigenvalues;

  Theorem3Report r;
  r.negative_count = static_cast<int>((ev.array() < -opt.negative_tol).count());
  r.e = ev(0);
  r.negativity = (ev.cwiseAbs().sum() - 1.0) / 2.0;
  r.sqrt_abs_e = std::sqrt(std::abs(std::min(ev(0), 0.0)));
  {
    const HermitianMatrix back = partial_transpose(operator_abs(rho_pt), shape);
    r.abs_pt_pt_min_eig = min_eigenvalue(back);
  }
  if (r.negative_count != 1) return r;
  if (ev(1) - ev(0) <= opt.gap_tol) {
    r.near_degenerate = true;
    return r;
  }
  r.applicable = true;

  // Schmidt frame of the negative eigenvector: coefficient matrix C with
  // psi = sum C_ij |ij>; C = U diag(s) V^dagger, new bases U (A) and conj(V) (B).
  const double abs_e = -ev(0);
  const Eigen::Vector4cd psi = spec.eigenvectors.col(0);
  Eigen::Matrix2cd coeff;
  coeff << psi(0), psi(1), psi(2), psi(3);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2cd u = svd.matrixU();
  const Eigen::Matrix2cd v = svd.matrixV().conjugate();
  const ComplexMatrix w = kron(u, v);

  Theorem3Details d;
  d.u_local = u;
  d.v_local = v;
  d.schmidt_alpha = std::sqrt(abs_e) * svd.singularValues()(0);
  d.schmidt_beta = std::sqrt(abs_e) * svd.singularValues()(1);
  d.mu = d.schmidt_alpha * d.schmidt_alpha;
  d.nu = d.schmidt_beta * d.schmidt_beta;
  const double alpha = d.schmidt_alpha;
  const double beta = d.schmidt_beta;

  const HermitianMatrix pt_frame = rho_pt.conjugated_by(w.adjoint());
  const HermitianMatrix rho_frame = partial_transpose(pt_frame, shape);
  Eigen::Vector4cd big_psi(alpha, 0.0, 0.0, beta);
  const HermitianMatrix rho_minus(ComplexMatrix(big_psi * big_psi.adjoint()));
  const HermitianMatrix a_part = pt_frame + rho_minus;
  d.a11 = a_part(0, 0).real();
  d.annihilation_residual = (a_part.matrix() * rho_minus.matrix()).norm();

  const HermitianMatrix abs_pt_pt_frame = partial_transpose(operator_abs(pt_frame), shape);

  d.beta_zero = beta <= opt.beta_zero_tol;
  if (!d.beta_zero) {
    const double k = alpha / beta;
    d.k = k;
    d.ratio_in_window = k >= 1.0 && k <= theorem3_k_max() + opt.boundary_tol;
    d.e1 = e1_bound(k);
    const double den2 = 2.0 * k * k - std::pow(k - 1.0, 4);
    if (std::abs(den2) > kSingular) d.e2 = e2_bound(k);
    d.e_within_bounds = d.e2 && *d.e2 <= abs_e + opt.psd_tol && abs_e <= *d.e1 + opt.psd_tol;
    d.trace_compatible = std::pow((alpha + beta) / beta, 2) * d.a11 <= 1.0 + (alpha - beta) * (alpha - beta) + opt.psd_tol;
  }
  d.a11_ge_mu = d.a11 >= d.mu - opt.psd_tol;
  d.a11_ge_nu2_over_mu = d.mu > 0.0 && d.a11 >= d.nu * d.nu / d.mu - opt.psd_tol;
  d.det_s_nonneg = (d.mu - d.nu) * (d.mu - d.nu) * d.a11 <= 2.0 * d.mu * d.nu * d.nu + opt.psd_tol;

  if (s_denominators_ok(d.mu, d.nu, d.a11)) {
    HermitianMatrix s = build_s_matrix(d.mu, d.nu, d.a11);
    d.s_min_eig = min_eigenvalue(s);
    const double scale = std::max(1.0, s.matrix().cwiseAbs().maxCoeff());
    d.s_psd = d.s_min_eig >= -opt.psd_tol * scale;
    d.schur_residual = (schur_product(rho_frame, s).matrix() - abs_pt_pt_frame.matrix()).norm();
    d.s_matrix = std::move(s);
  }

  if (d.beta_zero) {
    constexpr std::array<int, 3> tail{1, 2, 3};
    BetaZeroDeterminants bz;
    bz.det_gap = abs_pt_pt_frame.matrix().determinant().real() - rho_frame.matrix().determinant().real();
    bz.predicted = 2.0 * d.mu * principal_submatrix(rho_frame, tail).matrix().determinant().real();
    d.beta_zero_dets = bz;
  }
  d.frame_state = rho_frame;
  r.details = std::move(d);
  return r;
}

}  // namespace

double theorem3_k_max() {
  return std::sqrt(std::sqrt(2.0) + 1.0);
}

double e1_bound(double k) {
  require_k(k, "e1_bound");
  const double den = k * k * (k + 1.0) * (k + 1.0) - (k - 1.0) * (k - 1.0);
  return (1.0 + k * k) / den;
}

double e2_bound(double k) {
  require_k(k, "e2_bound");
  const double den = 2.0 * k * k - std::pow(k - 1.0, 4);
  if (std::abs(den) <= kSingular) throw SingularityError("e2_bound: vanishing denominator", den);
  return (1.0 + k * k) * (k - 1.0) * (k - 1.0) / den;
}

HermitianMatrix build_s_matrix(double mu, double nu, double a11) {
  if (!s_denominators_ok(mu, nu, a11)) throw SingularityError("build_s_matrix: vanishing denominator");
  Eigen::Matrix4d s = Eigen::Matrix4d::Ones();
  const double nu2_mu = nu * nu / mu;
  s(0, 0) = (a11 + mu) / (a11 - mu);
  s(1, 2) = s(2, 1) = (a11 - nu) / (a11 + nu);
  s(3, 3) = (a11 + nu2_mu) / (a11 - nu2_mu);
  return HermitianMatrix(Eigen::MatrixXd(s));
}

SDeterminants s_matrix_dets(double mu, double nu, double a11) {
  if (!(nu > 0.0 && mu >= nu && a11 > mu && mu * a11 > nu * nu)) {
    throw ArgumentError("s_matrix_dets: requires a11 > mu >= nu > 0 and mu a11 > nu^2");
  }
  const double d1 = a11 - mu;
  const double d2 = (a11 + nu) * (a11 + nu);
  const double d3 = mu * a11 - nu * nu;
  if (std::abs(d1) <= kSingular || std::abs(d2) <= kSingular || std::abs(d3) <= kSingular) {
    throw SingularityError("s_matrix_dets: vanishing denominator");
  }
  const double bracket = (mu - nu) * (mu - nu) * a11 - 2.0 * mu * nu * nu;
  SDeterminants out;
  out.leading3 = 4.0 * nu * ((2.0 * mu - nu) * a11 + mu * nu) / (d1 * d2);
  out.full = -8.0 * nu * nu * bracket / (d1 * d2 * d3);
  out.full_single_nu_variant = -8.0 * nu * bracket / (d1 * d2 * d3);
  return out;
}

Theorem3Report theorem3_analyze_hermitian(const HermitianMatrix& rho, const Theorem3Options& opt) {
  return analyze(rho, opt);
}

Theorem3Report theorem3_analyze(const DensityMatrix& rho, const Theorem3Options& opt) {
  if (rho.shape().dim_a() != 2 || rho.shape().dim_b() != 2) {
    throw ArgumentError("theorem3_analyze: shape must be 2 x 2");
  }
  Theorem3Report r = analyze(rho.matrix(), opt);
  if (r.applicable && (r.details->beta_zero || r.details->ratio_in_window) &&
      r.abs_pt_pt_min_eig < -opt.psd_tol) {
    std::ostringstream os;
    os << "Theorem 3 guarantee violated: min eig of |rho^T|^T = " << r.abs_pt_pt_min_eig;
    throw TheoremViolation(os.str());
  }
  return r;
}

DensityMatrix synthesize_theorem3_state(double k, const SampleStream& stream, int max_tries) {
  require_k(k, "synthesize_theorem3_state");
  const BipartiteShape& shape = two_qubits();
  CounterRng rng = stream.rng();

  // Unit-norm direction of Psi and an orthonormal basis of its complement.
  const double norm = std::sqrt(1.0 + k * k);
  const double a = k / norm;
  const double b = 1.0 / norm;
  Eigen::Vector4cd dir(a, 0.0, 0.0, b);
  Eigen::Matrix<Complex, 4, 3> perp = Eigen::Matrix<Complex, 4, 3>::Zero();
  perp(1, 0) = 1.0;
  perp(2, 1) = 1.0;
  perp(0, 2) = b;
  perp(3, 2) = -a;

  const double e_max = e1_bound(k);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    const ComplexMatrix g = ginibre_matrix(3, 3, rng);
    ComplexMatrix a_part = perp * (g * g.adjoint()) * perp.adjoint();
    const double abs_e = e_max * (1.0 - rng.uniform01());
    a_part *= (1.0 + abs_e) / a_part.diagonal().real().sum();
    const ComplexMatrix pt = a_part - abs_e * dir * dir.adjoint();
    const HermitianMatrix rho = partial_transpose(HermitianMatrix(pt), shape);
    if (min_eigenvalue(rho) < 1e-12) continue;

    const ComplexMatrix ua = haar_unitary(2, stream.salted(0xA11CE));
    const ComplexMatrix ub = haar_unitary(2, stream.salted(0xB0B));
    HermitianMatrix scrambled = rho.conjugated_by(kron(ua, ub));
    scrambled = scrambled * (1.0 / scrambled.trace());
    return DensityMatrix(std::move(scrambled), shape);
  }
  throw NumericError("synthesize_theorem3_state: rejection sampling exhausted", static_cast<double>(max_tries));
}

}  // namespace ppt
