#include "ppt/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ppt/errors.hpp"

namespace ppt {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

}  // namespace

ComplexMatrix ginibre_matrix(int rows, int cols, CounterRng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

namespace {

DensityMatrix normalized_gram(const ComplexMatrix& g, const BipartiteShape& shape) {
  ComplexMatrix w = g * g.adjoint();
  const double tr = w.diagonal().real().sum();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw NumericError("random density matrix: degenerate Gram trace", tr);
  }
  return DensityMatrix(HermitianMatrix(ComplexMatrix(w / tr)), shape);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform01() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

CounterRng SampleStream::rng() const noexcept {
  // Two rounds so neighbouring seeds and neighbouring indices decorrelate.
  return CounterRng(mix64(mix64(master_seed) ^ (sample_index * kGoldenGamma + 0x632BE59BD9B4E019ULL)));
}

SampleStream SampleStream::salted(std::uint64_t salt) const noexcept {
  return {mix64(master_seed ^ mix64(salt + kGoldenGamma)), sample_index};
}

EnsembleKind EnsembleKind::induced(int k) {
  if (k < 1) throw ArgumentError("induced ensemble: ancilla dimension must be >= 1");
  return {Tag::induced, k};
}

std::string EnsembleKind::name() const {
  switch (tag) {
    case Tag::hilbert_schmidt: return "hilbert_schmidt";
    case Tag::random_pure: return "random_pure";
    case Tag::bell_diagonal: return "bell_diagonal";
    case Tag::werner: return "werner";
    case Tag::induced: return "induced";
  }
  return "unknown";
}

EnsembleKind EnsembleKind::parse(const std::string& name, int ancilla_dim) {
  if (name == "hilbert_schmidt") return hilbert_schmidt();
  if (name == "random_pure") return random_pure();
  if (name == "bell_diagonal") return bell_diagonal();
  if (name == "werner") return werner();
  if (name == "induced") return induced(ancilla_dim);
  throw ArgumentError("unknown ensemble '" + name + "'");
}

bool EnsembleKind::supports(const BipartiteShape& shape) const noexcept {
  if (tag == Tag::bell_diagonal || tag == Tag::werner) return shape.dim_a() == 2 && shape.dim_b() == 2;
  return true;
}

DensityMatrix hilbert_schmidt_random(const BipartiteShape& shape, const SampleStream& stream) {
  CounterRng rng = stream.rng();
  return normalized_gram(ginibre_matrix(shape.total(), shape.total(), rng), shape);
}

DensityMatrix induced_random(const BipartiteShape& shape, int ancilla_dim, const SampleStream& stream) {
  if (ancilla_dim < 1) throw ArgumentError("induced ensemble: ancilla dimension must be >= 1");
  CounterRng rng = stream.rng();
  return normalized_gram(ginibre_matrix(shape.total(), ancilla_dim, rng), shape);
}

DensityMatrix random_pure_density(const BipartiteShape& shape, const SampleStream& stream) {
  CounterRng rng = stream.rng();
  ComplexMatrix psi = ginibre_matrix(shape.total(), 1, rng);
  psi /= psi.norm();
  return DensityMatrix(HermitianMatrix(ComplexMatrix(psi * psi.adjoint())), shape);
}

DensityMatrix bell_diagonal(const std::array<double, 4>& a, Complex beta1, Complex beta2) {
  constexpr double slack = 1e-14;
  for (double x : a) {
    if (!(x >= 0.0)) throw ArgumentError("bell_diagonal: diagonal weights must be non-negative");
  }
  if (a[0] * a[3] - std::norm(beta1) < -slack || a[1] * a[2] - std::norm(beta2) < -slack) {
    throw ArgumentError("bell_diagonal: off-diagonal exceeds the PSD bound");
  }
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) m(i, i) = a[static_cast<std::size_t>(i)];
  m(0, 3) = beta1;
  m(3, 0) = std::conj(beta1);
  m(1, 2) = beta2;
  m(2, 1) = std::conj(beta2);
  return DensityMatrix(HermitianMatrix(m), BipartiteShape(2, 2));
}

DensityMatrix bell_diagonal_random(const SampleStream& stream) {
  CounterRng rng = stream.rng();
  std::array<double, 4> a{};
  double total = 0.0;
  for (double& x : a) {
    x = -std::log1p(-rng.uniform01());
    total += x;
  }
  for (double& x : a) x /= total;

  auto disk = [&rng](double radius) {
    const double r = radius * std::sqrt(rng.uniform01());
    const double phi = 2.0 * std::numbers::pi * rng.uniform01();
    return std::polar(r, phi);
  };
  const Complex b1 = disk(std::sqrt(a[0] * a[3]));
  const Complex b2 = disk(std::sqrt(a[1] * a[2]));
  return bell_diagonal(a, b1, b2);
}

DensityMatrix werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("werner_state: p must lie in [0, 1]");
  ComplexMatrix m = ComplexMatrix::Identity(4, 4) * ((1.0 - p) / 4.0);
  m(0, 0) += p / 2.0;
  m(3, 3) += p / 2.0;
  m(0, 3) += p / 2.0;
  m(3, 0) += p / 2.0;
  return DensityMatrix(HermitianMatrix(m), BipartiteShape(2, 2));
}

DensityMatrix maximally_entangled(int n) {
  if (n < 2) throw ArgumentError("maximally_entangled: n must be >= 2");
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  const double w = 1.0 / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i * n + i, j * n + j) = w;
  return DensityMatrix(HermitianMatrix(m), BipartiteShape(n, n));
}

ComplexMatrix haar_unitary(int dim, const SampleStream& stream) {
  if (dim < 1) throw ArgumentError("haar_unitary: dim must be >= 1");
  CounterRng rng = stream.rng();
  const ComplexMatrix z = ginibre_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

DensityMatrix sample_state(const EnsembleKind& kind, const BipartiteShape& shape, const SampleStream& stream) {
  if (!kind.supports(shape)) {
    throw ArgumentError("ensemble '" + kind.name() + "' requires a 2 x 2 shape");
  }
  switch (kind.tag) {
    case EnsembleKind::Tag::hilbert_schmidt: return hilbert_schmidt_random(shape, stream);
    case EnsembleKind::Tag::random_pure: return random_pure_density(shape, stream);
    case EnsembleKind::Tag::bell_diagonal: return bell_diagonal_random(stream);
    case EnsembleKind::Tag::werner: {
      CounterRng rng = stream.rng();
      return werner_state(rng.uniform01());
    }
    case EnsembleKind::Tag::induced: return induced_random(shape, kind.ancilla_dim, stream);
  }
  throw ArgumentError("sample_state: unknown ensemble");
}

}  // namespace ppt
