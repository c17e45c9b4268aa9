#pragma once

// Seedable random states, unitaries, and named two-qubit families.
//
// Every random generator takes a SampleStream and is a pure function of it:
// the same (master_seed, sample_index) always yields bitwise-identical output,
// whatever thread computes it and in whatever order.

#include <array>
#include <cstdint>
#include <limits>
#include <string>

#include "ppt/linalg.hpp"

namespace ppt {

/// Counter-based 64-bit generator. Output n is a SplitMix64 finalizer applied
/// to key + (n + 1) * golden_gamma, so any position in the stream is
/// addressable without touching earlier ones. Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform01() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// 64-bit mixing function (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Identifies one independent random stream.
struct SampleStream {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;

  /// A fresh generator positioned at the start of this stream.
  CounterRng rng() const noexcept;

  /// A stream keyed additionally by `salt`; used to give distinct sweep cells
  /// (or distinct purposes) non-overlapping streams under one master seed.
  SampleStream salted(std::uint64_t salt) const noexcept;
};

/// rows x cols matrix of independent standard complex Gaussians (real and
/// imaginary parts each N(0, 1)), filled column by column.
ComplexMatrix ginibre_matrix(int rows, int cols, CounterRng& rng);

/// Which random-state measure to draw from.
struct EnsembleKind {
  enum class Tag { hilbert_schmidt, random_pure, bell_diagonal, werner, induced };

  Tag tag = Tag::hilbert_schmidt;
  int ancilla_dim = 0;  // induced(k) only, k >= 1

  static EnsembleKind hilbert_schmidt() { return {Tag::hilbert_schmidt, 0}; }
  static EnsembleKind random_pure() { return {Tag::random_pure, 0}; }
  static EnsembleKind bell_diagonal() { return {Tag::bell_diagonal, 0}; }
  static EnsembleKind werner() { return {Tag::werner, 0}; }
  static EnsembleKind induced(int k);

  /// "hilbert_schmidt", "random_pure", "bell_diagonal", "werner", "induced".
  std::string name() const;
  static EnsembleKind parse(const std::string& name, int ancilla_dim = 0);

  /// True if the ensemble is defined for `shape` (two-qubit families need 2x2).
  bool supports(const BipartiteShape& shape) const noexcept;

  friend bool operator==(const EnsembleKind&, const EnsembleKind&) = default;
};

/// rho = G G^dagger / tr(G G^dagger), G an n x n complex Ginibre matrix.
DensityMatrix hilbert_schmidt_random(const BipartiteShape& shape, const SampleStream& stream);

/// Induced measure: as hilbert_schmidt_random with G of size n x k.
DensityMatrix induced_random(const BipartiteShape& shape, int ancilla_dim, const SampleStream& stream);

/// |psi><psi| with psi Haar-random on C^n.
DensityMatrix random_pure_density(const BipartiteShape& shape, const SampleStream& stream);

/// Two-qubit state with the Bell-diagonal zero pattern
///   [a1 0  0  b1]
///   [0  a2 b2 0 ]
///   [0  b2* a3 0]
///   [b1* 0 0  a4]
/// Requires a_i >= 0, sum a_i = 1, a1 a4 >= |b1|^2, a2 a3 >= |b2|^2.
DensityMatrix bell_diagonal(const std::array<double, 4>& alphas, Complex beta1, Complex beta2);

/// Random point of the family above: alphas uniform on the simplex, each beta
/// uniform on the disk its PSD constraint allows.
DensityMatrix bell_diagonal_random(const SampleStream& stream);

/// p |Phi+><Phi+| + (1 - p) I / 4 on two qubits. ArgumentError unless 0 <= p <= 1.
DensityMatrix werner_state(double p);

/// |Phi><Phi| with |Phi> = n^{-1/2} sum_i |ii>, shape n x n. Requires n >= 2.
DensityMatrix maximally_entangled(int n);

/// Haar-random unitary via QR of a Ginibre matrix with phase-corrected R diagonal.
ComplexMatrix haar_unitary(int dim, const SampleStream& stream);

/// Draw from `kind` on `shape`. ArgumentError if the ensemble does not support
/// the shape. Werner samples use p uniform on [0, 1].
DensityMatrix sample_state(const EnsembleKind& kind, const BipartiteShape& shape, const SampleStream& stream);

}  // namespace ppt
