#pragma once

#include <cstdint>

#include "ppt/ensembles.hpp"
#include "ppt/linalg.hpp"

namespace testing_support {

inline ppt::HermitianMatrix random_hermitian(int n, ppt::CounterRng& rng) {
  const ppt::ComplexMatrix g = ppt::ginibre_matrix(n, n, rng);
  return ppt::HermitianMatrix(ppt::ComplexMatrix(g + g.adjoint()));
}

inline ppt::HermitianMatrix random_psd(int n, ppt::CounterRng& rng) {
  const ppt::ComplexMatrix g = ppt::ginibre_matrix(n, n, rng);
  return ppt::HermitianMatrix(ppt::ComplexMatrix(g * g.adjoint()));
}

inline ppt::DensityMatrix hs_state(int a, int b, std::uint64_t seed, std::uint64_t index = 0) {
  return ppt::hilbert_schmidt_random(ppt::BipartiteShape(a, b), {seed, index});
}

}  // namespace testing_support
