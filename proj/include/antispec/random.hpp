#pragma once

#include <cstdint>
#include <random>

#include "antispec/types.hpp"

namespace antispec {

/// n x n matrix with i.i.d. standard complex Gaussian entries.
CMatrix random_gaussian(int n, std::mt19937_64& rng);

/// Haar-distributed unitary via QR of a Gaussian matrix, with the column
/// phases fixed so the result is a deterministic function of the rng state.
CMatrix random_unitary(int n, std::mt19937_64& rng);

inline CMatrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unitary(n, rng);
}

}  // namespace antispec
