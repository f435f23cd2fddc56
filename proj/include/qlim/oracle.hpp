#pragma once

// Brute-force baselines used to audit the constructions: random search over
// Haar-distributed interferometers and Uhlmann fidelity through square roots.

#include <cstdint>
#include <string>

#include "qlim/matdecomp.hpp"
#include "qlim/scene.hpp"

namespace qlim {

/// Haar-random n x n unitary: QR of a complex Ginibre matrix with the
/// positive-diagonal correction. Deterministic per (n, seed).
CMatrix haar_unitary(Eigen::Index n, std::uint64_t seed);

struct SearchResult {
  double best_cfi = 0.0;
  CMatrix best_r;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::string best_source;  // "identity", "sld", "qr" or "haar:<index>"
};

/// Maximum CFI over the identity, the SLD plan, the QR plan, and n_samples
/// Haar unitaries with seeds mix_seed(seed, i). Ties go to the earlier
/// candidate, so the result does not depend on the worker count.
SearchResult random_search_cfi(const Scene& scene, double theta, std::size_t n_samples,
                               std::uint64_t seed, unsigned workers = 0);

/// Tr|sqrt(rho) sqrt(sigma)|.
double uhlmann_fidelity(const CMatrix& rho, const CMatrix& sigma);

}  // namespace qlim
