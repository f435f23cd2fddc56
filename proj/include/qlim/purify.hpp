#pragma once

// Overlap matrix M = C(theta)^dagger C(theta') and the canonical purification
// pair A = C(theta) U, B = C(theta') V for which A^dagger B = diag(d) >= 0.

#include <optional>
#include <vector>

#include "qlim/matdecomp.hpp"
#include "qlim/scene.hpp"

namespace qlim {

struct OverlapDecomp {
  double theta = 0.0;
  double theta_prime = 0.0;
  CMatrix m;
  SvdResult svd;
};

struct PurificationPair {
  CMatrix a;
  CMatrix b;
  RVector d;  // singular values of M, so that A^dagger B = diag(d)
};

struct ConsistencyReport {
  bool consistent = false;
  std::vector<double> principal_angles;  // ascending, radians
  double gram_offdiag = 0.0;
};

/// Largest principal angle (radians) tolerated by local_consistency.
inline constexpr double kConsistencyAngle = 1e-6;

OverlapDecomp overlap_decomp(const Scene& scene, double theta, double theta_prime);

/// Throws GaugeResidual if ||A^dagger B - diag(d)||_F > 1e-9.
PurificationPair purifications(const OverlapDecomp& decomp, const Scene& scene);

/// overlap_decomp followed by purifications.
PurificationPair purification_pair(const Scene& scene, double theta, double theta_prime);

/// ||A^dagger B - diag(d)||_F
double gauge_residual(const PurificationPair& pair);

/// Compares the column spaces of A and B (rank taken at rtol) and reports the
/// largest off-diagonal magnitude of the Gram matrices A^dagger A, B^dagger B.
/// Those equal U^dagger C^dagger C U and V^dagger C'^dagger C' V.
ConsistencyReport local_consistency(const PurificationPair& pair,
                                    std::optional<double> rtol = std::nullopt);

}  // namespace qlim
