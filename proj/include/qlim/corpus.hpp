#pragma once

// Seeded random scenes for property checks.

#include <cstdint>

#include "qlim/rng.hpp"
#include "qlim/scene.hpp"

namespace qlim {

struct CorpusOptions {
  int max_sources = 5;
  int max_collectors = 5;
  // Keep collectors <= sources so that rho has full rank and the supports of
  // rho(theta) and rho(theta') coincide (needed by the finite-shift plan).
  bool full_rank = false;
  // When positive, redraw until cond(C(theta)) <= max_condition. The
  // finite-shift identities lose about cond^2 * eps, so corpora that check
  // them at 1e-9 keep to resolved scenes.
  double max_condition = 0.0;
};

/// Corpus used for the finite-shift construction checks.
inline constexpr CorpusOptions kResolvedCorpus{5, 5, true, 1e3};

struct CorpusCase {
  Scene scene;
  double theta;
};

/// Positions and collectors uniform in [-1, 1], scale in [0.5, 3], weights
/// uniform in [0.1, 1] then normalized, theta in [0.1, 3]. All draws come from
/// `rng`, so a case is a pure function of the generator state.
CorpusCase random_case(Rng& rng, const CorpusOptions& options = {});

/// sigma_max / sigma_min over the min(rows, cols) singular values.
double condition_number(const CMatrix& c);

/// Above this cond(C), rho has eigenvalues below the SLD support tolerance that
/// still carry Fisher information, and the SLD and fidelity routes to the QFI
/// are no longer comparable.
inline constexpr double kQfiComparableCondition = 1e5;

/// Random complex matrix with entries (N(0,1) + i N(0,1)) / sqrt(2).
CMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace qlim
