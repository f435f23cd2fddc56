#include "qlim/oracle.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <vector>

#include "qlim/error.hpp"
#include "qlim/fisher.hpp"
#include "qlim/interferometer.hpp"
#include "qlim/parallel.hpp"
#include "qlim/rng.hpp"

namespace qlim {

CMatrix haar_unitary(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::BadShape, "haar_unitary: n must be >= 1");
  Rng rng(seed);
  CMatrix z(n, n);
  const double scale = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re * scale, im * scale);
    }
  }
  return qr_positive(z).q;
}

namespace {

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();
};

bool better(const Candidate& lhs, const Candidate& rhs) {
  return lhs.value > rhs.value || (lhs.value == rhs.value && lhs.index < rhs.index);
}

}  // namespace

SearchResult random_search_cfi(const Scene& scene, double theta, std::size_t n_samples,
                               std::uint64_t seed, unsigned workers) {
  if (n_samples < 1) throw Error(ErrorKind::BadConfig, "random search needs at least one sample");
  const CMatrix rho = density(scene, theta);
  const CMatrix drho = density_derivative(scene, theta);
  const Eigen::Index dim = rho.rows();

  // Candidate order: identity, SLD plan, QR plan, then Haar samples.
  std::vector<std::optional<CMatrix>> fixed(3);
  fixed[0] = CMatrix::Identity(dim, dim);
  try {
    fixed[1] = build_sld(rho, drho).r;
  } catch (const Error&) {
  }
  try {
    fixed[2] = build_qr(purification_pair(scene, theta, theta + kDefaultShift)).r;
  } catch (const Error&) {
  }

  auto unitary_at = [&](std::size_t index) -> std::optional<CMatrix> {
    if (index < fixed.size()) return fixed[index];
    return haar_unitary(dim, mix_seed(seed, index - fixed.size()));
  };

  const std::size_t total = fixed.size() + n_samples;
  const unsigned n_workers = workers == 0 ? worker_count() : workers;
  std::vector<Candidate> chunk_best;
  std::mutex guard;

  parallel_chunks(total, n_workers, [&](std::size_t begin, std::size_t end) {
    Candidate local;
    for (std::size_t k = begin; k < end; ++k) {
      const std::optional<CMatrix> r = unitary_at(k);
      if (!r) continue;
      Candidate c{cfi(rho, drho, *r), k};
      if (better(c, local)) local = c;
    }
    std::lock_guard lock(guard);
    chunk_best.push_back(local);
  });

  Candidate best;
  for (const Candidate& c : chunk_best) {
    if (better(c, best)) best = c;
  }

  SearchResult out;
  out.best_cfi = best.value;
  out.best_r = *unitary_at(best.index);
  out.samples = n_samples;
  out.seed = seed;
  out.generator = std::string(kGeneratorName);
  switch (best.index) {
    case 0: out.best_source = "identity"; break;
    case 1: out.best_source = "sld"; break;
    case 2: out.best_source = "qr"; break;
    default: out.best_source = "haar:" + std::to_string(best.index - fixed.size());
  }
  return out;
}

double uhlmann_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  constexpr double kTraceSlack = 1e-10;
  if (rho.trace().real() > 1.0 + kTraceSlack || sigma.trace().real() > 1.0 + kTraceSlack) {
    throw Error(ErrorKind::InvalidState, "uhlmann_fidelity: trace exceeds one");
  }
  const CMatrix product = sqrtm_psd(rho) * sqrtm_psd(sigma);
  return svd_fixed(product).sigma.sum();
}

}  // namespace qlim
