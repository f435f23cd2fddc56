#include "qlim/corpus.hpp"

#include <algorithm>
#include <cmath>

namespace qlim {

CMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix out(rows, cols);
  const double scale = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      out(i, j) = Complex(re * scale, im * scale);
    }
  }
  return out;
}

namespace {

CorpusCase draw_case(Rng& rng, const CorpusOptions& options) {
  SceneConfig cfg;
  const int sources = rng.uniform_int(1, options.max_sources);
  const int collector_cap = options.full_rank ? std::min(sources, options.max_collectors)
                                              : options.max_collectors;
  const int collectors = rng.uniform_int(1, collector_cap);

  double total = 0.0;
  for (int j = 0; j < sources; ++j) {
    cfg.source_positions.push_back(rng.uniform(-1.0, 1.0));
    cfg.source_weights.push_back(rng.uniform(0.1, 1.0));
    total += cfg.source_weights.back();
  }
  for (double& w : cfg.source_weights) w /= total;
  for (int v = 0; v < collectors; ++v) cfg.collector_positions.push_back(rng.uniform(-1.0, 1.0));
  cfg.scale = rng.uniform(0.5, 3.0);
  cfg.binding = ParamBinding::ShiftLastSource;

  const double theta = rng.uniform(0.1, 3.0);
  return {build_scene(cfg), theta};
}

}  // namespace

double condition_number(const CMatrix& c) {
  const Eigen::JacobiSVD<CMatrix> svd(c);
  const RVector& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

CorpusCase random_case(Rng& rng, const CorpusOptions& options) {
  for (;;) {
    CorpusCase c = draw_case(rng, options);
    if (options.max_condition <= 0.0 ||
        condition_number(transfer_matrix(c.scene, c.theta).c) <= options.max_condition) {
      return c;
    }
  }
}

}  // namespace qlim
