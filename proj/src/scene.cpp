#include "qlim/scene.hpp"

#include <cmath>
#include <numeric>

#include "qlim/error.hpp"

namespace qlim {

namespace {

constexpr double kWeightExactTol = 1e-12;
constexpr double kWeightRenormTol = 1e-9;
constexpr double kTraceTol = 1e-12;

bool finite_all(const std::vector<double>& xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

std::vector<double> position_rates(const Scene& scene) {
  std::vector<double> rates(scene.source_positions().size(), 0.0);
  switch (scene.binding()) {
    case ParamBinding::ShiftLastSource:
      // theta is a separation; a lone source has nothing to separate from.
      if (rates.size() >= 2) rates.back() = 1.0;
      break;
    case ParamBinding::SymmetricSeparation:
      if (rates.size() != 2) {
        throw Error(ErrorKind::BadBinding, "SymmetricSeparation needs exactly two sources");
      }
      rates[0] = -0.5;
      rates[1] = 0.5;
      break;
  }
  return rates;
}

Scene build_scene(const SceneConfig& config) {
  if (config.source_positions.empty() || config.collector_positions.empty()) {
    throw Error(ErrorKind::BadConfig, "scene needs at least one source and one collector");
  }
  if (config.source_weights.size() != config.source_positions.size()) {
    throw Error(ErrorKind::BadConfig, "one weight per source is required");
  }
  if (!finite_all(config.source_positions) || !finite_all(config.source_weights) ||
      !finite_all(config.collector_positions)) {
    throw Error(ErrorKind::BadConfig, "scene entries must be finite");
  }
  if (!(config.scale > 0.0) || !std::isfinite(config.scale)) {
    throw Error(ErrorKind::BadConfig, "scale must be positive and finite");
  }
  for (double w : config.source_weights) {
    if (w < 0.0) throw Error(ErrorKind::BadConfig, "source weights must be nonnegative");
  }
  const double total =
      std::accumulate(config.source_weights.begin(), config.source_weights.end(), 0.0);
  const double deviation = std::abs(total - 1.0);
  if (deviation > kWeightRenormTol) {
    throw Error(ErrorKind::BadConfig, "source weights must sum to 1");
  }

  Scene scene;
  scene.x_ = config.source_positions;
  scene.w_ = config.source_weights;
  scene.u_ = config.collector_positions;
  scene.scale_ = config.scale;
  scene.binding_ = config.binding;
  if (deviation > kWeightExactTol) {
    for (double& w : scene.w_) w /= total;
  }
  return scene;
}

Scene fig1_scene(double scale) {
  return build_scene({{0.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}, scale, ParamBinding::ShiftLastSource});
}

Scene symmetric_scene(double scale) {
  return build_scene(
      {{0.0, 0.0}, {0.5, 0.5}, {-0.5, 0.5}, scale, ParamBinding::SymmetricSeparation});
}

std::vector<double> bound_positions(const Scene& scene, double theta) {
  const std::vector<double> rates = position_rates(scene);
  std::vector<double> x = scene.source_positions();
  for (std::size_t j = 0; j < x.size(); ++j) x[j] += rates[j] * theta;
  return x;
}

TransferMatrix transfer_matrix(const Scene& scene, double theta) {
  const std::vector<double> x = bound_positions(scene, theta);
  const auto& u = scene.collector_positions();
  const auto& w = scene.source_weights();
  const Eigen::Index V = scene.num_collectors();
  const Eigen::Index S = scene.num_sources();

  TransferMatrix out{CMatrix(V, S), theta};
  for (Eigen::Index v = 0; v < V; ++v) {
    for (Eigen::Index j = 0; j < S; ++j) {
      const double amp = std::sqrt(w[j] / static_cast<double>(V));
      out.c(v, j) = std::polar(amp, scene.scale() * u[v] * x[j]);
    }
  }
  return out;
}

CMatrix transfer_derivative(const Scene& scene, double theta) {
  const std::vector<double> rates = position_rates(scene);
  const CMatrix c = transfer_matrix(scene, theta).c;
  const auto& u = scene.collector_positions();

  CMatrix dc = CMatrix::Zero(c.rows(), c.cols());
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    if (rates[j] == 0.0) continue;
    for (Eigen::Index v = 0; v < c.rows(); ++v) {
      dc(v, j) = Complex(0.0, scene.scale() * u[v] * rates[j]) * c(v, j);
    }
  }
  return dc;
}

CMatrix density(const Scene& scene, double theta) {
  const CMatrix c = transfer_matrix(scene, theta).c;
  CMatrix rho = hermitian_part(c * c.adjoint());
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw Error(ErrorKind::InvariantBroken, "density trace deviates from one");
  }
  return rho;
}

CMatrix density_derivative(const Scene& scene, double theta) {
  const CMatrix c = transfer_matrix(scene, theta).c;
  const CMatrix dc = transfer_derivative(scene, theta);
  const CMatrix half = dc * c.adjoint();
  CMatrix out = half + half.adjoint();
  return out;
}

}  // namespace qlim
