#pragma once

// Imaging configuration: point sources on a line, collectors in the aperture
// plane, and the far-field transfer matrix C(theta) with its theta-derivative.

#include <vector>

#include "qlim/matdecomp.hpp"

namespace qlim {

/// How the scalar parameter theta moves the sources.
enum class ParamBinding {
  ShiftLastSource,     // last source sits at x_last + theta (S >= 2)
  SymmetricSeparation, // two sources at x_0 - theta/2 and x_1 + theta/2
};

struct SceneConfig {
  std::vector<double> source_positions;
  std::vector<double> source_weights;
  std::vector<double> collector_positions;
  double scale = 1.0;  // k / z0
  ParamBinding binding = ParamBinding::ShiftLastSource;
};

/// Immutable validated scene. Construct through build_scene.
class Scene {
 public:
  const std::vector<double>& source_positions() const noexcept { return x_; }
  const std::vector<double>& source_weights() const noexcept { return w_; }
  const std::vector<double>& collector_positions() const noexcept { return u_; }
  double scale() const noexcept { return scale_; }
  ParamBinding binding() const noexcept { return binding_; }

  Eigen::Index num_sources() const noexcept { return static_cast<Eigen::Index>(x_.size()); }
  Eigen::Index num_collectors() const noexcept { return static_cast<Eigen::Index>(u_.size()); }

  SceneConfig config() const { return {x_, w_, u_, scale_, binding_}; }

 private:
  friend Scene build_scene(const SceneConfig& config);
  Scene() = default;

  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<double> u_;
  double scale_ = 1.0;
  ParamBinding binding_ = ParamBinding::ShiftLastSource;
};

struct TransferMatrix {
  CMatrix c;  // collectors x sources
  double theta = 0.0;
};

/// Validates and normalizes a scene description. Weights whose sum is off by
/// at most 1e-9 are renormalized; anything else is BadConfig.
Scene build_scene(const SceneConfig& config);

/// Two equal-weight sources at x = 0 and x = theta, collectors at u = 0, 1.
Scene fig1_scene(double scale = 1.0);

/// Inversion-symmetric pair: sources at -theta/2, +theta/2, collectors at
/// u = -1/2, +1/2.
Scene symmetric_scene(double scale = 1.0);

/// d x_j / d theta for each source under the scene's binding.
std::vector<double> position_rates(const Scene& scene);

/// Source positions after applying the parameter binding.
std::vector<double> bound_positions(const Scene& scene, double theta);

/// c[v, j] = sqrt(w_j / V) * exp(i * scale * u_v * x_j(theta))
TransferMatrix transfer_matrix(const Scene& scene, double theta);

/// Entrywise dC/dtheta.
CMatrix transfer_derivative(const Scene& scene, double theta);

/// rho = C C^dagger (trace one by construction).
CMatrix density(const Scene& scene, double theta);

/// d rho / d theta = (dC) C^dagger + C (dC)^dagger
CMatrix density_derivative(const Scene& scene, double theta);

}  // namespace qlim
