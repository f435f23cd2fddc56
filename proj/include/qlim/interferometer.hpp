#pragma once

// Candidate linear interferometers R acting on the collector modes. Rows of R
// are the output modes that get photon-counted.

#include <optional>
#include <string_view>

#include "qlim/matdecomp.hpp"
#include "qlim/purify.hpp"
#include "qlim/scene.hpp"

namespace qlim {

enum class PlanMethod { QrBased, FiniteShift, SldLimit };

std::string_view to_string(PlanMethod method) noexcept;

struct PlanDiagnostics {
  double lower_triangularity = 0.0;  // QR: max |(RB)_ij| for j > i
  double p_asymmetry = 0.0;          // FiniteShift: ||P - P^dagger||_F before averaging
  double p_form_agreement = 0.0;     // FiniteShift: ||B A+ - (A+)^dagger D A+||_F
  double min_eigenvalue = 0.0;       // FiniteShift: smallest eigenvalue of P before clamping
  double sld_residual = 0.0;         // SldLimit: SLD equation residual
};

struct InterferometerPlan {
  PlanMethod method = PlanMethod::QrBased;
  CMatrix r;
  std::optional<RVector> lambda;  // eigenvalues of P (FiniteShift) or of L (SldLimit)
  std::optional<CMatrix> p;       // Hermitized P = B A+
  std::optional<CMatrix> sld;     // L (SldLimit)
  std::optional<double> delta;
  PlanDiagnostics diagnostics;
};

inline constexpr double kDefaultShift = 1e-5;

/// R = Q^dagger where A = Q T (qr_positive). Makes R A upper triangular; how
/// far R B is from lower triangular is recorded in the diagnostics.
InterferometerPlan build_qr(const PurificationPair& pair);

/// P = B A+ on the pair at (theta, theta + delta), diagonalised as
/// P = R^dagger Lambda R so that R B = Lambda R A.
InterferometerPlan build_finite_shift(const Scene& scene, double theta,
                                      double delta = kDefaultShift,
                                      std::optional<double> rtol = std::nullopt);

/// Same construction on an explicit pair.
InterferometerPlan build_finite_shift(const PurificationPair& pair,
                                      std::optional<double> rtol = std::nullopt,
                                      std::optional<double> delta = std::nullopt);

/// R = eigenbasis of the symmetric logarithmic derivative at theta.
InterferometerPlan build_sld(const Scene& scene, double theta, double support_tol = 1e-12);
InterferometerPlan build_sld(const CMatrix& rho, const CMatrix& drho, double support_tol = 1e-12);

/// Saturation defect: max over rows v of ||b'(v) - lambda_v a'(v)||. Plans
/// without lambda use the best lambda_v >= 0 per row, and rows where either
/// a'(v) or b'(v) vanishes count as saturated.
double plan_residual(const InterferometerPlan& plan, const PurificationPair& pair);

}  // namespace qlim
