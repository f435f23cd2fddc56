#pragma once

// Fidelities, symmetric logarithmic derivative, quantum and classical Fisher
// information.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlim/interferometer.hpp"
#include "qlim/matdecomp.hpp"
#include "qlim/purify.hpp"
#include "qlim/scene.hpp"

namespace qlim {

inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr double kSupportTol = 1e-12;

/// Root fidelity Tr|M| = sum of singular values of C(theta)^dagger C(theta').
double quantum_fidelity(const Scene& scene, double theta, double theta_prime);

/// sum_v ||a'(v)|| ||b'(v)|| with A' = R A, B' = R B. Throws NotUnitary when
/// ||R^dagger R - I||_F > 1e-8.
double classical_fidelity(const PurificationPair& pair, const CMatrix& r);

/// The row-norm formula applied to already rotated matrices.
double row_norm_fidelity(const CMatrix& a_rot, const CMatrix& b_rot);

/// sum_v |a'(v,v)| |b'(v,v)|. This equals the classical fidelity only when
/// A' and B' are diagonal and underestimates it otherwise; kept as a
/// diagnostic for the QR-based construction.
double diagonal_fidelity(const CMatrix& a_rot, const CMatrix& b_rot);

struct SldBundle {
  CMatrix rho;
  CMatrix drho;
  CMatrix l;
  double support_tol = kSupportTol;
};

/// Solves d rho = (L rho + rho L) / 2 in the eigenbasis of rho. Entries with
/// lambda_i + lambda_j <= support_tol are set to zero; SupportLeak is raised if
/// d rho has weight above 1e-8 there.
SldBundle sld_solve(const CMatrix& rho, const CMatrix& drho, double support_tol = kSupportTol);

/// ||d rho - (L rho + rho L) / 2||_F
double sld_residual(const SldBundle& bundle);

/// Tr(rho L^2)
double qfi_from_sld(const SldBundle& bundle);

double qfi(const Scene& scene, double theta);

/// 8 (1 - f(theta - delta/2, theta + delta/2)) / delta^2, an independent route
/// to the QFI through the fidelity curvature. Carries an O(delta^2) bias. The
/// deficit 1 - f is evaluated in long double; where long double is no wider
/// than double the rounding noise grows to O(eps / delta^2).
double qfi_from_fidelity(const Scene& scene, double theta, double delta = 1e-4);

/// Photon-counting Fisher information behind R: p_v = (R rho R^dagger)_vv.
/// Outcomes with p_v <= 1e-12 are skipped unless |dp_v| > 1e-9, which raises
/// SingularOutcome.
double cfi(const CMatrix& rho, const CMatrix& drho, const CMatrix& r);

enum class DerivativeMode { Analytic, FiniteDifference };

struct FisherSettings {
  double delta = kDefaultShift;          // shift for the purification pair
  double fidelity_delta = 1e-4;          // stencil for qfi_from_fidelity
  std::optional<double> rtol;            // rank tolerance for pinv / consistency
  double support_tol = kSupportTol;
  DerivativeMode derivative = DerivativeMode::Analytic;
  double fd_step = 1e-6;                 // only for DerivativeMode::FiniteDifference
};

struct FisherResiduals {
  double qr_lower_triangularity = 0.0;
  double qr_plan_residual = 0.0;
  double gram_offdiag = 0.0;
  double sld_residual = 0.0;
};

/// Fields that could not be computed hold NaN and have an entry in `status`
/// of the form "field:ErrorKind".
struct FisherReport {
  double theta = 0.0;
  double qfi = 0.0;
  double qfi_fid = 0.0;
  double cfi_opt = 0.0;
  double cfi_qr = 0.0;
  double f_quantum = 0.0;
  double f_classical_opt = 0.0;
  double f_classical_qr = 0.0;
  FisherResiduals residuals;
  std::vector<std::string> status;

  bool clean() const noexcept { return status.empty(); }
};

FisherReport fisher_report(const Scene& scene, double theta, const FisherSettings& settings = {});

/// rho and d rho at theta according to the derivative mode in `settings`.
std::pair<CMatrix, CMatrix> state_and_derivative(const Scene& scene, double theta,
                                                 const FisherSettings& settings);

}  // namespace qlim
