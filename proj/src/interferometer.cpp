#include "qlim/interferometer.hpp"

#include <algorithm>
#include <cmath>

#include "qlim/error.hpp"
#include "qlim/fisher.hpp"

namespace qlim {

namespace {

constexpr double kAsymmetryRtol = 1e-6;
constexpr double kEigenFloor = -1e-10;
constexpr double kVanishingRow = 1e-12;

}  // namespace

std::string_view to_string(PlanMethod method) noexcept {
  switch (method) {
    case PlanMethod::QrBased: return "QrBased";
    case PlanMethod::FiniteShift: return "FiniteShift";
    case PlanMethod::SldLimit: return "SldLimit";
  }
  return "QrBased";
}

InterferometerPlan build_qr(const PurificationPair& pair) {
  const QrResult qr = qr_positive(pair.a);
  InterferometerPlan plan;
  plan.method = PlanMethod::QrBased;
  plan.r = qr.q.adjoint();

  const CMatrix rb = plan.r * pair.b;
  double upper = 0.0;
  for (Eigen::Index j = 1; j < rb.cols(); ++j) {
    for (Eigen::Index i = 0; i < std::min(j, rb.rows()); ++i) {
      upper = std::max(upper, std::abs(rb(i, j)));
    }
  }
  plan.diagnostics.lower_triangularity = upper;
  return plan;
}

InterferometerPlan build_finite_shift(const PurificationPair& pair, std::optional<double> rtol,
                                      std::optional<double> delta) {
  if (pair.a.rows() != pair.b.rows() || pair.a.cols() != pair.b.cols()) {
    throw Error(ErrorKind::BadShape, "purifications must have the same shape");
  }
  if (!local_consistency(pair, rtol).consistent) {
    throw Error(ErrorKind::SupportMismatch, "A and B do not share a column space");
  }

  const CMatrix a_pinv = pinv(pair.a, rtol);
  const CMatrix p_raw = pair.b * a_pinv;
  const CMatrix p_gram = a_pinv.adjoint() * pair.d.cast<Complex>().asDiagonal() * a_pinv;

  InterferometerPlan plan;
  plan.method = PlanMethod::FiniteShift;
  plan.delta = delta;
  plan.diagnostics.p_asymmetry = hermiticity_defect(p_raw);
  plan.diagnostics.p_form_agreement = (p_raw - p_gram).norm();
  if (plan.diagnostics.p_asymmetry > kAsymmetryRtol * p_raw.norm()) {
    throw Error(ErrorKind::NotHermitian, "B A+ is not Hermitian");
  }

  plan.p = hermitian_part(p_raw);
  const EighResult eig = eigh_fixed(*plan.p);
  plan.diagnostics.min_eigenvalue = eig.lambda(eig.lambda.size() - 1);
  if (plan.diagnostics.min_eigenvalue < kEigenFloor) {
    throw Error(ErrorKind::NotPSD, "P has a negative eigenvalue");
  }
  plan.lambda = eig.lambda.cwiseMax(0.0);
  plan.r = eig.w.adjoint();
  return plan;
}

InterferometerPlan build_finite_shift(const Scene& scene, double theta, double delta,
                                      std::optional<double> rtol) {
  if (delta == 0.0 || !std::isfinite(delta)) {
    throw Error(ErrorKind::BadConfig, "finite shift needs a nonzero delta");
  }
  return build_finite_shift(purification_pair(scene, theta, theta + delta), rtol, delta);
}

InterferometerPlan build_sld(const CMatrix& rho, const CMatrix& drho, double support_tol) {
  const SldBundle bundle = sld_solve(rho, drho, support_tol);
  const EighResult eig = eigh_fixed(bundle.l);

  InterferometerPlan plan;
  plan.method = PlanMethod::SldLimit;
  plan.r = eig.w.adjoint();
  plan.lambda = eig.lambda;
  plan.sld = bundle.l;
  plan.diagnostics.sld_residual = sld_residual(bundle);
  return plan;
}

InterferometerPlan build_sld(const Scene& scene, double theta, double support_tol) {
  return build_sld(density(scene, theta), density_derivative(scene, theta), support_tol);
}

double plan_residual(const InterferometerPlan& plan, const PurificationPair& pair) {
  const CMatrix a_rot = plan.r * pair.a;
  const CMatrix b_rot = plan.r * pair.b;
  const bool has_lambda = plan.method == PlanMethod::FiniteShift && plan.lambda.has_value();

  double worst = 0.0;
  for (Eigen::Index v = 0; v < a_rot.rows(); ++v) {
    const double na = a_rot.row(v).norm();
    const double nb = b_rot.row(v).norm();
    double defect = 0.0;
    if (has_lambda) {
      if (na <= kVanishingRow && nb <= kVanishingRow) continue;
      defect = (b_rot.row(v) - (*plan.lambda)(v) * a_rot.row(v)).norm();
    } else {
      if (na <= kVanishingRow || nb <= kVanishingRow) continue;
      const Complex overlap = a_rot.row(v).conjugate().cwiseProduct(b_rot.row(v)).sum();
      const double best = std::max(0.0, overlap.real() / (na * na));
      defect = (b_rot.row(v) - best * a_rot.row(v)).norm();
    }
    worst = std::max(worst, defect);
  }
  return worst;
}

}  // namespace qlim
