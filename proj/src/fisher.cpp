#include "qlim/fisher.hpp"

#include <cmath>
#include <limits>

#include "qlim/error.hpp"

namespace qlim {

namespace {

constexpr double kUnitaryTol = 1e-8;
constexpr double kStateTol = 1e-8;
constexpr double kLeakTol = 1e-8;
constexpr double kSingularSlope = 1e-9;
constexpr double kFisherOrderTol = 1e-6;
constexpr double kFidelityOrderTol = 1e-10;

void require_unitary(const CMatrix& r, const char* where) {
  if (r.rows() != r.cols() || unitarity_defect(r) > kUnitaryTol) {
    throw Error(ErrorKind::NotUnitary, std::string(where) + ": R is not unitary");
  }
}

void require_hermitian_within(const CMatrix& h, double tol, const char* what) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::NotSquare, std::string(what) + " is not square");
  if (hermiticity_defect(h) > tol) {
    throw Error(ErrorKind::NotHermitian, std::string(what) + " is not Hermitian");
  }
}

using WideComplex = std::complex<long double>;
using WideMatrix = Eigen::Matrix<WideComplex, Eigen::Dynamic, Eigen::Dynamic>;

WideMatrix wide_transfer(const Scene& scene, long double theta) {
  const std::vector<double> rates = position_rates(scene);
  const auto& x = scene.source_positions();
  const auto& u = scene.collector_positions();
  const auto& w = scene.source_weights();
  const Eigen::Index V = scene.num_collectors();
  const Eigen::Index S = scene.num_sources();
  // Weights sum to one only to double precision; renormalize so that the
  // fidelity of a state with itself is one to long double precision.
  long double total = 0.0L;
  for (double wj : w) total += wj;
  WideMatrix c(V, S);
  for (Eigen::Index v = 0; v < V; ++v) {
    for (Eigen::Index j = 0; j < S; ++j) {
      const long double pos = static_cast<long double>(x[j]) + rates[j] * theta;
      const long double amp = std::sqrt(static_cast<long double>(w[j]) / total / V);
      c(v, j) = std::polar(amp, static_cast<long double>(scene.scale()) * u[v] * pos);
    }
  }
  return c;
}

// 1 - Tr|C(a)^dagger C(b)| evaluated in extended precision, so the deficit
// keeps its relative accuracy when the two states are close.
long double fidelity_deficit(const Scene& scene, long double theta_a, long double theta_b) {
  const WideMatrix m = wide_transfer(scene, theta_a).adjoint() * wide_transfer(scene, theta_b);
  Eigen::JacobiSVD<WideMatrix> svd(m);
  return 1.0L - svd.singularValues().sum();
}

}  // namespace

double quantum_fidelity(const Scene& scene, double theta, double theta_prime) {
  return overlap_decomp(scene, theta, theta_prime).svd.sigma.sum();
}

double row_norm_fidelity(const CMatrix& a_rot, const CMatrix& b_rot) {
  if (a_rot.rows() != b_rot.rows()) {
    throw Error(ErrorKind::BadShape, "rotated purifications need the same row count");
  }
  double total = 0.0;
  for (Eigen::Index v = 0; v < a_rot.rows(); ++v) {
    total += a_rot.row(v).norm() * b_rot.row(v).norm();
  }
  return total;
}

double classical_fidelity(const PurificationPair& pair, const CMatrix& r) {
  require_unitary(r, "classical_fidelity");
  return row_norm_fidelity(r * pair.a, r * pair.b);
}

double diagonal_fidelity(const CMatrix& a_rot, const CMatrix& b_rot) {
  if (a_rot.rows() != a_rot.cols() || b_rot.rows() != b_rot.cols() ||
      a_rot.rows() != b_rot.rows()) {
    throw Error(ErrorKind::NotSquare, "diagonal_fidelity needs square matrices of one size");
  }
  double total = 0.0;
  for (Eigen::Index v = 0; v < a_rot.rows(); ++v) {
    total += std::abs(a_rot(v, v)) * std::abs(b_rot(v, v));
  }
  return total;
}

SldBundle sld_solve(const CMatrix& rho, const CMatrix& drho, double support_tol) {
  require_hermitian_within(rho, kStateTol, "rho");
  require_hermitian_within(drho, kStateTol, "drho");
  if (rho.rows() != drho.rows()) throw Error(ErrorKind::BadShape, "rho and drho differ in size");
  if (std::abs(rho.trace().real() - 1.0) > kStateTol) {
    throw Error(ErrorKind::InvalidState, "rho does not have unit trace");
  }

  const EighResult eig = eigh_fixed(hermitian_part(rho));
  if (eig.lambda(eig.lambda.size() - 1) < -kStateTol) {
    throw Error(ErrorKind::InvalidState, "rho is not positive semidefinite");
  }

  const CMatrix drho_eig = eig.w.adjoint() * hermitian_part(drho) * eig.w;
  const Eigen::Index n = rho.rows();
  CMatrix l_eig = CMatrix::Zero(n, n);
  double leak = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double denom = eig.lambda(i) + eig.lambda(j);
      if (denom > support_tol) {
        l_eig(i, j) = 2.0 * drho_eig(i, j) / denom;
      } else {
        leak += std::norm(drho_eig(i, j));
      }
    }
  }
  if (std::sqrt(leak) > kLeakTol) {
    throw Error(ErrorKind::SupportLeak, "drho has weight outside the support of rho");
  }

  SldBundle out{rho, drho, hermitian_part(eig.w * l_eig * eig.w.adjoint()), support_tol};
  return out;
}

double sld_residual(const SldBundle& bundle) {
  return (bundle.drho - 0.5 * (bundle.l * bundle.rho + bundle.rho * bundle.l)).norm();
}

double qfi_from_sld(const SldBundle& bundle) {
  return (bundle.rho * bundle.l * bundle.l).trace().real();
}

double qfi(const Scene& scene, double theta) {
  return qfi_from_sld(sld_solve(density(scene, theta), density_derivative(scene, theta)));
}

double qfi_from_fidelity(const Scene& scene, double theta, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::BadConfig, "fidelity stencil needs delta > 0");
  const long double half = 0.5L * delta;
  const long double deficit = fidelity_deficit(scene, theta - half, theta + half);
  return static_cast<double>(8.0L * deficit / (static_cast<long double>(delta) * delta));
}

double cfi(const CMatrix& rho, const CMatrix& drho, const CMatrix& r) {
  require_unitary(r, "cfi");
  require_hermitian_within(rho, kStateTol, "rho");
  require_hermitian_within(drho, kStateTol, "drho");

  const CMatrix p = r * rho * r.adjoint();
  const CMatrix dp = r * drho * r.adjoint();
  double total = 0.0;
  for (Eigen::Index v = 0; v < p.rows(); ++v) {
    const double prob = p(v, v).real();
    const double slope = dp(v, v).real();
    if (prob > kProbabilityFloor) {
      total += slope * slope / prob;
    } else if (std::abs(slope) > kSingularSlope) {
      throw Error(ErrorKind::SingularOutcome, "outcome with vanishing probability has nonzero slope");
    }
  }
  return total;
}

std::pair<CMatrix, CMatrix> state_and_derivative(const Scene& scene, double theta,
                                                 const FisherSettings& settings) {
  CMatrix rho = density(scene, theta);
  if (settings.derivative == DerivativeMode::Analytic) {
    return {rho, density_derivative(scene, theta)};
  }
  const double h = settings.fd_step;
  CMatrix drho = (density(scene, theta + h) - density(scene, theta - h)) / (2.0 * h);
  return {rho, hermitian_part(drho)};
}

FisherReport fisher_report(const Scene& scene, double theta, const FisherSettings& settings) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  FisherReport report;
  report.theta = theta;

  auto attempt = [&report](const char* field, double& slot, auto&& fn) {
    try {
      slot = fn();
    } catch (const Error& e) {
      slot = nan;
      report.status.push_back(std::string(field) + ":" + std::string(to_string(e.kind())));
    }
  };

  const auto [rho, drho] = state_and_derivative(scene, theta, settings);

  attempt("qfi", report.qfi, [&] {
    const SldBundle bundle = sld_solve(rho, drho, settings.support_tol);
    report.residuals.sld_residual = sld_residual(bundle);
    return qfi_from_sld(bundle);
  });
  attempt("qfi_fid", report.qfi_fid,
          [&] { return qfi_from_fidelity(scene, theta, settings.fidelity_delta); });

  std::optional<PurificationPair> pair;
  attempt("f_quantum", report.f_quantum, [&] {
    pair = purification_pair(scene, theta, theta + settings.delta);
    report.residuals.gram_offdiag = local_consistency(*pair, settings.rtol).gram_offdiag;
    return pair->d.sum();
  });

  std::optional<InterferometerPlan> opt;
  attempt("cfi_opt", report.cfi_opt, [&] {
    opt = build_sld(rho, drho, settings.support_tol);
    return cfi(rho, drho, opt->r);
  });

  std::optional<InterferometerPlan> qr;
  attempt("cfi_qr", report.cfi_qr, [&] {
    if (!pair) throw Error(ErrorKind::InvalidState, "no purification pair");
    qr = build_qr(*pair);
    report.residuals.qr_lower_triangularity = qr->diagnostics.lower_triangularity;
    report.residuals.qr_plan_residual = plan_residual(*qr, *pair);
    return cfi(rho, drho, qr->r);
  });

  attempt("f_classical_opt", report.f_classical_opt, [&] {
    if (!pair || !opt) throw Error(ErrorKind::InvalidState, "missing pair or plan");
    return classical_fidelity(*pair, opt->r);
  });
  attempt("f_classical_qr", report.f_classical_qr, [&] {
    if (!pair || !qr) throw Error(ErrorKind::InvalidState, "missing pair or plan");
    return classical_fidelity(*pair, qr->r);
  });

  // NaN comparisons are false, so failed fields do not trip these.
  if (report.cfi_opt > report.qfi + kFisherOrderTol || report.cfi_qr > report.qfi + kFisherOrderTol) {
    report.status.push_back("cfi:InvariantBroken");
  }
  if (report.f_classical_opt < report.f_quantum - kFidelityOrderTol ||
      report.f_classical_qr < report.f_quantum - kFidelityOrderTol) {
    report.status.push_back("f_classical:InvariantBroken");
  }
  return report;
}

}  // namespace qlim
