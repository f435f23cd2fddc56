#include "qlim/matdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qlim/error.hpp"

namespace qlim {

namespace {

constexpr double kHermitianRtol = 1e-10;
constexpr double kPsdRtol = 1e-10;
// Relative slack under which two magnitudes count as tied for the phase rule.
constexpr double kTieRtol = 1e-12;

void require_finite(const CMatrix& a, const char* where) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw Error(ErrorKind::BadShape, std::string(where) + ": empty matrix");
  }
  if (!all_finite(a)) {
    throw Error(ErrorKind::NonFinite, std::string(where) + ": input has NaN or Inf");
  }
}

void require_hermitian(const CMatrix& h, const char* where) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorKind::NotSquare, std::string(where) + ": matrix is not square");
  }
  const double scale = std::max(1.0, h.norm());
  if (hermiticity_defect(h) > kHermitianRtol * scale) {
    throw Error(ErrorKind::NotHermitian, std::string(where) + ": matrix is not Hermitian");
  }
}

}  // namespace

double default_rtol(const CMatrix& a) noexcept {
  return static_cast<double>(std::max(a.rows(), a.cols())) *
         std::numeric_limits<double>::epsilon();
}

bool all_finite(const CMatrix& a) noexcept {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

double hermiticity_defect(const CMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).norm();
}

double unitarity_defect(const CMatrix& r) {
  if (r.rows() != r.cols()) return std::numeric_limits<double>::infinity();
  return (r.adjoint() * r - CMatrix::Identity(r.rows(), r.cols())).norm();
}

CMatrix hermitian_part(const CMatrix& h) {
  CMatrix out = 0.5 * (h + h.adjoint());
  return out;
}

Eigen::Index dominant_row(const CMatrix& w, Eigen::Index col) noexcept {
  Eigen::Index best = 0;
  double best_mag = std::abs(w(0, col));
  for (Eigen::Index i = 1; i < w.rows(); ++i) {
    const double mag = std::abs(w(i, col));
    if (mag > best_mag * (1.0 + kTieRtol) && mag > best_mag) {
      best = i;
      best_mag = mag;
    }
  }
  return best;
}

void fix_column_phases(CMatrix& w, CMatrix* partner) {
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const Eigen::Index i = dominant_row(w, j);
    const Complex pivot = w(i, j);
    const double mag = std::abs(pivot);
    if (mag == 0.0) continue;
    const Complex phase = std::conj(pivot) / mag;
    w.col(j) *= phase;
    w(i, j) = Complex(mag, 0.0);
    if (partner != nullptr) partner->col(j) *= phase;
  }
}

QrResult qr_positive(const CMatrix& a) {
  require_finite(a, "qr_positive");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (m < n) {
    throw Error(ErrorKind::BadShape, "qr_positive: requires rows >= cols");
  }

  Eigen::HouseholderQR<CMatrix> qr(a);
  QrResult out;
  out.q = qr.householderQ() * CMatrix::Identity(m, m);
  out.t = qr.matrixQR().triangularView<Eigen::Upper>();

  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex diag = out.t(i, i);
    const double mag = std::abs(diag);
    if (mag == 0.0) continue;
    const Complex phase = diag / mag;
    out.q.col(i) *= phase;
    out.t.row(i) *= std::conj(phase);
    out.t(i, i) = Complex(mag, 0.0);
  }
  return out;
}

SvdResult svd_fixed(const CMatrix& m) {
  require_finite(m, "svd_fixed");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  fix_column_phases(out.u, &out.v);
  return out;
}

EighResult eigh_fixed(const CMatrix& h) {
  require_finite(h, "eigh_fixed");
  require_hermitian(h, "eigh_fixed");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NonFinite, "eigh_fixed: eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  EighResult out{CMatrix(n, n), RVector(n)};
  // Eigen returns ascending eigenvalues.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.lambda(k) = es.eigenvalues()(n - 1 - k);
    out.w.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  fix_column_phases(out.w);
  return out;
}

CMatrix pinv(const CMatrix& a, std::optional<double> rtol) {
  require_finite(a, "pinv");
  const double tol_rel = rtol.value_or(default_rtol(a));
  if (!(tol_rel > 0.0)) {
    throw Error(ErrorKind::BadConfig, "pinv: rtol must be positive");
  }
  const SvdResult svd = svd_fixed(a);
  const double cutoff = tol_rel * svd.sigma(0);

  CMatrix out = CMatrix::Zero(a.cols(), a.rows());
  for (Eigen::Index k = 0; k < svd.sigma.size(); ++k) {
    if (svd.sigma(k) <= cutoff || svd.sigma(k) == 0.0) break;
    out += (svd.v.col(k) / svd.sigma(k)) * svd.u.col(k).adjoint();
  }
  return out;
}

CMatrix sqrtm_psd(const CMatrix& h) {
  const EighResult eig = eigh_fixed(h);
  const double lam_max = eig.lambda(0);
  const double lam_min = eig.lambda(eig.lambda.size() - 1);
  if (lam_min < -kPsdRtol * std::max(1.0, lam_max)) {
    throw Error(ErrorKind::NotPSD, "sqrtm_psd: matrix has a negative eigenvalue");
  }
  RVector roots = eig.lambda.cwiseMax(0.0).cwiseSqrt();
  CMatrix out = eig.w * roots.asDiagonal() * eig.w.adjoint();
  return hermitian_part(out);
}

}  // namespace qlim
