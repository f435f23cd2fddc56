#include "qlim/purify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlim/error.hpp"

namespace qlim {

namespace {

constexpr double kGaugeTol = 1e-9;

// Orthonormal basis of the column space, rank decided at rtol * sigma_max.
CMatrix column_basis(const CMatrix& a, double rtol) {
  const SvdResult svd = svd_fixed(a);
  const double cutoff = rtol * svd.sigma(0);
  Eigen::Index rank = 0;
  while (rank < svd.sigma.size() && svd.sigma(rank) > cutoff && svd.sigma(rank) > 0.0) ++rank;
  return svd.u.leftCols(rank);
}

double max_offdiag(const CMatrix& g) {
  double out = 0.0;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      if (i != j) out = std::max(out, std::abs(g(i, j)));
    }
  }
  return out;
}

}  // namespace

OverlapDecomp overlap_decomp(const Scene& scene, double theta, double theta_prime) {
  const CMatrix c = transfer_matrix(scene, theta).c;
  const CMatrix c_prime = transfer_matrix(scene, theta_prime).c;
  OverlapDecomp out;
  out.theta = theta;
  out.theta_prime = theta_prime;
  out.m = c.adjoint() * c_prime;
  out.svd = svd_fixed(out.m);
  return out;
}

double gauge_residual(const PurificationPair& pair) {
  CMatrix diff = pair.a.adjoint() * pair.b;
  diff.diagonal() -= pair.d.cast<Complex>();
  return diff.norm();
}

PurificationPair purifications(const OverlapDecomp& decomp, const Scene& scene) {
  PurificationPair pair;
  pair.a = transfer_matrix(scene, decomp.theta).c * decomp.svd.u;
  pair.b = transfer_matrix(scene, decomp.theta_prime).c * decomp.svd.v;
  pair.d = decomp.svd.sigma;
  if (gauge_residual(pair) > kGaugeTol) {
    throw Error(ErrorKind::GaugeResidual, "A^dagger B is not diag(d)");
  }
  return pair;
}

PurificationPair purification_pair(const Scene& scene, double theta, double theta_prime) {
  return purifications(overlap_decomp(scene, theta, theta_prime), scene);
}

ConsistencyReport local_consistency(const PurificationPair& pair, std::optional<double> rtol) {
  ConsistencyReport report;
  report.gram_offdiag =
      std::max(max_offdiag(pair.a.adjoint() * pair.a), max_offdiag(pair.b.adjoint() * pair.b));

  const double tol = rtol.value_or(std::max(default_rtol(pair.a), default_rtol(pair.b)));
  const CMatrix qa = column_basis(pair.a, tol);
  const CMatrix qb = column_basis(pair.b, tol);
  if (qa.cols() == 0 || qb.cols() == 0) {
    report.consistent = qa.cols() == qb.cols();
    return report;
  }

  // Sines of the principal angles are the singular values of the part of the
  // smaller basis lying outside the larger span. This stays accurate for
  // small angles where acos of the cosines would not.
  const CMatrix& small = qa.cols() <= qb.cols() ? qa : qb;
  const CMatrix& large = qa.cols() <= qb.cols() ? qb : qa;
  const CMatrix outside = small - large * (large.adjoint() * small);
  Eigen::JacobiSVD<CMatrix> svd(outside);
  const RVector sines = svd.singularValues();
  for (Eigen::Index k = sines.size() - 1; k >= 0; --k) {
    report.principal_angles.push_back(std::asin(std::min(1.0, sines(k))));
  }
  // A rank difference leaves directions with no partner at all.
  for (Eigen::Index k = small.cols(); k < large.cols(); ++k) {
    report.principal_angles.push_back(std::numbers::pi / 2.0);
  }

  const double largest = report.principal_angles.empty() ? 0.0 : report.principal_angles.back();
  report.consistent = qa.cols() == qb.cols() && largest <= kConsistencyAngle;
  return report;
}

}  // namespace qlim
