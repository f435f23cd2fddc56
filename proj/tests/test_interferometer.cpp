#include <doctest.h>

#include <numbers>

#include "qlim/corpus.hpp"
#include "qlim/error.hpp"
#include "qlim/fisher.hpp"
#include "qlim/interferometer.hpp"
#include "qlim/purify.hpp"
#include "qlim/rng.hpp"
#include "qlim/scene.hpp"
#include "test_support.hpp"

using namespace qlim;
using namespace qlim::testing;
using std::numbers::pi;

namespace {

double unitarity(const CMatrix& r) {
  return (r.adjoint() * r - CMatrix::Identity(r.cols(), r.cols())).norm();
}

// Pair whose columns are orthogonal, so A^dagger B is diagonal for B = k A.
PurificationPair scaled_pair(Eigen::Index rows, Eigen::Index cols, double k, std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix basis = qr_positive(random_complex(rng, rows, rows)).q;
  CMatrix a = basis.leftCols(cols);
  for (Eigen::Index j = 0; j < cols; ++j) a.col(j) *= 0.3 + 0.2 * static_cast<double>(j);
  PurificationPair pair;
  pair.a = a;
  pair.b = k * a;
  pair.d = (a.adjoint() * pair.b).diagonal().real();
  return pair;
}

double rotated_defect(const InterferometerPlan& plan, const PurificationPair& pair) {
  const CMatrix lam = plan.lambda->cast<Complex>().asDiagonal();
  return (plan.r * pair.b - lam * plan.r * pair.a).norm();
}

}  // namespace

TEST_CASE("build_qr: already factored input gives R = I") {
  PurificationPair pair;
  pair.a = CMatrix::Identity(3, 3);
  pair.b = pair.a;
  pair.d = RVector::Ones(3);
  CHECK(max_abs_diff(build_qr(pair).r, CMatrix::Identity(3, 3)) <= 1e-15);

  pair.a = mat2(2.0, 1.0 + I, 0.0, 0.5);
  pair.b = mat2(1.0, 0.0, 0.3, 1.0);
  const InterferometerPlan plan = build_qr(pair);
  CHECK(max_abs_diff(plan.r, CMatrix::Identity(2, 2)) <= 1e-15);
  CHECK(plan.diagnostics.lower_triangularity == 0.0);
  CHECK(plan.method == PlanMethod::QrBased);
  CHECK_FALSE(plan.lambda.has_value());
}

TEST_CASE("build_qr: R A upper triangular, diagnostic on R B") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const CorpusCase k = random_case(rng);
    const PurificationPair pair = purification_pair(k.scene, k.theta, k.theta + 1e-3);
    if (pair.a.rows() < pair.a.cols()) continue;
    const InterferometerPlan plan = build_qr(pair);
    CHECK(unitarity(plan.r) <= 1e-10);
    const CMatrix ra = plan.r * pair.a;
    for (Eigen::Index j = 0; j < ra.cols(); ++j) {
      for (Eigen::Index i = j + 1; i < ra.rows(); ++i) CHECK(std::abs(ra(i, j)) <= 1e-12);
      if (j < ra.rows()) CHECK(ra(j, j).real() >= 0.0);
    }
  }
}

TEST_CASE("build_qr: symmetric scene keeps R B lower triangular") {
  const Scene s = symmetric_scene();
  for (double ts : {0.5, 1.5, 2.0, 2.7}) {
    const PurificationPair pair = purification_pair(s, ts, ts + 1e-3);
    const InterferometerPlan plan = build_qr(pair);
    CHECK(plan.diagnostics.lower_triangularity <= 1e-8);
    CHECK(plan_residual(plan, pair) <= 1e-8);
  }
}

TEST_CASE("build_qr: wide A is a shape error") {
  PurificationPair pair;
  pair.a = CMatrix::Ones(2, 3);
  pair.b = pair.a;
  pair.d = RVector::Zero(3);
  CHECK_THROWS_AS(build_qr(pair), Error);
}

TEST_CASE("build_finite_shift: proportional pair B = 2A") {
  const PurificationPair pair = scaled_pair(3, 3, 2.0, 5);
  const InterferometerPlan plan = build_finite_shift(pair);
  CHECK(plan.method == PlanMethod::FiniteShift);
  REQUIRE(plan.lambda.has_value());
  for (Eigen::Index i = 0; i < 3; ++i) CHECK((*plan.lambda)(i) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rotated_defect(plan, pair) <= 1e-12);
  CHECK(plan_residual(plan, pair) <= 1e-12);
  CHECK(unitarity(plan.r) <= 1e-10);
}

TEST_CASE("build_finite_shift: B = A gives a projector") {
  const PurificationPair pair = scaled_pair(4, 2, 1.0, 9);
  const InterferometerPlan plan = build_finite_shift(pair);
  REQUIRE(plan.p.has_value());
  CHECK(max_abs_diff(*plan.p * *plan.p, *plan.p) <= 1e-12);
  const RVector lam = *plan.lambda;
  CHECK(lam(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lam(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(lam(2)) <= 1e-12);
  CHECK(std::abs(lam(3)) <= 1e-12);
  CHECK(plan_residual(plan, pair) <= 1e-12);
}

TEST_CASE("build_finite_shift: two-source identity RB = Lambda RA") {
  const Scene s = fig1_scene();
  const InterferometerPlan plan = build_finite_shift(s, 2.0, 1e-5);
  const PurificationPair pair = purification_pair(s, 2.0, 2.0 + 1e-5);
  CHECK(rotated_defect(plan, pair) <= 1e-8);
  CHECK(plan.diagnostics.p_form_agreement <= 1e-8);
  CHECK(plan.diagnostics.min_eigenvalue >= -1e-10);
  CHECK(hermiticity_defect(*plan.p) <= 1e-9);
  CHECK(*plan.delta == 1e-5);
}

TEST_CASE("build_finite_shift: errors") {
  // Three collectors and two sources: the supports of rho(theta) and
  // rho(theta + delta) are different planes.
  const Scene s = build_scene({{0.0, 0.2}, {0.5, 0.5}, {-1.0, 0.0, 1.0}, 1.0, {}});
  try {
    build_finite_shift(s, 0.7, 1e-3);
    FAIL("expected SupportMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportMismatch);
  }
  try {
    build_finite_shift(fig1_scene(), 1.0, 0.0);
    FAIL("expected BadConfig");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadConfig);
  }
  // Non-Hermitian B A+.
  PurificationPair pair;
  pair.a = CMatrix::Identity(2, 2);
  pair.b = mat2(1.0, 1.0, 0.0, 1.0);
  pair.d = RVector::Ones(2);
  try {
    build_finite_shift(pair);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("build_finite_shift: corpus identities") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const CorpusCase k = random_case(rng, kResolvedCorpus);
    const InterferometerPlan plan = build_finite_shift(k.scene, k.theta, 1e-5);
    const PurificationPair pair = purification_pair(k.scene, k.theta, k.theta + 1e-5);
    CHECK(rotated_defect(plan, pair) <= 1e-7);
    CHECK(plan.diagnostics.min_eigenvalue >= -1e-10);
    CHECK(plan.lambda->minCoeff() >= 0.0);
    CHECK(unitarity(plan.r) <= 1e-10);
  }
}

TEST_CASE("build_sld: injected diagonal state") {
  CMatrix rho = CMatrix::Identity(2, 2) / 2.0;
  CMatrix drho = mat2(0.1, 0.0, 0.0, -0.1);
  const InterferometerPlan plan = build_sld(rho, drho);
  CHECK(max_abs_diff(plan.r, CMatrix::Identity(2, 2)) <= 1e-15);
  CHECK(max_abs_diff(*plan.sld, mat2(0.2, 0.0, 0.0, -0.2)) <= 1e-15);
}

TEST_CASE("build_sld: the two-source scene at pi") {
  const InterferometerPlan plan = build_sld(fig1_scene(), pi);
  // rho = I/2 and d rho = [[0, i/4], [-i/4, 0]], so L = 2 d rho.
  CHECK(max_abs_diff(*plan.sld, mat2(0.0, 0.5 * I, -0.5 * I, 0.0)) <= 1e-14);
  CHECK((*plan.lambda)(0) == doctest::Approx(0.5));
  CHECK((*plan.lambda)(1) == doctest::Approx(-0.5));
  const CMatrix lam = plan.lambda->cast<Complex>().asDiagonal();
  CHECK(max_abs_diff(plan.r.adjoint() * lam * plan.r, *plan.sld) <= 1e-14);
  CHECK(unitarity(plan.r) <= 1e-10);
}

TEST_CASE("build_sld: unitary on the corpus") {
  Rng rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const CorpusCase k = random_case(rng, kResolvedCorpus);
    const InterferometerPlan plan = build_sld(k.scene, k.theta);
    CHECK(unitarity(plan.r) <= 1e-10);
    CHECK(plan.diagnostics.sld_residual <= 1e-9);
  }
}

TEST_CASE("plan_residual: B = A is saturated by any plan") {
  const PurificationPair pair = scaled_pair(3, 3, 1.0, 13);
  Rng rng(3);
  InterferometerPlan plan;
  plan.r = qr_positive(random_complex(rng, 3, 3)).q;
  CHECK(plan_residual(plan, pair) <= 1e-12);
  plan.method = PlanMethod::FiniteShift;
  plan.lambda = RVector::Ones(3);
  CHECK(plan_residual(plan, pair) <= 1e-12);
}

TEST_CASE("plan_residual: QR plan on the asymmetric scene") {
  const Scene s = fig1_scene();
  auto qr_residual = [&](double delta) {
    const PurificationPair pair = purification_pair(s, 2.0, 2.0 + delta);
    return plan_residual(build_qr(pair), pair);
  };
  const double r2 = qr_residual(1e-2);
  const double r3 = qr_residual(1e-3);
  const double r4 = qr_residual(1e-4);
  CHECK(r2 > 1e-3);
  CHECK(r3 > 1e-5);
  // The defect is first order in the shift.
  CHECK(r3 / r4 == doctest::Approx(10.0).epsilon(0.05));

  const PurificationPair pair = purification_pair(s, 2.0, 2.0 + 1e-5);
  CHECK(plan_residual(build_finite_shift(pair), pair) <= 1e-8);
}

TEST_CASE("finite-shift CFI approaches the SLD CFI") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const CorpusCase k = random_case(rng, kResolvedCorpus);
    const CMatrix rho = density(k.scene, k.theta);
    const CMatrix drho = density_derivative(k.scene, k.theta);
    const double target = cfi(rho, drho, build_sld(rho, drho).r);
    double previous = 1e300;
    for (double delta : {1e-3, 1e-4, 1e-5}) {
      const double gap = std::abs(cfi(rho, drho, build_finite_shift(k.scene, k.theta, delta).r) - target);
      CHECK(gap <= previous + 1e-9);
      previous = gap;
    }
    CHECK(previous <= 1e-6);
  }
}
