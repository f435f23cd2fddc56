#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "qlim/cli.hpp"
#include "qlim/corpus.hpp"
#include "qlim/error.hpp"
#include "qlim/fisher.hpp"
#include "qlim/interferometer.hpp"
#include "qlim/oracle.hpp"
#include "qlim/purify.hpp"

namespace qlim {

namespace {

// Each check reports a nonnegative violation measure that must stay at or
// below its tolerance. A thrown Error counts as a failure.
class Ledger {
 public:
  explicit Ledger(std::optional<double> strict) : strict_(strict) {}

  void record(const std::string& name, double tolerance, double measure) {
    InvariantTally& t = slot(name, tolerance);
    ++t.checked;
    if (!(measure <= t.tolerance)) ++t.failed;
    if (std::isnan(measure) || measure > t.worst) t.worst = measure;
  }

  template <typename Fn>
  void check(const std::string& name, double tolerance, Fn&& fn) {
    try {
      record(name, tolerance, fn());
    } catch (const Error&) {
      InvariantTally& t = slot(name, tolerance);
      ++t.checked;
      ++t.failed;
    }
  }

  std::vector<InvariantTally> tallies() const {
    std::vector<InvariantTally> out;
    for (const auto& name : order_) out.push_back(tallies_.at(name));
    return out;
  }

 private:
  InvariantTally& slot(const std::string& name, double tolerance) {
    auto it = tallies_.find(name);
    if (it == tallies_.end()) {
      order_.push_back(name);
      it = tallies_.emplace(name, InvariantTally{name, strict_.value_or(tolerance), 0, 0, 0.0}).first;
    }
    return it->second;
  }

  std::optional<double> strict_;
  std::vector<std::string> order_;
  std::map<std::string, InvariantTally> tallies_;
};

double relative(double err, double scale) { return err / std::max(1.0, scale); }

double phase_defect(const CMatrix& w) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const Complex z = w(dominant_row(w, j), j);
    worst = std::max({worst, std::abs(z.imag()), -z.real()});
  }
  return worst;
}

void check_matdecomp(Ledger& ledger, Rng& rng) {
  const int m = rng.uniform_int(1, 6);
  const int n = rng.uniform_int(1, m);
  const CMatrix a = random_complex(rng, m, n);
  const CMatrix sq = random_complex(rng, m, m);
  const CMatrix h = hermitian_part(sq);

  ledger.check("qr_reconstruction", 1e-11, [&] {
    const QrResult qr = qr_positive(a);
    return relative((a - qr.q * qr.t).norm(), a.norm());
  });
  ledger.check("svd_reconstruction", 1e-11, [&] {
    const SvdResult s = svd_fixed(a);
    return relative((a - s.u * s.sigma.cast<Complex>().asDiagonal() * s.v.adjoint()).norm(),
                    a.norm());
  });
  ledger.check("eigh_reconstruction", 1e-11, [&] {
    const EighResult e = eigh_fixed(h);
    return relative((h - e.w * e.lambda.cast<Complex>().asDiagonal() * e.w.adjoint()).norm(),
                    h.norm());
  });
  ledger.check("phase_convention", 1e-12, [&] {
    return std::max(phase_defect(svd_fixed(a).u), phase_defect(eigh_fixed(h).w));
  });
  ledger.check("pinv_involution", 1e-9, [&] {
    return relative((pinv(pinv(sq)) - sq).norm(), sq.norm());
  });
  ledger.check("pinv_penrose", 1e-10, [&] {
    const CMatrix ap = pinv(a);
    const double scale = std::max(1.0, a.norm() * ap.norm());
    return std::max({(a * ap * a - a).norm() / std::max(1.0, a.norm()),
                     (ap * a * ap - ap).norm() / std::max(1.0, ap.norm()),
                     hermiticity_defect(a * ap) / scale, hermiticity_defect(ap * a) / scale});
  });
}

void check_scene(Ledger& ledger, const Scene& scene, double theta) {
  ledger.check("density_state", 1e-12, [&] {
    const CMatrix rho = density(scene, theta);
    const EighResult e = eigh_fixed(rho);
    return std::max({std::abs(rho.trace().real() - 1.0), hermiticity_defect(rho),
                     -e.lambda(e.lambda.size() - 1)});
  });
  ledger.check("density_derivative_traceless", 1e-10, [&] {
    const CMatrix d = density_derivative(scene, theta);
    return std::max(std::abs(d.trace()), hermiticity_defect(d));
  });
  ledger.check("transfer_derivative_fd", 1e-8, [&] {
    constexpr double h = 1e-6;
    const CMatrix fd =
        (transfer_matrix(scene, theta + h).c - transfer_matrix(scene, theta - h).c) / (2 * h);
    return (fd - transfer_derivative(scene, theta)).cwiseAbs().maxCoeff();
  });
}

void check_purification(Ledger& ledger, const Scene& scene, double theta, double theta_prime) {
  ledger.check("purification_density", 1e-11, [&] {
    const PurificationPair pair = purification_pair(scene, theta, theta_prime);
    return std::max((pair.a * pair.a.adjoint() - density(scene, theta)).norm(),
                    (pair.b * pair.b.adjoint() - density(scene, theta_prime)).norm());
  });
  ledger.check("purification_gauge", 1e-10, [&] {
    return gauge_residual(purification_pair(scene, theta, theta_prime));
  });
  ledger.check("fidelity_nuclear_norm", 1e-11, [&] {
    const OverlapDecomp dec = overlap_decomp(scene, theta, theta_prime);
    const Eigen::BDCSVD<CMatrix> other(dec.m);
    return std::abs(dec.svd.sigma.sum() - other.singularValues().sum());
  });
  ledger.check("fidelity_bound", 1e-10, [&] {
    const double f = quantum_fidelity(scene, theta, theta_prime);
    return std::max(0.0, std::max(f - 1.0, -f));
  });
  ledger.check("uhlmann_cross_check", 1e-9, [&] {
    return std::abs(uhlmann_fidelity(density(scene, theta), density(scene, theta_prime)) -
                    quantum_fidelity(scene, theta, theta_prime));
  });
  ledger.check("uhlmann_symmetry", 1e-10, [&] {
    const CMatrix r1 = density(scene, theta);
    const CMatrix r2 = density(scene, theta_prime);
    return std::abs(uhlmann_fidelity(r1, r2) - uhlmann_fidelity(r2, r1));
  });
}

void check_finite_shift(Ledger& ledger, const Scene& scene, double theta) {
  constexpr double delta = 1e-5;
  const PurificationPair pair = purification_pair(scene, theta, theta + delta);
  std::optional<InterferometerPlan> plan;
  try {
    plan = build_finite_shift(pair, std::nullopt, delta);
  } catch (const Error&) {
    ledger.record("finite_shift_identity", 1e-7, std::numeric_limits<double>::infinity());
    return;
  }
  const CMatrix lambda = plan->lambda->cast<Complex>().asDiagonal();
  ledger.record("finite_shift_identity", 1e-7,
                (plan->r * pair.b - lambda * plan->r * pair.a).norm());
  ledger.record("finite_shift_p_hermitian", 1e-9, plan->diagnostics.p_asymmetry);
  ledger.record("finite_shift_p_psd", 1e-10, std::max(0.0, -plan->diagnostics.min_eigenvalue));
  ledger.record("finite_shift_forms", 1e-8, plan->diagnostics.p_form_agreement);
  ledger.record("plan_unitarity", 1e-10, unitarity_defect(plan->r));
  ledger.check("finite_shift_saturation", 1e-8, [&] {
    return std::abs(classical_fidelity(pair, plan->r) - pair.d.sum());
  });
}

void check_fisher(Ledger& ledger, const Scene& scene, double theta, std::uint64_t seed) {
  const CMatrix rho = density(scene, theta);
  const CMatrix drho = density_derivative(scene, theta);
  double q = std::numeric_limits<double>::quiet_NaN();

  ledger.check("sld_residual", 1e-8, [&] {
    const SldBundle b = sld_solve(rho, drho);
    q = qfi_from_sld(b);
    return relative(sld_residual(b), drho.norm());
  });
  ledger.check("cfi_le_qfi", 1e-8, [&] {
    const CMatrix r = haar_unitary(rho.rows(), seed);
    return std::max(0.0, cfi(rho, drho, r) - q);
  });
  ledger.check("sld_plan_saturates", 1e-6, [&] {
    const InterferometerPlan plan = build_sld(rho, drho);
    return std::max(unitarity_defect(plan.r) > 1e-10 ? 1.0 : 0.0,
                    std::abs(q - cfi(rho, drho, plan.r)) / std::max(1.0, q));
  });
  ledger.check("plan_unitarity", 1e-10, [&] {
    const PurificationPair pair = purification_pair(scene, theta, theta + kDefaultShift);
    const double sld_defect = unitarity_defect(build_sld(rho, drho).r);
    // The QR plan is only defined for rows >= cols.
    if (pair.a.rows() < pair.a.cols()) return sld_defect;
    return std::max(unitarity_defect(build_qr(pair).r), sld_defect);
  });
  ledger.check("classical_ge_quantum", 1e-10, [&] {
    const PurificationPair pair = purification_pair(scene, theta, theta + 1e-3);
    const CMatrix r = haar_unitary(pair.a.rows(), seed ^ 0x5bd1e995ULL);
    return std::max(0.0, pair.d.sum() - classical_fidelity(pair, r));
  });
  ledger.check("sld_fidelity_gap", 1e-8, [&] {
    const PurificationPair pair = purification_pair(scene, theta, theta + kDefaultShift);
    return std::abs(classical_fidelity(pair, build_sld(rho, drho).r) - pair.d.sum());
  });
  if (q > 1e-3 && condition_number(transfer_matrix(scene, theta).c) <= kQfiComparableCondition) {
    ledger.check("qfi_vs_fidelity", 1e-4, [&] {
      return std::abs(qfi_from_fidelity(scene, theta, 1e-4) - q) / q;
    });
  }
}

void check_triangular(Ledger& ledger, Rng& rng) {
  const int n = rng.uniform_int(1, 6);
  CMatrix t = random_complex(rng, n, n).triangularView<Eigen::Upper>();
  double worst = 0.0;
  for (Eigen::Index v = 0; v < n; ++v) {
    worst = std::max(worst, std::abs(t(v, v)) - t.row(v).norm());
  }
  ledger.record("row_norm_dominates_diagonal", 1e-14, std::max(0.0, worst));
  const CMatrix lower = random_complex(rng, n, n).triangularView<Eigen::Lower>();
  ledger.record("eq1_dominates_eq2", 1e-14,
                std::max(0.0, diagonal_fidelity(t, lower) - row_norm_fidelity(t, lower)));
}

}  // namespace

std::vector<InvariantTally> run_selfcheck(const SelfcheckOptions& options) {
  Ledger ledger(options.strict);
  Rng rng(options.seed);
  for (int k = 0; k < options.cases; ++k) {
    check_matdecomp(ledger, rng);
    check_triangular(ledger, rng);

    const CorpusCase any = random_case(rng);
    const double shift = rng.uniform(1e-3, 0.5);
    check_scene(ledger, any.scene, any.theta);
    check_purification(ledger, any.scene, any.theta, any.theta + shift);
    check_fisher(ledger, any.scene, any.theta, mix_seed(options.seed, static_cast<std::uint64_t>(k)));

    const CorpusCase full = random_case(rng, kResolvedCorpus);
    check_finite_shift(ledger, full.scene, full.theta);
  }
  return ledger.tallies();
}

int cmd_selfcheck(const SelfcheckOptions& options, std::ostream& out) {
  const std::vector<InvariantTally> tallies = run_selfcheck(options);
  int failed = 0;
  for (const InvariantTally& t : tallies) {
    char line[160];
    std::snprintf(line, sizeof line, "%-30s %s  checked %4d  failed %4d  worst %.3e  tol %.1e\n",
                  t.name.c_str(), t.failed == 0 ? "PASS" : "FAIL", t.checked, t.failed, t.worst,
                  t.tolerance);
    out << line;
    failed += t.failed;
  }
  out << "seed " << options.seed << ", " << options.cases << " cases, "
      << (failed == 0 ? "all invariants hold" : std::to_string(failed) + " failures") << '\n';
  return failed == 0 ? kExitOk : kExitInvariant;
}

}  // namespace qlim
