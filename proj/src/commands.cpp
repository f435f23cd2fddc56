#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "qlim/cli.hpp"
#include "qlim/error.hpp"
#include "qlim/scene_io.hpp"

namespace qlim {

namespace {

constexpr double kCleanFraction = 0.9;

std::string fmt(double x, const char* spec = "%.6e") {
  if (std::isnan(x)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

SceneConfig fig1_defaults() { return fig1_scene().config(); }

}  // namespace

SceneConfig resolve_scene_config(const std::optional<std::filesystem::path>& config) {
  if (!config) return fig1_defaults();
  return load_scene_config(*config, fig1_defaults());
}

int cmd_fig1(const Fig1Options& options, std::ostream& log, std::ostream& err) {
  std::optional<Scene> scene;
  try {
    scene = build_scene(resolve_scene_config(options.config));
  } catch (const Error& e) {
    err << "fig1: " << e.what() << '\n';
    return kExitUsage;
  }
  if (options.grid.points < 1) {
    err << "fig1: --points must be >= 1\n";
    return kExitUsage;
  }

  const std::vector<ScanRow> rows = scan(*scene, options.grid, options.settings);

  std::ofstream csv(options.out, std::ios::binary);
  if (!csv) {
    err << "fig1: cannot write " << options.out.string() << '\n';
    return kExitUsage;
  }
  write_csv(csv, rows);
  csv.close();
  if (!csv) {
    err << "fig1: write to " << options.out.string() << " failed\n";
    return kExitUsage;
  }

  if (options.svg) {
    std::ofstream svg(*options.svg, std::ios::binary);
    if (!svg) {
      err << "fig1: cannot write " << options.svg->string() << '\n';
      return kExitUsage;
    }
    write_svg(svg, rows);
  }

  std::size_t clean = 0;
  double worst_opt_gap = 0.0;
  double largest_qr_gap = 0.0;
  for (const ScanRow& r : rows) {
    if (r.status.empty()) ++clean;
    if (std::isfinite(r.qfi) && std::isfinite(r.cfi_opt)) {
      worst_opt_gap = std::max(worst_opt_gap, (r.qfi - r.cfi_opt) / std::max(1.0, r.qfi));
    }
    if (std::isfinite(r.qfi) && std::isfinite(r.cfi_qr) && r.qfi > 0.0) {
      largest_qr_gap = std::max(largest_qr_gap, (r.qfi - r.cfi_qr) / r.qfi);
    }
  }
  log << "rows: " << rows.size() << " (clean " << clean << ")\n"
      << "max (qfi - cfi_opt) / max(1, qfi): " << fmt(worst_opt_gap) << '\n'
      << "max (qfi - cfi_qr) / qfi: " << fmt(largest_qr_gap) << '\n'
      << "csv: " << options.out.string() << '\n';

  const bool enough_clean =
      static_cast<double>(clean) >= kCleanFraction * static_cast<double>(rows.size());
  return enough_clean ? kExitOk : kExitInvariant;
}

std::vector<CounterexampleRow> counterexample_rows(const Scene& asymmetric,
                                                   const CounterexampleOptions& options) {
  FisherSettings settings;
  settings.delta = options.delta;
  settings.rtol = options.rtol;

  std::vector<CounterexampleRow> rows;
  const std::pair<const char*, Scene> variants[] = {
      {"symmetric", symmetric_scene(asymmetric.scale())}, {"asymmetric", asymmetric}};
  for (const auto& [name, scene] : variants) {
    const FisherReport rep = fisher_report(scene, options.theta_scaled / scene.scale(), settings);
    CounterexampleRow row;
    row.variant = name;
    row.gram_offdiag = rep.residuals.gram_offdiag;
    row.qr_lower_triangularity = rep.residuals.qr_lower_triangularity;
    row.qr_plan_residual = rep.residuals.qr_plan_residual;
    row.fc_qr_minus_f = rep.f_classical_qr - rep.f_quantum;
    row.qfi = rep.qfi;
    row.cfi_qr = rep.cfi_qr;
    row.qfi_minus_cfi_qr = rep.qfi - rep.cfi_qr;
    row.status = rep.status;
    rows.push_back(row);
  }
  return rows;
}

int cmd_counterexample(const CounterexampleOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<Scene> scene;
  try {
    scene = build_scene(resolve_scene_config(options.config));
  } catch (const Error& e) {
    err << "counterexample: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<CounterexampleRow> rows;
  try {
    rows = counterexample_rows(*scene, options);
  } catch (const Error& e) {
    err << "counterexample: " << e.what() << '\n';
    return kExitUsage;
  }

  const std::string header =
      "variant,gram_offdiag,qr_lower_triangularity,qr_plan_residual,fc_qr_minus_f,"
      "fc_gap_over_delta2,qfi,cfi_qr,qfi_minus_cfi_qr,status";
  auto csv_line = [&](const CounterexampleRow& r) {
    const double scaled = 8.0 * r.fc_qr_minus_f / (options.delta * options.delta);
    return r.variant + ',' + fmt(r.gram_offdiag, "%.12e") + ',' +
           fmt(r.qr_lower_triangularity, "%.12e") + ',' + fmt(r.qr_plan_residual, "%.12e") + ',' +
           fmt(r.fc_qr_minus_f, "%.12e") + ',' + fmt(scaled, "%.12e") + ',' +
           fmt(r.qfi, "%.12e") + ',' + fmt(r.cfi_qr, "%.12e") + ',' +
           fmt(r.qfi_minus_cfi_qr, "%.12e") + ',' + join_status(r.status);
  };

  out << "separation theta*k/z0 = " << fmt(options.theta_scaled, "%g")
      << ", shift delta = " << fmt(options.delta, "%g") << "\n\n";
  for (const CounterexampleRow& r : rows) {
    out << "[" << r.variant << "]\n"
        << "  gram off-diagonal           " << fmt(r.gram_offdiag) << '\n'
        << "  QR: RB above-diagonal max   " << fmt(r.qr_lower_triangularity) << '\n'
        << "  QR: row proportionality     " << fmt(r.qr_plan_residual) << '\n'
        << "  f^c_qr - f                  " << fmt(r.fc_qr_minus_f) << '\n'
        << "  8 (f^c_qr - f) / delta^2    "
        << fmt(8.0 * r.fc_qr_minus_f / (options.delta * options.delta)) << '\n'
        << "  qfi                         " << fmt(r.qfi) << '\n'
        << "  cfi_qr                      " << fmt(r.cfi_qr) << '\n'
        << "  qfi - cfi_qr                " << fmt(r.qfi_minus_cfi_qr) << '\n'
        << "  status                      " << join_status(r.status) << "\n\n";
  }
  out << header << '\n';
  for (const CounterexampleRow& r : rows) out << csv_line(r) << '\n';

  if (options.out) {
    std::ofstream file(*options.out, std::ios::binary);
    if (!file) {
      err << "counterexample: cannot write " << options.out->string() << '\n';
      return kExitUsage;
    }
    file << header << '\n';
    for (const CounterexampleRow& r : rows) file << csv_line(r) << '\n';
  }
  return kExitOk;
}

}  // namespace qlim
