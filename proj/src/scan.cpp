#include "qlim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qlim/parallel.hpp"

namespace qlim {

namespace {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

}  // namespace

std::string join_status(const std::vector<std::string>& status) {
  if (status.empty()) return "ok";
  std::string out;
  for (const auto& s : status) {
    if (!out.empty()) out += '|';
    out += s;
  }
  return out;
}

std::vector<double> grid_points(const GridSpec& grid) {
  std::vector<double> pts;
  if (grid.points < 1) return pts;
  if (grid.points == 1) return {grid.theta_min};
  pts.reserve(static_cast<std::size_t>(grid.points));
  const double step = (grid.theta_max - grid.theta_min) / (grid.points - 1);
  for (int k = 0; k < grid.points; ++k) pts.push_back(grid.theta_min + step * k);
  pts.back() = grid.theta_max;
  return pts;
}

std::vector<ScanRow> scan(const Scene& scene, const GridSpec& grid,
                          const FisherSettings& settings, unsigned workers) {
  const std::vector<double> pts = grid_points(grid);
  std::vector<ScanRow> rows(pts.size());
  parallel_chunks(pts.size(), workers == 0 ? worker_count() : workers,
                  [&](std::size_t begin, std::size_t end) {
                    for (std::size_t k = begin; k < end; ++k) {
                      const FisherReport rep = fisher_report(scene, pts[k] / scene.scale(), settings);
                      rows[k] = {pts[k],   rep.qfi,       rep.qfi_fid,        rep.cfi_opt,
                                 rep.cfi_qr, rep.f_quantum, rep.f_classical_qr, rep.status};
                    }
                  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << kCsvHeader << '\n';
  for (const ScanRow& r : rows) {
    out << format_number(r.theta_scaled) << ',' << format_number(r.qfi) << ','
        << format_number(r.qfi_fid) << ',' << format_number(r.cfi_opt) << ','
        << format_number(r.cfi_qr) << ',' << format_number(r.f_quantum) << ','
        << format_number(r.f_classical_qr) << ',' << join_status(r.status) << '\n';
  }
}

void write_svg(std::ostream& out, const std::vector<ScanRow>& rows) {
  constexpr double width = 640.0, height = 400.0, margin = 40.0;
  double x_lo = 0.0, x_hi = 1.0, y_hi = 0.0;
  if (!rows.empty()) {
    x_lo = rows.front().theta_scaled;
    x_hi = rows.back().theta_scaled;
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  for (const ScanRow& r : rows) {
    for (double y : {r.qfi, r.cfi_opt, r.cfi_qr}) {
      if (std::isfinite(y)) y_hi = std::max(y_hi, y);
    }
  }
  if (y_hi <= 0.0) y_hi = 1.0;

  auto px = [&](double x) { return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - y / y_hi * (height - 2 * margin); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";

  struct Series {
    const char* name;
    const char* color;
    double ScanRow::*field;
  };
  const Series series[] = {{"qfi", "black", &ScanRow::qfi},
                           {"cfi_opt", "blue", &ScanRow::cfi_opt},
                           {"cfi_qr", "red", &ScanRow::cfi_qr}};
  int legend = 0;
  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
    for (const ScanRow& r : rows) {
      const double y = r.*s.field;
      if (!std::isfinite(y)) continue;
      out << format_number(px(r.theta_scaled)) << ',' << format_number(py(y)) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - 120 << "\" y=\"" << margin + 15 * legend++ << "\" fill=\""
        << s.color << "\">" << s.name << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 8 << "\">theta * k / z0</text>\n";
  out << "</svg>\n";
}

}  // namespace qlim
