#pragma once

// Command implementations behind the qlim executable. Each command writes to
// the given streams and returns the process exit code:
//   0 success, 1 invariant failure, 2 usage or I/O error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlim/fisher.hpp"
#include "qlim/scene.hpp"

namespace qlim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::string_view kCsvHeader =
    "theta_scaled,qfi,qfi_fid,cfi_opt,cfi_qr,f_quantum,f_classical_qr,status";

/// Grid over theta * scale.
struct GridSpec {
  double theta_min = 0.05;
  double theta_max = 6.28;
  int points = 126;
};

struct ScanRow {
  double theta_scaled = 0.0;
  double qfi = 0.0;
  double qfi_fid = 0.0;
  double cfi_opt = 0.0;
  double cfi_qr = 0.0;
  double f_quantum = 0.0;
  double f_classical_qr = 0.0;
  std::vector<std::string> status;  // empty when clean
};

std::vector<double> grid_points(const GridSpec& grid);

/// One fisher_report per grid point, computed on `workers` threads (0 means
/// worker_count()) and returned in grid order.
std::vector<ScanRow> scan(const Scene& scene, const GridSpec& grid,
                          const FisherSettings& settings, unsigned workers = 0);

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows);

/// Bare polyline plot of qfi, cfi_opt and cfi_qr against theta_scaled.
void write_svg(std::ostream& out, const std::vector<ScanRow>& rows);

struct Fig1Options {
  std::filesystem::path out = "fig1.csv";
  std::optional<std::filesystem::path> svg;
  std::optional<std::filesystem::path> config;
  GridSpec grid;
  FisherSettings settings;
};

int cmd_fig1(const Fig1Options& options, std::ostream& log, std::ostream& err);

struct CounterexampleOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  double theta_scaled = 2.0;
  double delta = 1e-3;
  std::optional<double> rtol;
};

struct CounterexampleRow {
  std::string variant;  // "symmetric" or "asymmetric"
  double gram_offdiag = 0.0;
  double qr_lower_triangularity = 0.0;
  double qr_plan_residual = 0.0;
  double fc_qr_minus_f = 0.0;
  double qfi = 0.0;
  double cfi_qr = 0.0;
  double qfi_minus_cfi_qr = 0.0;
  std::vector<std::string> status;
};

/// Evaluates the symmetric reference scene and the (possibly configured)
/// asymmetric scene at one separation.
std::vector<CounterexampleRow> counterexample_rows(const Scene& asymmetric,
                                                   const CounterexampleOptions& options);

int cmd_counterexample(const CounterexampleOptions& options, std::ostream& out, std::ostream& err);

struct SelfcheckOptions {
  std::uint64_t seed = 7;
  int cases = 100;
  std::optional<double> strict;  // replaces every tolerance when set
};

struct InvariantTally {
  std::string name;
  double tolerance = 0.0;
  int checked = 0;
  int failed = 0;
  double worst = 0.0;
};

std::vector<InvariantTally> run_selfcheck(const SelfcheckOptions& options);

int cmd_selfcheck(const SelfcheckOptions& options, std::ostream& out);

/// Two-source defaults overridden by the file, if any.
SceneConfig resolve_scene_config(const std::optional<std::filesystem::path>& config);

std::string join_status(const std::vector<std::string>& status);

}  // namespace qlim
