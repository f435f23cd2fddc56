#pragma once

// Dense complex decompositions with fixed sign, phase and ordering
// conventions. Results are bit-reproducible for identical inputs.

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace qlim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

struct QrResult {
  CMatrix q;  // m x m unitary
  CMatrix t;  // m x n upper triangular, real nonnegative diagonal
};

struct SvdResult {
  CMatrix u;     // m x k, orthonormal columns
  RVector sigma; // k = min(m, n), descending, >= 0
  CMatrix v;     // n x k, orthonormal columns
};

struct EighResult {
  CMatrix w;      // unitary, eigenvectors in columns
  RVector lambda; // descending
};

/// A = Q T with diag(T) real and nonnegative. Requires rows >= cols.
QrResult qr_positive(const CMatrix& a);

/// Thin SVD. In each column of U the largest-magnitude entry (lowest row on
/// ties) is real and nonnegative; V carries the matching phase.
SvdResult svd_fixed(const CMatrix& m);

/// Hermitian eigendecomposition, eigenvalues descending, same phase rule as
/// svd_fixed applied to each eigenvector.
EighResult eigh_fixed(const CMatrix& h);

/// Moore-Penrose pseudoinverse. Singular values <= rtol * sigma_max are
/// treated as zero; rtol defaults to default_rtol(a).
CMatrix pinv(const CMatrix& a, std::optional<double> rtol = std::nullopt);

/// Principal square root of a Hermitian PSD matrix. Negative eigenvalues down
/// to -1e-10 * max(1, lambda_max) are clamped to zero.
CMatrix sqrtm_psd(const CMatrix& h);

/// max(rows, cols) * machine epsilon.
double default_rtol(const CMatrix& a) noexcept;

bool all_finite(const CMatrix& a) noexcept;

/// ||h - h^dagger||_F
double hermiticity_defect(const CMatrix& h);

/// ||r^dagger r - I||_F
double unitarity_defect(const CMatrix& r);

/// Index of the largest-magnitude entry of column `col`, lowest row on ties.
Eigen::Index dominant_row(const CMatrix& w, Eigen::Index col) noexcept;

/// Multiply each column of `w` by the phase that makes its dominant entry real
/// and nonnegative. When `partner` is given, the same phase is applied to its
/// columns.
void fix_column_phases(CMatrix& w, CMatrix* partner = nullptr);

/// (h + h^dagger) / 2
CMatrix hermitian_part(const CMatrix& h);

}  // namespace qlim
