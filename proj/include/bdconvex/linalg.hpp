#pragma once

// Small dense linear algebra for desk-scale problems (n <= 32).
// Deterministic throughout: no randomized pivoting, fixed sweep orders.

#include <complex>
#include <vector>

namespace bdconvex {

using Vec = std::vector<double>;

namespace linalg {

using cplx = std::complex<double>;

// Dense real matrix, row-major.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Dense complex square matrix, row-major.
struct CMat {
  int n = 0;
  std::vector<cplx> a;

  CMat() = default;
  explicit CMat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, cplx{0, 0}) {}
  cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  cplx operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

CMat cmat_identity(int n);
CMat operator+(const CMat& x, const CMat& y);
CMat operator-(const CMat& x, const CMat& y);
CMat operator*(const CMat& x, const CMat& y);
CMat operator*(double s, const CMat& x);

double max_abs(const CMat& m);
// max_ij |A_ij - conj(A_ji)|
double herm_defect(const CMat& m);
// Re tr(A B); exact real part, valid for any pair of square matrices.
double re_trace_prod(const CMat& x, const CMat& y);

// Cholesky factorization A = L L^H for Hermitian positive definite A.
// Returns false (leaving l unspecified) when a pivot is not strictly positive.
bool cholesky(const CMat& m, CMat& l);
double chol_logdet(const CMat& l);
// Inverse of the Hermitian positive definite matrix with Cholesky factor l.
CMat chol_inverse_from_factor(const CMat& l);

// Realification [[Re, -Im], [Im, Re]]; Hermitian input gives a symmetric
// 2n x 2n matrix whose spectrum is that of the input, doubled.
Mat realify(const CMat& m);

// Eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi
// rotations; converged when the off-diagonal Frobenius norm drops below
// 1e-13 relative to the matrix scale.
std::vector<double> eig_sym(Mat m);
// Eigenvalues (ascending) of a complex Hermitian matrix; realifies to a
// symmetric matrix of twice the size unless the imaginary part vanishes.
std::vector<double> eig_herm(const CMat& m);

// Full eigendecomposition of a complex Hermitian matrix: values ascending,
// orthonormal eigenvectors as the matching columns of `vectors`.
struct EigH {
  std::vector<double> values;
  CMat vectors;
};
EigH eig_herm_full(const CMat& m);

// Gaussian elimination with partial pivoting; false if (numerically) singular.
bool solve_lin(Mat m, Vec rhs, Vec& x);

struct RrefResult {
  Mat r;
  std::vector<int> pivot_cols;
  int rank = 0;
};
RrefResult rref(Mat m, double tol);

// Columns span the nullspace of m; empty (cols == 0) for full column rank.
Mat nullspace_basis(const Mat& m, double tol);

// Solve m x = rhs for a consistent (possibly over/under-determined) system,
// free variables set to zero. Returns false when inconsistent beyond tol.
bool solve_consistent(const Mat& m, const Vec& rhs, Vec& x, double tol);

}  // namespace linalg
}  // namespace bdconvex
