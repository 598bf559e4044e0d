#include "bdconvex/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace bdconvex::linalg {

CMat cmat_identity(int n) {
  CMat m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMat operator+(const CMat& x, const CMat& y) {
  CMat r(x.n);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

CMat operator-(const CMat& x, const CMat& y) {
  CMat r(x.n);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

CMat operator*(const CMat& x, const CMat& y) {
  const int n = x.n;
  CMat r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx{0, 0}) continue;
      for (int j = 0; j < n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

CMat operator*(double s, const CMat& x) {
  CMat r(x.n);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = s * x.a[i];
  return r;
}

double max_abs(const CMat& m) {
  double v = 0.0;
  for (const cplx& z : m.a) v = std::max(v, std::abs(z));
  return v;
}

double herm_defect(const CMat& m) {
  double v = 0.0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) v = std::max(v, std::abs(m(i, j) - std::conj(m(j, i))));
  return v;
}

double re_trace_prod(const CMat& x, const CMat& y) {
  double s = 0.0;
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const cplx a = x(i, k), b = y(k, i);
      s += a.real() * b.real() - a.imag() * b.imag();
    }
  return s;
}

bool cholesky(const CMat& m, CMat& l) {
  const int n = m.n;
  l = CMat(n);
  for (int j = 0; j < n; ++j) {
    cplx diag = m(j, j);
    for (int k = 0; k < j; ++k) diag -= l(j, k) * std::conj(l(j, k));
    const double d = diag.real();
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double dj = std::sqrt(d);
    l(j, j) = dj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / dj;
    }
  }
  return true;
}

double chol_logdet(const CMat& l) {
  double s = 0.0;
  for (int i = 0; i < l.n; ++i) s += std::log(l(i, i).real());
  return 2.0 * s;
}

CMat chol_inverse_from_factor(const CMat& l) {
  const int n = l.n;
  // Forward substitution column by column: L Y = I, then L^H X = Y.
  CMat y(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      cplx s = (i == c) ? cplx{1, 0} : cplx{0, 0};
      for (int k = 0; k < i; ++k) s -= l(i, k) * y(k, c);
      y(i, c) = s / l(i, i).real();
    }
  }
  CMat x(n);
  for (int c = 0; c < n; ++c) {
    for (int i = n - 1; i >= 0; --i) {
      cplx s = y(i, c);
      for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * x(k, c);
      x(i, c) = s / l(i, i).real();
    }
  }
  // Symmetrize to wash out round-off asymmetry.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const cplx av = 0.5 * (x(i, j) + std::conj(x(j, i)));
      x(i, j) = av;
      x(j, i) = std::conj(av);
    }
  return x;
}

Mat realify(const CMat& m) {
  const int n = m.n;
  Mat r(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx z = m(i, j);
      r(i, j) = z.real();
      r(i, j + n) = -z.imag();
      r(i + n, j) = z.imag();
      r(i + n, j + n) = z.real();
    }
  return r;
}

namespace {

double offdiag_norm(const Mat& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

double fro_norm(const Mat& m) {
  double s = 0.0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

}  // namespace

namespace {

// Cyclic Jacobi sweeps; when `vectors` is non-null it accumulates the
// rotations so its columns end up as the eigenvectors.
void jacobi_sweeps(Mat& m, Mat* vectors) {
  const int n = m.rows;
  const double thresh = 1e-13 * std::max(1.0, fro_norm(m));
  for (int sweep = 0; sweep < 60 && offdiag_norm(m) > thresh; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        if (vectors) {
          for (int k = 0; k < n; ++k) {
            const double vkp = (*vectors)(k, p), vkq = (*vectors)(k, q);
            (*vectors)(k, p) = c * vkp - s * vkq;
            (*vectors)(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<double> eig_sym(Mat m) {
  const int n = m.rows;
  jacobi_sweeps(m, nullptr);
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> eig_herm(const CMat& m) {
  double imag_max = 0.0;
  for (const cplx& z : m.a) imag_max = std::max(imag_max, std::abs(z.imag()));
  if (imag_max < 1e-14) {
    Mat r(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j) r(i, j) = m(i, j).real();
    return eig_sym(std::move(r));
  }
  // Realified spectrum is the Hermitian spectrum doubled; average the pairs.
  std::vector<double> doubled = eig_sym(realify(m));
  std::vector<double> ev(m.n);
  for (int i = 0; i < m.n; ++i) ev[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return ev;
}

EigH eig_herm_full(const CMat& m) {
  const int n = m.n;
  EigH out;
  out.values.resize(n);
  out.vectors = CMat(n);

  double imag_max = 0.0;
  for (const cplx& z : m.a) imag_max = std::max(imag_max, std::abs(z.imag()));

  if (imag_max < 1e-14) {
    Mat r(n, n), v(n, n);
    for (int i = 0; i < n; ++i) {
      v(i, i) = 1.0;
      for (int j = 0; j < n; ++j) r(i, j) = m(i, j).real();
    }
    jacobi_sweeps(r, &v);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return r(a, a) < r(b, b); });
    for (int c = 0; c < n; ++c) {
      out.values[c] = r(order[c], order[c]);
      for (int i = 0; i < n; ++i) out.vectors(i, c) = v(i, order[c]);
    }
    return out;
  }

  // Realified eigenvector [x; y] maps back to the complex vector x + iy;
  // the doubled spectrum contributes one column per pair.
  Mat r = realify(m);
  Mat v(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) v(i, i) = 1.0;
  jacobi_sweeps(r, &v);
  std::vector<int> order(2 * n);
  for (int i = 0; i < 2 * n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return r(a, a) < r(b, b); });
  for (int c = 0; c < n; ++c) {
    const int col = order[2 * c];
    out.values[c] = 0.5 * (r(order[2 * c], order[2 * c]) + r(order[2 * c + 1], order[2 * c + 1]));
    for (int i = 0; i < n; ++i) out.vectors(i, c) = cplx{v(i, col), v(i + n, col)};
  }
  return out;
}

bool solve_lin(Mat m, Vec rhs, Vec& x) {
  const int n = m.rows;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < 1e-300) return false;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
      std::swap(rhs[col], rhs[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

RrefResult rref(Mat m, double tol) {
  RrefResult out;
  const int rows = m.rows, cols = m.cols;
  int lead = 0;
  for (int col = 0; col < cols && lead < rows; ++col) {
    int piv = lead;
    for (int r = lead + 1; r < rows; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) <= tol) continue;
    if (piv != lead)
      for (int j = 0; j < cols; ++j) std::swap(m(lead, j), m(piv, j));
    const double d = m(lead, col);
    for (int j = 0; j < cols; ++j) m(lead, j) /= d;
    m(lead, col) = 1.0;
    for (int r = 0; r < rows; ++r) {
      if (r == lead) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) m(r, j) -= f * m(lead, j);
      m(r, col) = 0.0;
    }
    out.pivot_cols.push_back(col);
    ++lead;
  }
  out.rank = static_cast<int>(out.pivot_cols.size());
  out.r = std::move(m);
  return out;
}

Mat nullspace_basis(const Mat& m, double tol) {
  RrefResult rr = rref(m, tol);
  const int cols = m.cols;
  std::vector<int> free_cols;
  {
    std::vector<char> is_pivot(cols, 0);
    for (int c : rr.pivot_cols) is_pivot[c] = 1;
    for (int c = 0; c < cols; ++c)
      if (!is_pivot[c]) free_cols.push_back(c);
  }
  Mat basis(cols, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    basis(free_cols[k], static_cast<int>(k)) = 1.0;
    for (int pr = 0; pr < rr.rank; ++pr)
      basis(rr.pivot_cols[pr], static_cast<int>(k)) = -rr.r(pr, free_cols[k]);
  }
  return basis;
}

bool solve_consistent(const Mat& m, const Vec& rhs, Vec& x, double tol) {
  Mat aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = rhs[i];
  }
  RrefResult rr = rref(std::move(aug), tol);
  for (int c : rr.pivot_cols)
    if (c == m.cols) return false;  // pivot in the rhs column: inconsistent
  x.assign(m.cols, 0.0);
  for (int pr = 0; pr < rr.rank; ++pr) x[rr.pivot_cols[pr]] = rr.r(pr, m.cols);
  return true;
}

}  // namespace bdconvex::linalg
