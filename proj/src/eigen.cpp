#include "genhankel/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace genhankel {

Tridiagonal tridiagonalize(Matrix a) {
  const std::size_t n = a.size();
  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  if (n == 0) return t;

  std::vector<double> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Column k below the diagonal, read from the lower triangle.
    const std::size_t m = n - k - 1;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      norm2 += v[i] * v[i];
    }
    t.diag[k] = a(k, k);
    // Skip the reflection if the tail below the first entry already vanishes.
    double tail = norm2 - v[0] * v[0];
    if (tail == 0.0) {
      t.offdiag[k] = v[0];
      continue;
    }
    const double norm = std::sqrt(norm2);
    const double alpha = v[0] > 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vv = tail + v[0] * v[0];
    const double beta = 2.0 / vv;
    t.offdiag[k] = alpha;

    // p = beta * S v, S the trailing block, using its lower triangle only.
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = &a(k + 1 + i, k + 1);
      const double vi = v[i];
      double acc = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        acc += row[j] * v[j];
        p[j] += row[j] * vi;
      }
      p[i] += acc + row[i] * vi;
    }
    double vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] *= beta;
      vp += v[i] * p[i];
    }
    const double kcoef = 0.5 * beta * vp;
    for (std::size_t i = 0; i < m; ++i) p[i] -= kcoef * v[i];

    // S -= v p^T + p v^T on the lower triangle.
    for (std::size_t i = 0; i < m; ++i) {
      double* row = &a(k + 1 + i, k + 1);
      const double vi = v[i];
      const double pi = p[i];
      for (std::size_t j = 0; j <= i; ++j) row[j] -= vi * p[j] + pi * v[j];
    }
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.offdiag[n - 2] = a(n - 1, n - 2);
  }
  t.diag[n - 1] = a(n - 1, n - 1);
  return t;
}

std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
  auto& d = t.diag;
  const std::size_t n = d.size();
  std::vector<double> e(n, 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  // Absolute deflation floor, so clusters of zero eigenvalues split off.
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= eps * anorm) break;
      }
      if (m != l) {
        if (++iter > 60) throw std::runtime_error("tridiagonal QL failed to converge");
        // Wilkinson-type shift from the leading 2x2 block.
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> eigenvalues_symmetric(const Matrix& a, double symmetry_tol) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double x = a(i, j), y = a(j, i);
      if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("eigenvalues_symmetric: non-finite matrix entry");
      if (std::abs(x - y) > symmetry_tol)
        throw std::invalid_argument("eigenvalues_symmetric: matrix is not symmetric");
    }
  }
  return tridiagonal_eigenvalues(tridiagonalize(a));
}

}  // namespace genhankel
