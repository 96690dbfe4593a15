#pragma once

// Independent reference computations and random generators shared by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "schurlab/matrix.hpp"
#include "schurlab/schur.hpp"

namespace oracle {

using schurlab::ComplexMatrix;
using schurlab::cplx;
using lcplx = std::complex<long double>;

// Characteristic polynomial of a Hermitian n x n matrix by Faddeev-LeVerrier,
// coefficients c[0..n] of t^0..t^n with c[n] = 1.
inline std::vector<long double> charpoly(const std::vector<lcplx>& g, std::size_t n) {
  std::vector<long double> c(n + 1, 0.0L);
  c[n] = 1.0L;
  std::vector<lcplx> m(n * n, lcplx{}), gm(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = G M_{k-1} + c_{n-k+1} I
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        lcplx acc{};
        for (std::size_t l = 0; l < n; ++l) acc += g[i * n + l] * m[l * n + j];
        gm[i * n + j] = acc;
      }
    for (std::size_t i = 0; i < n; ++i) gm[i * n + i] += c[n - k + 1];
    m = gm;
    lcplx tr{};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += g[i * n + l] * m[l * n + i];
    c[n - k] = -tr.real() / static_cast<long double>(k);
  }
  return c;
}

// Roots of a monic polynomial with only real roots, largest first. Newton from
// above the Cauchy bound converges monotonically to the largest root; deflate and repeat.
inline std::vector<long double> real_roots(std::vector<long double> c) {
  std::vector<long double> roots;
  while (c.size() > 1) {
    const std::size_t deg = c.size() - 1;
    long double bound = 0.0L;
    for (std::size_t i = 0; i < deg; ++i) bound = std::max(bound, std::fabs(c[i]));
    long double x = 1.0L + bound;
    for (int it = 0; it < 2000; ++it) {
      long double p = c[deg], dp = 0.0L;
      for (std::size_t i = deg; i-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[i];
      }
      if (dp == 0.0L) break;
      const long double nx = x - p / dp;
      if (!(nx < x)) break;
      x = nx;
    }
    roots.push_back(x);
    // synthetic division by (t - x)
    std::vector<long double> q(deg);
    long double carry = c[deg];
    for (std::size_t i = deg; i-- > 0;) {
      q[i] = carry;
      carry = c[i] + carry * x;
    }
    c = q;
  }
  return roots;
}

// Singular values as square roots of the eigenvalues of X* X, n <= 4.
inline std::vector<double> singular_values_charpoly(const ComplexMatrix& x) {
  const std::size_t r = x.rows(), n = x.cols();
  std::vector<lcplx> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lcplx acc{};
      for (std::size_t k = 0; k < r; ++k) acc += std::conj(lcplx(x(k, i))) * lcplx(x(k, j));
      g[i * n + j] = acc;
    }
  const auto roots = real_roots(charpoly(g, n));
  std::vector<double> s;
  for (long double l : roots) s.push_back(static_cast<double>(std::sqrt(std::max(l, 0.0L))));
  std::sort(s.begin(), s.end(), std::greater<>());
  s.resize(std::min(r, n));
  return s;
}

// 2 x 2 closed form: s^2 = (F +- sqrt(F^2 - 4 |det|^2)) / 2 with F = ||X||_F^2.
inline std::vector<double> singular_values_2x2(const ComplexMatrix& x) {
  const long double f = std::norm(lcplx(x(0, 0))) + std::norm(lcplx(x(0, 1))) + std::norm(lcplx(x(1, 0))) +
                        std::norm(lcplx(x(1, 1)));
  const long double det = std::abs(lcplx(x(0, 0)) * lcplx(x(1, 1)) - lcplx(x(0, 1)) * lcplx(x(1, 0)));
  const long double disc = std::sqrt(std::max(0.0L, f * f - 4.0L * det * det));
  const long double big = (f + disc) / 2.0L;
  // small root from the product to avoid cancellation
  const long double small = big > 0.0L ? det * det / big : 0.0L;
  return {static_cast<double>(std::sqrt(big)), static_cast<double>(std::sqrt(small))};
}

inline ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

inline ComplexMatrix naive_kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, bool real = false) {
  std::normal_distribution<double> g;
  ComplexMatrix x(r, c);
  for (auto& z : x.data()) z = real ? cplx{g(rng), 0.0} : cplx{g(rng), g(rng)};
  return x;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  const ComplexMatrix x = random_matrix(rng, n, n);
  return (x + x.adjoint()) * cplx{0.5};
}

// Q from Gram-Schmidt on a Gaussian matrix.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix q = random_matrix(rng, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        cplx d{};
        for (std::size_t i = 0; i < n; ++i) d += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
      }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

inline std::vector<double> random_eigenvalues(std::mt19937_64& rng, std::size_t n, double lo = -0.9,
                                              double hi = 0.9) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Largest |f(lambda_j)| times ||X||_F.
inline double identity_scale(const std::vector<double>& fvals, const ComplexMatrix& x) {
  double top = 0.0;
  for (double v : fvals) top = std::max(top, std::abs(v));
  return top * x.frobenius_norm();
}

}  // namespace oracle
