#include "schurlab/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <cstdint>
#include <string>
#include <utility>

#include "schurlab/errors.hpp"

namespace schurlab {

namespace {

constexpr std::size_t kPreconditionMin = 16;

// Column-major working copy. Imaginary parts are only stored on the complex path.
struct Columns {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> re;
  std::vector<double> im;

  double* re_col(std::size_t j) { return re.data() + j * rows; }
  double* im_col(std::size_t j) { return im.data() + j * rows; }
};

struct Rotation {
  double c;
  double s;
  double t;
};

Rotation jacobi_rotation(double alpha, double beta, double g) {
  const double zeta = (beta - alpha) / (2.0 * g);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, c * t, t};
}

// Four independent partial sums let the compiler keep several FMA chains in flight.
double dot(const double* a, const double* b, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < len; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

template <bool Complex>
double column_norm2(Columns& w, std::size_t j) {
  const double* a = w.re_col(j);
  double sum = dot(a, a, w.rows);
  if constexpr (Complex) {
    const double* b = w.im_col(j);
    sum += dot(b, b, w.rows);
  }
  return sum;
}

// Applies the complex rotation to columns i and j of a column-major block.
// The phase e^{-i phi} is folded into column j before the real rotation.
template <bool Complex>
void rotate_pair(double* ri, double* ii, double* rj, double* ij, std::size_t len, const Rotation& rot,
                 double ph_re, double ph_im) {
  if constexpr (Complex) {
    for (std::size_t k = 0; k < len; ++k) {
      // a_j' = a_j * (ph_re - i ph_im)
      const double jr = rj[k] * ph_re + ij[k] * ph_im;
      const double ji = ij[k] * ph_re - rj[k] * ph_im;
      const double ir = ri[k], iim = ii[k];
      ri[k] = rot.c * ir - rot.s * jr;
      ii[k] = rot.c * iim - rot.s * ji;
      rj[k] = rot.s * ir + rot.c * jr;
      ij[k] = rot.s * iim + rot.c * ji;
    }
  } else {
    (void)ii;
    (void)ij;
    (void)ph_im;
    // on the real path the phase is +-1
    for (std::size_t k = 0; k < len; ++k) {
      const double jr = rj[k] * ph_re;
      const double ir = ri[k];
      ri[k] = rot.c * ir - rot.s * jr;
      rj[k] = rot.s * ir + rot.c * jr;
    }
  }
}

template <bool Complex>
int run_sweeps(Columns& w, Columns* v, const JacobiOptions& opts) {
  const std::size_t n = w.cols;
  std::vector<double> d(n);
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double frob2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = column_norm2<Complex>(w, j);
      frob2 += d[j];
    }
    double off = 0.0;
    std::size_t rotations = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (d[i] == 0.0 || d[j] == 0.0) continue;
        const double* ai = w.re_col(i);
        const double* aj = w.re_col(j);
        double gr = dot(ai, aj, w.rows), gi = 0.0;
        if constexpr (Complex) {
          const double* bi = w.im_col(i);
          const double* bj = w.im_col(j);
          gr += dot(bi, bj, w.rows);
          gi = dot(ai, bj, w.rows) - dot(bi, aj, w.rows);
        }
        const double g = std::hypot(gr, gi);
        off += g * g;
        if (!(g > opts.pair_tol * std::sqrt(d[i]) * std::sqrt(d[j]))) continue;
        ++rotations;
        const Rotation rot = jacobi_rotation(d[i], d[j], g);
        const double ph_re = gr / g, ph_im = gi / g;
        rotate_pair<Complex>(w.re_col(i), Complex ? w.im_col(i) : nullptr, w.re_col(j),
                             Complex ? w.im_col(j) : nullptr, w.rows, rot, ph_re, ph_im);
        if (v != nullptr) {
          rotate_pair<Complex>(v->re_col(i), Complex ? v->im_col(i) : nullptr, v->re_col(j),
                               Complex ? v->im_col(j) : nullptr, v->rows, rot, ph_re, ph_im);
        }
        d[i] = std::max(0.0, d[i] - rot.t * g);
        d[j] = d[j] + rot.t * g;
      }
    }
    if (rotations == 0 || std::sqrt(off) <= opts.gram_tol * frob2) return sweep;
  }
  throw NumericError("jacobi_svd: no convergence after " + std::to_string(opts.max_sweeps) +
                     " sweeps on a " + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
                     " matrix");
}

struct Prepared {
  Columns w;
  bool transposed = false;
  bool complex = false;
  double scale = 0.0;
};

// Loads x (or x* when it is wide) into column-major storage scaled by 1/max|x_ij|.
Prepared prepare(const ComplexMatrix& x) {
  if (!x.is_finite()) throw InvalidInput("singular values: matrix has non-finite entries");
  Prepared p;
  p.transposed = x.rows() < x.cols();
  p.complex = !x.is_real();
  p.scale = x.max_abs();
  const std::size_t rows = p.transposed ? x.cols() : x.rows();
  const std::size_t cols = p.transposed ? x.rows() : x.cols();
  p.w.rows = rows;
  p.w.cols = cols;
  p.w.re.assign(rows * cols, 0.0);
  if (p.complex) p.w.im.assign(rows * cols, 0.0);
  if (p.scale == 0.0) return p;
  const double inv = 1.0 / p.scale;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const cplx z = x(i, j);
      // working matrix is x or x*, stored by columns
      const std::size_t r = p.transposed ? j : i;
      const std::size_t c = p.transposed ? i : j;
      p.w.re[c * rows + r] = z.real() * inv;
      if (p.complex) p.w.im[c * rows + r] = (p.transposed ? -z.imag() : z.imag()) * inv;
    }
  }
  return p;
}

std::vector<std::size_t> descending_order(const std::vector<double>& s) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  return order;
}

std::vector<double> final_norms(Prepared& p) {
  std::vector<double> s(p.w.cols);
  for (std::size_t j = 0; j < p.w.cols; ++j) {
    const double n2 = p.complex ? column_norm2<true>(p.w, j) : column_norm2<false>(p.w, j);
    s[j] = std::sqrt(n2) * p.scale;
  }
  return s;
}

// Fills zero columns of an orthonormal-column matrix with unit vectors orthogonal to the rest.
void complete_basis(ComplexMatrix& q, const std::vector<bool>& filled) {
  const std::size_t rows = q.rows();
  std::size_t candidate = 0;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    if (filled[j]) continue;
    for (; candidate < rows; ++candidate) {
      std::vector<cplx> e(rows, cplx{});
      e[candidate] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < q.cols(); ++k) {
          if (k == j) continue;
          cplx proj{};
          for (std::size_t r = 0; r < rows; ++r) proj += std::conj(q(r, k)) * e[r];
          for (std::size_t r = 0; r < rows; ++r) e[r] -= proj * q(r, k);
        }
      }
      double nrm = 0.0;
      for (const auto& z : e) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t r = 0; r < rows; ++r) q(r, j) = e[r] / nrm;
        ++candidate;
        break;
      }
    }
  }
}

// Householder QR with column pivoting, then replaces w by R* (lower triangular,
// cols x cols). Singular values are unchanged; Jacobi on R* needs far fewer
// sweeps than on the raw matrix.
template <bool Complex>
void precondition_with_qr(Columns& w) {
  const std::size_t m = w.rows, n = w.cols;
  std::vector<double> partial(n);
  for (std::size_t j = 0; j < n; ++j) partial[j] = column_norm2<Complex>(w, j);
  std::vector<double> vr(m), vi(m);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t j = k + 1; j < n; ++j)
      if (partial[j] > partial[piv]) piv = j;
    if (piv != k) {
      std::swap_ranges(w.re_col(k), w.re_col(k) + m, w.re_col(piv));
      if constexpr (Complex) std::swap_ranges(w.im_col(k), w.im_col(k) + m, w.im_col(piv));
      std::swap(partial[k], partial[piv]);
    }
    const std::size_t len = m - k;
    double* xr = w.re_col(k) + k;
    double* xi = Complex ? w.im_col(k) + k : nullptr;
    double xnorm2 = dot(xr, xr, len);
    if constexpr (Complex) xnorm2 += dot(xi, xi, len);
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) continue;
    // alpha = -e^{i arg x0} |x|, v = x - alpha e1
    const double x0r = xr[0], x0i = Complex ? xi[0] : 0.0;
    const double x0abs = std::hypot(x0r, x0i);
    const double ur = x0abs > 0.0 ? x0r / x0abs : 1.0;
    const double ui = x0abs > 0.0 ? x0i / x0abs : 0.0;
    const double ar = -ur * xnorm, ai = -ui * xnorm;
    for (std::size_t t = 0; t < len; ++t) {
      vr[t] = xr[t];
      vi[t] = Complex ? xi[t] : 0.0;
    }
    vr[0] -= ar;
    vi[0] -= ai;
    double vnorm2 = dot(vr.data(), vr.data(), len);
    if constexpr (Complex) vnorm2 += dot(vi.data(), vi.data(), len);
    if (vnorm2 > 0.0) {
      for (std::size_t j = k + 1; j < n; ++j) {
        double* cr = w.re_col(j) + k;
        double* ci = Complex ? w.im_col(j) + k : nullptr;
        // coef = 2 v* c / v* v
        double pr = dot(vr.data(), cr, len), pi = 0.0;
        if constexpr (Complex) {
          pr += dot(vi.data(), ci, len);
          pi = dot(vr.data(), ci, len) - dot(vi.data(), cr, len);
        }
        const double fr = 2.0 * pr / vnorm2, fi = 2.0 * pi / vnorm2;
        for (std::size_t t = 0; t < len; ++t) {
          cr[t] -= vr[t] * fr - vi[t] * fi;
          if constexpr (Complex) ci[t] -= vr[t] * fi + vi[t] * fr;
        }
        partial[j] = std::max(0.0, partial[j] - (cr[0] * cr[0] + (Complex ? ci[0] * ci[0] : 0.0)));
      }
    }
    xr[0] = ar;
    if constexpr (Complex) xi[0] = ai;
    for (std::size_t t = 1; t < len; ++t) {
      xr[t] = 0.0;
      if constexpr (Complex) xi[t] = 0.0;
    }
    // downdated norms drift; refresh them when cancellation has eaten most digits
    for (std::size_t j = k + 1; j < n; ++j) {
      if (partial[j] < 1e-8 * xnorm2) {
        const std::size_t rest = m - k - 1;
        double nr = dot(w.re_col(j) + k + 1, w.re_col(j) + k + 1, rest);
        if constexpr (Complex) nr += dot(w.im_col(j) + k + 1, w.im_col(j) + k + 1, rest);
        partial[j] = nr;
      }
    }
  }
  Columns lower;
  lower.rows = n;
  lower.cols = n;
  lower.re.assign(n * n, 0.0);
  if constexpr (Complex) lower.im.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = i; r < n; ++r) {
      // (R*)(r, i) = conj(R(i, r))
      lower.re[i * n + r] = w.re[r * m + i];
      if constexpr (Complex) lower.im[i * n + r] = -w.im[r * m + i];
    }
  }
  w = std::move(lower);
}

}  // namespace

namespace {

std::vector<double> singular_values_dense(const ComplexMatrix& x, const JacobiOptions& opts) {
  Prepared p = prepare(x);
  if (p.scale > 0.0) {
    if (p.complex) {
      if (p.w.cols >= kPreconditionMin) precondition_with_qr<true>(p.w);
      run_sweeps<true>(p.w, nullptr, opts);
    } else {
      if (p.w.cols >= kPreconditionMin) precondition_with_qr<false>(p.w);
      run_sweeps<false>(p.w, nullptr, opts);
    }
  }
  return final_norms(p);
}

// Connected components of the bipartite row/column graph of the nonzero pattern.
// Rows are nodes [0, r), columns are nodes [r, r + c).
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> split_components(
    const ComplexMatrix& x) {
  const std::size_t r = x.rows(), c = x.cols();
  std::vector<std::size_t> parent(r + c);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (x(i, j) != cplx{}) parent[find(i)] = find(r + j);
  std::vector<std::size_t> slot(r + c, SIZE_MAX);
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> comps;
  for (std::size_t a = 0; a < r + c; ++a) {
    const std::size_t root = find(a);
    if (slot[root] == SIZE_MAX) {
      slot[root] = comps.size();
      comps.emplace_back();
    }
    auto& comp = comps[slot[root]];
    (a < r ? comp.first : comp.second).push_back(a < r ? a : a - r);
  }
  return comps;
}

}  // namespace

std::vector<double> jacobi_singular_values(const ComplexMatrix& x, const JacobiOptions& opts) {
  if (!x.is_finite()) throw InvalidInput("singular values: matrix has non-finite entries");
  const std::size_t k = std::min(x.rows(), x.cols());
  const auto comps = split_components(x);
  std::vector<double> s;
  s.reserve(k);
  if (comps.size() <= 1) {
    s = singular_values_dense(x, opts);
  } else {
    // a permuted direct sum: the spectrum is the union of the blocks' spectra
    for (const auto& [rows, cols] : comps) {
      if (rows.empty() || cols.empty()) continue;
      ComplexMatrix block(rows.size(), cols.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) block(i, j) = x(rows[i], cols[j]);
      const auto part = singular_values_dense(block, opts);
      s.insert(s.end(), part.begin(), part.end());
    }
  }
  s.resize(k, 0.0);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

SvdResult jacobi_svd(const ComplexMatrix& x, const JacobiOptions& opts) {
  Prepared p = prepare(x);
  const std::size_t k = p.w.cols;
  Columns v;
  v.rows = k;
  v.cols = k;
  v.re.assign(k * k, 0.0);
  if (p.complex) v.im.assign(k * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) v.re[j * k + j] = 1.0;

  SvdResult out;
  if (p.scale > 0.0) {
    out.sweeps = p.complex ? run_sweeps<true>(p.w, &v, opts) : run_sweeps<false>(p.w, &v, opts);
  }
  const std::vector<double> s = final_norms(p);
  const auto order = descending_order(s);

  // working matrix Y (x or x*) satisfies Y V = [columns]; columns / s give the left vectors of Y
  ComplexMatrix left(p.w.rows, k), right(k, k);
  std::vector<bool> filled(k, false);
  // below numerical rank the column direction is rounding noise; complete_basis replaces it
  const double floor = s.empty() ? 0.0 : s[order[0]] * static_cast<double>(k) * std::numeric_limits<double>::epsilon();
  out.s.resize(k);
  for (std::size_t jj = 0; jj < k; ++jj) {
    const std::size_t j = order[jj];
    out.s[jj] = s[j];
    for (std::size_t r = 0; r < k; ++r)
      right(r, jj) = cplx{v.re[j * k + r], p.complex ? v.im[j * k + r] : 0.0};
    if (s[j] > floor) {
      const double inv = p.scale / s[j];
      for (std::size_t r = 0; r < p.w.rows; ++r) {
        left(r, jj) = cplx{p.w.re[j * p.w.rows + r], p.complex ? p.w.im[j * p.w.rows + r] : 0.0} * inv;
      }
      filled[jj] = true;
    }
  }
  complete_basis(left, filled);
  if (p.transposed) {
    // x* = L S R*  =>  x = R S L*
    out.U = std::move(right);
    out.V = std::move(left);
  } else {
    out.U = std::move(left);
    out.V = std::move(right);
  }
  return out;
}

}  // namespace schurlab
