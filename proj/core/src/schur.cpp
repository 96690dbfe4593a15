#include "schurlab/schur.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "schurlab/errors.hpp"
#include "schurlab/svd.hpp"

namespace schurlab {

DiagonalOperator::DiagonalOperator(std::vector<double> eigenvalues) : eig_(std::move(eigenvalues)) {
  for (double v : eig_)
    if (!std::isfinite(v)) throw InvalidInput("DiagonalOperator: non-finite eigenvalue");
}

ComplexMatrix DiagonalOperator::to_matrix() const { return ComplexMatrix::diagonal(eig_); }

DiagonalOperator DiagonalOperator::scaled(double c) const {
  std::vector<double> out(eig_);
  for (auto& v : out) v *= c;
  return DiagonalOperator(std::move(out));
}

DiagonalOperator DiagonalOperator::apply(const ScalarC1Function& f) const {
  std::vector<double> out(eig_.size());
  for (std::size_t i = 0; i < eig_.size(); ++i) out[i] = f(eig_[i]);
  return DiagonalOperator(std::move(out));
}

SingularValueSequence DiagonalOperator::singular_values() const { return decreasing_rearrangement(eig_); }

double divided_difference(const ScalarC1Function& f, double lambda, double mu) {
  if (lambda == mu) {
    // still validates the argument
    (void)f(lambda);
    return 0.0;
  }
  return (f(lambda) - f(mu)) / (lambda - mu);
}

DividedDifferenceSymbol::DividedDifferenceSymbol(const ScalarC1Function& f, const DiagonalOperator& b)
    : n_(b.size()), psi_(b.size() * b.size(), 0.0) {
  const auto lam = b.eigenvalues();
  std::vector<double> fv(n_);
  for (std::size_t j = 0; j < n_; ++j) fv[j] = f(lam[j]);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = 0; k < n_; ++k) {
      if (lam[j] != lam[k]) psi_[j * n_ + k] = (fv[j] - fv[k]) / (lam[j] - lam[k]);
    }
  }
}

ComplexMatrix DividedDifferenceSymbol::apply(const ComplexMatrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) {
    throw InvalidInput("schur_apply: matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                       ", diagonal operator has size " + std::to_string(n_));
  }
  ComplexMatrix out(x);
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] *= psi_[i];
  return out;
}

ComplexMatrix schur_apply(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x) {
  if (x.rows() != b.size() || x.cols() != b.size()) {
    throw InvalidInput("schur_apply: matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                       ", diagonal operator has size " + std::to_string(b.size()));
  }
  return DividedDifferenceSymbol(f, b).apply(x);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw InvalidInput("commutator: operands must be square of equal size");
  }
  return a * b - b * a;
}

ComplexMatrix commutator(const DiagonalOperator& b, const ComplexMatrix& x) {
  if (x.rows() != b.size() || x.cols() != b.size()) throw InvalidInput("commutator: size mismatch");
  ComplexMatrix out(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.rows(); ++j)
    for (std::size_t k = 0; k < x.cols(); ++k) out(j, k) = x(j, k) * (b[j] - b[k]);
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& x, const DiagonalOperator& b) { return commutator(b, x) * cplx{-1.0}; }

double verify_schur_commutator_identity(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x) {
  const ComplexMatrix lhs = schur_apply(f, b, commutator(b, x));
  const ComplexMatrix rhs = commutator(b.apply(f), x);
  return frobenius_distance(lhs, rhs);
}

double schur_identity_scale(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x) {
  double top = 0.0;
  for (double v : b.eigenvalues()) top = std::max(top, std::abs(f(v)));
  return top * x.frobenius_norm();
}

BlowupWitness multiplier_norm_lower_bound(const ScalarC1Function& f, const DiagonalOperator& b,
                                          std::span<const ComplexMatrix> witnesses, const SymmetricNormSpec& spec) {
  const DividedDifferenceSymbol symbol(f, b);
  std::optional<BlowupWitness> best;
  for (const auto& x : witnesses) {
    const double denom = norm_E(spec, x);
    if (denom == 0.0) continue;
    const double ratio = norm_E(spec, symbol.apply(x)) / denom;
    if (!best || ratio > best->ratio) best = BlowupWitness{b, x, spec, ratio};
  }
  if (!best) throw InvalidInput("multiplier_norm_lower_bound: every witness has zero norm");
  return *best;
}

ComplexMatrix dual_witness_transfer(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x_inf) {
  const ComplexMatrix y = schur_apply(f, b, x_inf);
  if (y.max_abs() == 0.0) throw NoWitness("dual_witness_transfer: M_f(B)(X) vanishes");
  const SvdResult svd = jacobi_svd(y);
  const std::size_t n = y.rows();
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = svd.U(i, 0) * std::conj(svd.V(j, 0));
  return out;
}

namespace {

template <class Linked>
std::vector<SpectralGroup> cluster(const DiagonalOperator& b, Linked linked) {
  const auto lam = b.eigenvalues();
  std::vector<std::size_t> order(lam.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return lam[a] < lam[c]; });
  std::vector<SpectralGroup> groups;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    if (pos == 0 || !linked(lam[order[pos - 1]], lam[i])) groups.push_back({0.0, {}});
    groups.back().indices.push_back(i);
  }
  for (auto& g : groups) {
    std::sort(g.indices.begin(), g.indices.end());
    double sum = 0.0;
    for (std::size_t i : g.indices) sum += lam[i];
    g.eigenvalue = sum / static_cast<double>(g.indices.size());
  }
  return groups;
}

}  // namespace

std::vector<SpectralGroup> group_spectrum(const DiagonalOperator& b, double tol) {
  if (!(tol >= 0.0)) throw InvalidInput("group_spectrum: tol must be >= 0");
  return cluster(b, [tol](double a, double c) { return c - a <= tol; });
}

std::vector<SpectralGroup> group_spectrum_relative(const DiagonalOperator& b, double rel_tol) {
  if (!(rel_tol >= 0.0)) throw InvalidInput("group_spectrum_relative: rel_tol must be >= 0");
  return cluster(b, [rel_tol](double a, double c) { return c - a <= rel_tol * std::max(std::abs(a), std::abs(c)); });
}

std::vector<SpectralGroup> group_spectrum(const DiagonalOperator& b) {
  double top = 0.0;
  for (double v : b.eigenvalues()) top = std::max(top, std::abs(v));
  return group_spectrum(b, 1e-12 * top);
}

ComplexMatrix pinch(const ComplexMatrix& x, std::span<const SpectralGroup> groups) {
  ComplexMatrix out(x.rows(), x.cols());
  for (const auto& g : groups)
    for (std::size_t i : g.indices)
      for (std::size_t j : g.indices) out(i, j) = x(i, j);
  return out;
}

}  // namespace schurlab
