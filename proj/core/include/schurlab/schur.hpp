#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "schurlab/funcs.hpp"
#include "schurlab/matrix.hpp"
#include "schurlab/symnorm.hpp"

namespace schurlab {

// Real diagonal matrix diag(lambda_1, ..., lambda_n). Spectral projections are
// the coordinate projections.
class DiagonalOperator {
 public:
  DiagonalOperator() = default;
  explicit DiagonalOperator(std::vector<double> eigenvalues);

  std::size_t size() const noexcept { return eig_.size(); }
  std::span<const double> eigenvalues() const noexcept { return eig_; }
  double operator[](std::size_t i) const noexcept { return eig_[i]; }

  ComplexMatrix to_matrix() const;
  DiagonalOperator scaled(double c) const;
  // f(B) = diag(f(lambda_j)).
  DiagonalOperator apply(const ScalarC1Function& f) const;
  SingularValueSequence singular_values() const;

 private:
  std::vector<double> eig_;
};

// psi_f(lambda, mu) = (f(lambda) - f(mu)) / (lambda - mu), and 0 when lambda == mu.
double divided_difference(const ScalarC1Function& f, double lambda, double mu);

// Cached psi-matrix of M_f(B).
class DividedDifferenceSymbol {
 public:
  DividedDifferenceSymbol(const ScalarC1Function& f, const DiagonalOperator& b);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t j, std::size_t k) const noexcept { return psi_[j * n_ + k]; }
  ComplexMatrix apply(const ComplexMatrix& x) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> psi_;
};

// [M_f(B) X]_{jk} = psi_f(lambda_j, lambda_k) x_{jk}.
ComplexMatrix schur_apply(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
// [B, X] and [X, B] for diagonal B in O(n^2).
ComplexMatrix commutator(const DiagonalOperator& b, const ComplexMatrix& x);
ComplexMatrix commutator(const ComplexMatrix& x, const DiagonalOperator& b);

// Frobenius norm of M_f(B)([B, X]) - [f(B), X].
double verify_schur_commutator_identity(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x);
// max_j |f(lambda_j)| * ||X||_F, the size of rounding in either side of the identity.
double schur_identity_scale(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x);

struct BlowupWitness {
  DiagonalOperator B;
  ComplexMatrix X;
  SymmetricNormSpec spec;
  double ratio = 0.0;  // ||M_f(B) X||_E / ||X||_E
};

// Best certified lower bound on ||M_f(B)||_{S^E -> S^E} among the candidates.
// Throws InvalidInput if every candidate is zero.
BlowupWitness multiplier_norm_lower_bound(const ScalarC1Function& f, const DiagonalOperator& b,
                                          std::span<const ComplexMatrix> witnesses, const SymmetricNormSpec& spec);

// Rank-one X1 = u v* from the top singular pair of M_f(B)(X_inf), ||X1||_1 = 1.
// By trace duality ||M_f(B)(X1)||_1 >= ||M_f(B)(X_inf)||_inf / ||X_inf||_inf.
// Throws NoWitness when M_f(B)(X_inf) = 0.
ComplexMatrix dual_witness_transfer(const ScalarC1Function& f, const DiagonalOperator& b, const ComplexMatrix& x_inf);

struct SpectralGroup {
  double eigenvalue;                 // mean of the members
  std::vector<std::size_t> indices;  // zero-based, ascending
};

// Sorted single-linkage clustering: neighbours within tol share a group.
// Groups are returned in ascending eigenvalue order.
std::vector<SpectralGroup> group_spectrum(const DiagonalOperator& b, double tol);
// tol = 1e-12 * max |lambda|.
std::vector<SpectralGroup> group_spectrum(const DiagonalOperator& b);
// Neighbours a < b share a group when b - a <= rel_tol * max(|a|, |b|).
// Keeps geometrically decaying spectra apart at every scale.
std::vector<SpectralGroup> group_spectrum_relative(const DiagonalOperator& b, double rel_tol);

// sum_t Q_t X Q_t over the spectral groups.
ComplexMatrix pinch(const ComplexMatrix& x, std::span<const SpectralGroup> groups);

}  // namespace schurlab
