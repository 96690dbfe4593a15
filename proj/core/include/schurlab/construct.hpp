#pragma once

#include <cstddef>

#include "schurlab/funcs.hpp"
#include "schurlab/matrix.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/symnorm.hpp"

namespace schurlab {

inline constexpr int kMaxPaperM = 256;

// D = diag(e^-1, ..., e^-m), v_jk = 1 / ((k - j)(e^-j + e^-k)) off the diagonal,
// A = [[0, V], [-V, 0]], B = diag(D, -D). V is antisymmetric, so A is symmetric.
struct PaperMatrices {
  int m = 0;
  DiagonalOperator D;
  ComplexMatrix V;
  ComplexMatrix A;
  DiagonalOperator B;
};

// Throws InvalidInput for m < 3 and SizeLimitError for m > kMaxPaperM.
PaperMatrices build_paper_matrices(int m);

// [B, A] = [[0, H], [H, 0]] with H_jk = 1 / (k - j).
ComplexMatrix commutator_BA(const PaperMatrices& pm);

// Phi_n(X) = X (x) I and Psi_n(X) = X (x) diag(x0), both of size n * |x0|.
class TensorLift {
 public:
  TensorLift(std::size_t n, SingularValueSequence x0);

  std::size_t n() const noexcept { return n_; }
  const SingularValueSequence& x0() const noexcept { return x0_; }
  std::size_t k_n() const noexcept { return n_ * x0_.size(); }

  ComplexMatrix phi(const ComplexMatrix& x) const;
  DiagonalOperator phi(const DiagonalOperator& b) const;
  ComplexMatrix psi(const ComplexMatrix& x) const;
  // s(Psi(X)) is the rearrangement of s_i(X) * x0_k.
  SingularValueSequence psi_singular_values(const SingularValueSequence& s) const;

 private:
  void require_size(std::size_t rows, std::size_t cols) const;

  std::size_t n_;
  SingularValueSequence x0_;
};

// Throws InvalidInput if n == 0 or x0 is empty or identically zero.
TensorLift make_tensor_lift(std::size_t n, const SingularValueSequence& x0);

// Frobenius norm of Psi(M_f(B) X) - M_f(Phi(B)) Psi(X).
double verify_intertwining(const TensorLift& lift, const ScalarC1Function& f, const DiagonalOperator& b,
                           const ComplexMatrix& x);

struct SandwichReport {
  bool passed = false;
  BlockMode mode = BlockMode::sup;
  double eps = 0.0;
  double x_norm = 0.0;    // ||X||_inf (sup) or ||X||_1 (sum)
  double psi_norm = 0.0;  // ||Psi(X)||_E
  double lower = 0.0;
  double upper = 0.0;
};

// sup: ||X||_inf <= ||Psi(X)||_E <= (1 + eps)||X||_inf
// sum: (1 - eps)||X||_1 <= ||Psi(X)||_E <= ||X||_1
// Both sides get a relative slack of rel_tol. Throws InvalidInput unless
// verify_block_family passes for (spec, x0, n, eps, mode).
SandwichReport verify_norm_sandwich(const TensorLift& lift, const SymmetricNormSpec& spec, const ComplexMatrix& x,
                                    double eps, BlockMode mode, double rel_tol = 1e-12);

}  // namespace schurlab
