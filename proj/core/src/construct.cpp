#include "schurlab/construct.hpp"

#include <cmath>
#include <string>

#include "schurlab/errors.hpp"

namespace schurlab {

PaperMatrices build_paper_matrices(int m) {
  if (m < 3) throw InvalidInput("build_paper_matrices: m must be >= 3, got " + std::to_string(m));
  if (m > kMaxPaperM) {
    throw SizeLimitError("build_paper_matrices: m = " + std::to_string(m) + " exceeds the cap " +
                         std::to_string(kMaxPaperM));
  }
  const auto n = static_cast<std::size_t>(m);
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = std::exp(-static_cast<double>(j + 1));

  ComplexMatrix v(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      const double gap = static_cast<double>(k) - static_cast<double>(j);
      v(j, k) = 1.0 / (gap * (d[j] + d[k]));
    }
  }

  ComplexMatrix a(2 * n, 2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      a(j, n + k) = v(j, k);
      a(n + j, k) = -v(j, k);
    }
  }

  std::vector<double> b(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    b[j] = d[j];
    b[n + j] = -d[j];
  }
  return {m, DiagonalOperator(std::move(d)), std::move(v), std::move(a), DiagonalOperator(std::move(b))};
}

ComplexMatrix commutator_BA(const PaperMatrices& pm) { return commutator(pm.B, pm.A); }

TensorLift::TensorLift(std::size_t n, SingularValueSequence x0) : n_(n), x0_(std::move(x0)) {}

void TensorLift::require_size(std::size_t rows, std::size_t cols) const {
  if (rows != n_ || cols != n_) {
    throw InvalidInput("tensor lift: expected " + std::to_string(n_) + "x" + std::to_string(n_) + ", got " +
                       std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix TensorLift::phi(const ComplexMatrix& x) const {
  require_size(x.rows(), x.cols());
  return kronecker(x, ComplexMatrix::identity(x0_.size()));
}

DiagonalOperator TensorLift::phi(const DiagonalOperator& b) const {
  require_size(b.size(), b.size());
  std::vector<double> out;
  out.reserve(k_n());
  for (double v : b.eigenvalues())
    for (std::size_t k = 0; k < x0_.size(); ++k) out.push_back(v);
  return DiagonalOperator(std::move(out));
}

ComplexMatrix TensorLift::psi(const ComplexMatrix& x) const {
  require_size(x.rows(), x.cols());
  return kronecker(x, ComplexMatrix::diagonal(x0_.values()));
}

SingularValueSequence TensorLift::psi_singular_values(const SingularValueSequence& s) const {
  std::vector<double> out;
  out.reserve(s.size() * x0_.size());
  for (double a : s.values())
    for (double b : x0_.values()) out.push_back(a * b);
  return decreasing_rearrangement(out);
}

TensorLift make_tensor_lift(std::size_t n, const SingularValueSequence& x0) {
  if (n == 0) throw InvalidInput("make_tensor_lift: n must be positive");
  if (x0.empty() || x0[0] == 0.0) throw InvalidInput("make_tensor_lift: x0 must be nonzero");
  return TensorLift(n, x0);
}

double verify_intertwining(const TensorLift& lift, const ScalarC1Function& f, const DiagonalOperator& b,
                           const ComplexMatrix& x) {
  const ComplexMatrix lhs = lift.psi(schur_apply(f, b, x));
  const ComplexMatrix rhs = schur_apply(f, lift.phi(b), lift.psi(x));
  return frobenius_distance(lhs, rhs);
}

SandwichReport verify_norm_sandwich(const TensorLift& lift, const SymmetricNormSpec& spec, const ComplexMatrix& x,
                                    double eps, BlockMode mode, double rel_tol) {
  const BlockFamilyReport family = verify_block_family(spec, lift.x0(), lift.n(), eps, mode);
  if (!family.passed) {
    throw InvalidInput("verify_norm_sandwich: block family check failed for " + spec.describe() + ": " +
                       family.detail);
  }
  SandwichReport r;
  r.mode = mode;
  r.eps = eps;
  const SingularValueSequence s = singular_values(x);
  r.x_norm = norm_E(mode == BlockMode::sup ? SymmetricNormSpec::schatten(kInf) : SymmetricNormSpec::schatten(1.0), s);
  r.psi_norm = norm_E(spec, lift.psi_singular_values(s));
  if (mode == BlockMode::sup) {
    r.lower = r.x_norm;
    r.upper = (1.0 + eps) * r.x_norm;
  } else {
    r.lower = (1.0 - eps) * r.x_norm;
    r.upper = r.x_norm;
  }
  r.passed = r.psi_norm >= r.lower * (1.0 - rel_tol) && r.psi_norm <= r.upper * (1.0 + rel_tol);
  return r;
}

}  // namespace schurlab
