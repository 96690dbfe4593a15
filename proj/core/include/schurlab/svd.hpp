#pragma once

#include <vector>

#include "schurlab/matrix.hpp"

namespace schurlab {

struct JacobiOptions {
  // A column pair is rotated only while |<a_i, a_j>| > pair_tol * |a_i| * |a_j|.
  double pair_tol = 1e-15;
  // Early stop once the off-diagonal Gram mass seen in a sweep drops below
  // (gram_tol * ||X||_F^2)^2.
  double gram_tol = 1e-14;
  int max_sweeps = 80;
};

// X = U diag(s) V*, with s nonincreasing and U, V having orthonormal columns.
// For an r x c input, U is r x k, V is c x k, k = min(r, c).
struct SvdResult {
  std::vector<double> s;
  ComplexMatrix U;
  ComplexMatrix V;
  int sweeps = 0;
};

// One-sided (Hestenes) Jacobi. Real inputs take a real-arithmetic path.
// Throws InvalidInput on non-finite entries and NumericError if the sweep
// limit is reached.
SvdResult jacobi_svd(const ComplexMatrix& x, const JacobiOptions& opts = {});

// Same iteration without accumulating singular vectors.
std::vector<double> jacobi_singular_values(const ComplexMatrix& x, const JacobiOptions& opts = {});

}  // namespace schurlab
