#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "schurlab/matrix.hpp"

namespace schurlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Nonincreasing, nonnegative, finite. s(x) of a matrix, or x* of a sequence.
class SingularValueSequence {
 public:
  SingularValueSequence() = default;
  // Throws InvalidInput unless the invariants hold.
  explicit SingularValueSequence(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  // Zero beyond the stored length.
  double at_padded(std::size_t i) const noexcept { return i < values_.size() ? values_[i] : 0.0; }

  bool operator==(const SingularValueSequence&) const = default;

 private:
  std::vector<double> values_;
};

SingularValueSequence decreasing_rearrangement(std::span<const double> v);

// g ≺≺ f: every partial sum of g* is dominated by the matching partial sum of f*.
// The shorter sequence is zero-padded.
bool submajorizes(const SingularValueSequence& f, const SingularValueSequence& g, double rel_tol = 0.0);

SingularValueSequence singular_values(const ComplexMatrix& x);

enum class NormKind { schatten, kyfan, orlicz, lorentz };

// Young function for an Orlicz norm. Named families serialize; `custom` does not.
struct OrliczFunction {
  std::string family;  // "power", "power_log", "exp", "custom"
  double p = 1.0;
  std::function<double(double)> eval;

  static OrliczFunction power(double p);      // u^p
  static OrliczFunction power_log(double p);  // u^p log(e + u)
  static OrliczFunction exp_minus_one();      // e^u - 1
  static OrliczFunction custom(std::string name, std::function<double(double)> fn);
};

class SymmetricNormSpec {
 public:
  static SymmetricNormSpec schatten(double p, std::string label = {});
  static SymmetricNormSpec kyfan(std::size_t k, std::string label = {});
  // weights nonincreasing, positive, first weight 1; zero beyond the list.
  static SymmetricNormSpec lorentz(std::vector<double> weights, std::string label = {});
  // Skips weight validation. Only useful for exercising verify_norm_axioms.
  static SymmetricNormSpec lorentz_unchecked(std::vector<double> weights, std::string label = {});
  static SymmetricNormSpec orlicz(OrliczFunction m, std::string label = {});

  NormKind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  std::size_t k() const noexcept { return k_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const OrliczFunction& orlicz_function() const noexcept { return orlicz_; }
  const std::string& label() const noexcept { return label_; }

  // Short form accepted by parse_space, e.g. "schatten:inf", "kyfan:3".
  std::string describe() const;

 private:
  NormKind kind_ = NormKind::schatten;
  double p_ = kInf;
  std::size_t k_ = 1;
  std::vector<double> weights_;
  OrliczFunction orlicz_;
  std::string label_;
};

// Parses "schatten:<p|inf>", "kyfan:<k>", "lorentz:<w1,w2,...>",
// "orlicz:power:<p>", "orlicz:power_log:<p>", "orlicz:exp".
SymmetricNormSpec parse_space(const std::string& text);

double norm_E(const SymmetricNormSpec& spec, const SingularValueSequence& s);
double norm_E(const SymmetricNormSpec& spec, const ComplexMatrix& x);
// Norm of an arbitrary real vector through its decreasing rearrangement.
double norm_of_vector(const SymmetricNormSpec& spec, std::span<const double> v);

struct AxiomViolation {
  std::string axiom;
  std::vector<double> x;
  std::vector<double> y;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomReport {
  std::size_t trials = 0;
  std::size_t violation_count = 0;
  std::vector<AxiomViolation> violations;  // first few witnesses
  bool ok() const noexcept { return violation_count == 0; }
};

// Randomized homogeneity / triangle / rearrangement / submajorization checks.
AxiomReport verify_norm_axioms(const SymmetricNormSpec& spec, std::size_t trials, std::uint64_t seed);

enum class BlockMode { sup, sum };

std::string to_string(BlockMode mode);
BlockMode parse_block_mode(const std::string& text);

struct BlockFamilyReport {
  bool passed = false;
  std::size_t n = 0;
  double eps = 0.0;
  BlockMode mode = BlockMode::sup;
  double x0_norm = 0.0;
  double copies_norm = 0.0;  // ||x_1 + ... + x_n||_E
  double lower = 0.0;        // required lower bound at the extremal coefficients
  double upper = 0.0;        // required upper bound at the extremal coefficients
  std::string detail;
};

// n disjoint equidistributed copies of x0. Throws InvalidInput unless ||x0||_E = 1 within tol.
BlockFamilyReport verify_block_family(const SymmetricNormSpec& spec, const SingularValueSequence& x0,
                                      std::size_t n, double eps, BlockMode mode, double tol = 1e-10);

}  // namespace schurlab
