#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace schurlab {

struct Interval {
  double lo;
  double hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval real_line();
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  bool contains(double t) const noexcept;
  std::string describe() const;
};

// Real C^1 function with explicit derivative. Immutable; copies share state.
// `knots` lists points where the second derivative may jump; derivative
// certification skips a neighbourhood of each.
class ScalarC1Function {
 public:
  ScalarC1Function(std::string label, Interval domain, std::function<double(double)> value,
                   std::function<double(double)> derivative, std::vector<double> knots = {});

  // Both throw DomainError outside the domain.
  double operator()(double t) const { return value(t); }
  double value(double t) const;
  double derivative(double t) const;

  const Interval& domain() const noexcept { return domain_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<double>& knots() const noexcept { return knots_; }

 private:
  void require_in_domain(double t) const;

  std::string label_;
  Interval domain_;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  std::vector<double> knots_;
};

// sum_i coeffs[i] t^i on the real line.
ScalarC1Function polynomial(std::vector<double> coeffs, std::string label = {});

// C^1 step: 0 for t <= 0, 1 for t >= 1, 0 <= chi' <= 1 + eps.
// chi' is a symmetric trapezoid of height 1 + min(eps, 1); for eps > 1 the
// trapezoid with plateau [eps/(1+eps), 1/(1+eps)] would be empty, so the
// triangle (eps = 1) is used, which still satisfies the slope bound.
ScalarC1Function chi_eps(double eps);

class GrowthSchedule {
 public:
  // s strictly increasing from 0, q increasing from 1; alpha < 1.
  // Throws InvalidInput / ScheduleInfeasible.
  GrowthSchedule(std::vector<double> s, std::vector<double> q);

  const std::vector<double>& s() const noexcept { return s_; }
  const std::vector<double>& q() const noexcept { return q_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return s_.size(); }

 private:
  std::vector<double> s_;
  std::vector<double> q_;
  double alpha_ = 0.0;
};

GrowthSchedule build_schedule(std::vector<double> s, std::vector<double> q);

// h = exp(H(|t|)) with H(s_m) = log q_m; even, increasing on (0, inf), 0 <= h'/h <= 1.
// Past the last node the final segment is repeated periodically.
ScalarC1Function build_h(const GrowthSchedule& schedule);

// f(t) = |t| / h(log |t|) on (-1, 1), f(0) = 0, f'(0) = 0.
ScalarC1Function build_f(const ScalarC1Function& h);

struct C1Report {
  bool passed = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  double max_error = 0.0;    // max |centered difference - derivative|
  double worst_t = 0.0;
  double max_excess = 0.0;   // max error / allowed, <= 1 when passing
  std::vector<double> flagged;
};

// Compares centered differences with the derivative evaluator on `grid`.
// Points within `step` of a knot or of the domain boundary are skipped.
C1Report verify_c1(const ScalarC1Function& f, std::span<const double> grid, double step);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace schurlab
