#include "schurlab/funcs.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include "schurlab/errors.hpp"

namespace schurlab {

Interval Interval::real_line() { return {-INFINITY, INFINITY, false, false}; }

bool Interval::contains(double t) const noexcept {
  if (std::isnan(t)) return false;
  const bool above = lo_closed ? t >= lo : t > lo;
  const bool below = hi_closed ? t <= hi : t < hi;
  return above && below;
}

std::string Interval::describe() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
  return os.str();
}

ScalarC1Function::ScalarC1Function(std::string label, Interval domain, std::function<double(double)> value,
                                   std::function<double(double)> derivative, std::vector<double> knots)
    : label_(std::move(label)),
      domain_(domain),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      knots_(std::move(knots)) {
  if (!value_ || !derivative_) throw InvalidInput("ScalarC1Function '" + label_ + "': missing evaluator");
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
}

void ScalarC1Function::require_in_domain(double t) const {
  if (!domain_.contains(t)) {
    std::ostringstream os;
    os.precision(17);
    os << label_ << ": argument " << t << " outside domain " << domain_.describe();
    throw DomainError(os.str());
  }
}

double ScalarC1Function::value(double t) const {
  require_in_domain(t);
  return value_(t);
}

double ScalarC1Function::derivative(double t) const {
  require_in_domain(t);
  return derivative_(t);
}

ScalarC1Function polynomial(std::vector<double> coeffs, std::string label) {
  if (label.empty()) {
    std::ostringstream os;
    os << "poly(";
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
    os << ")";
    label = os.str();
  }
  auto c = std::make_shared<const std::vector<double>>(std::move(coeffs));
  auto value = [c](double t) {
    double acc = 0.0;
    for (auto it = c->rbegin(); it != c->rend(); ++it) acc = acc * t + *it;
    return acc;
  };
  auto deriv = [c](double t) {
    double acc = 0.0;
    for (std::size_t i = c->size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * (*c)[i];
    return acc;
  };
  return ScalarC1Function(std::move(label), Interval::real_line(), value, deriv);
}

namespace {

// Trapezoid integral with plateau height `height` and flank width `width`,
// height * (1 - width) = 1.
struct ChiShape {
  double height;
  double width;

  double value(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t < width) return height * t * t / (2.0 * width);
    if (t <= 1.0 - width) return height * width / 2.0 + height * (t - width);
    const double r = 1.0 - t;
    return 1.0 - height * r * r / (2.0 * width);
  }

  double slope(double t) const {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    if (t < width) return height * t / width;
    if (t <= 1.0 - width) return height;
    return height * (1.0 - t) / width;
  }

  static ChiShape for_eps(double eps) {
    const double e = std::min(eps, 1.0);
    return {1.0 + e, e / (1.0 + e)};
  }
};

}  // namespace

ScalarC1Function chi_eps(double eps) {
  if (!(eps > 0.0)) throw InvalidInput("chi_eps: eps must be positive");
  const ChiShape shape = ChiShape::for_eps(eps);
  std::ostringstream label;
  label << "chi_eps(" << eps << ")";
  return ScalarC1Function(
      label.str(), Interval::real_line(), [shape](double t) { return shape.value(t); },
      [shape](double t) { return shape.slope(t); }, {0.0, shape.width, 1.0 - shape.width, 1.0});
}

GrowthSchedule::GrowthSchedule(std::vector<double> s, std::vector<double> q) : s_(std::move(s)), q_(std::move(q)) {
  if (s_.size() != q_.size()) throw InvalidInput("schedule: s and q differ in length");
  if (s_.size() < 2) throw InvalidInput("schedule: need at least two nodes");
  if (s_[0] != 0.0) throw InvalidInput("schedule: s_0 must be 0");
  if (q_[0] != 1.0) throw InvalidInput("schedule: q_0 must be 1");
  alpha_ = 0.0;
  for (std::size_t m = 1; m < s_.size(); ++m) {
    if (!std::isfinite(s_[m]) || !(s_[m] > s_[m - 1])) {
      throw InvalidInput("schedule: s must be strictly increasing (index " + std::to_string(m) + ")");
    }
    if (!std::isfinite(q_[m]) || !(q_[m] >= q_[m - 1])) {
      throw InvalidInput("schedule: q must be increasing (index " + std::to_string(m) + ")");
    }
    alpha_ = std::max(alpha_, (std::log(q_[m]) - std::log(q_[m - 1])) / (s_[m] - s_[m - 1]));
  }
  // rounding in log() can land a boundary ratio of exactly 1 just below it
  if (alpha_ >= 1.0 - 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "schedule: alpha = " << alpha_ << " is not < 1";
    throw ScheduleInfeasible(os.str());
  }
}

GrowthSchedule build_schedule(std::vector<double> s, std::vector<double> q) {
  return GrowthSchedule(std::move(s), std::move(q));
}

namespace {

class LogGrowth {
 public:
  explicit LogGrowth(const GrowthSchedule& sched)
      : s_(sched.s()), chi_(ChiShape::for_eps(sched.alpha() > 0.0 ? 1.0 / sched.alpha() - 1.0 : 1.0)) {
    logq_.reserve(sched.q().size());
    for (double q : sched.q()) logq_.push_back(std::log(q));
  }

  // H(t) and H'(t) for t >= 0.
  std::pair<double, double> eval(double t) const {
    const std::size_t last = s_.size() - 1;
    if (t >= s_[last]) {
      const double len = s_[last] - s_[last - 1];
      const double inc = logq_[last] - logq_[last - 1];
      const double periods = (t - s_[last]) / len;
      const double whole = std::floor(periods);
      const double u = periods - whole;
      return {logq_[last] + (whole + chi_.value(u)) * inc, chi_.slope(u) * inc / len};
    }
    const auto k = static_cast<std::size_t>(std::upper_bound(s_.begin(), s_.end(), t) - s_.begin());
    // s_{k-1} <= t < s_k: only the k-th term is partially active
    const double len = s_[k] - s_[k - 1];
    const double inc = logq_[k] - logq_[k - 1];
    const double u = (t - s_[k - 1]) / len;
    return {logq_[k - 1] + chi_.value(u) * inc, chi_.slope(u) * inc / len};
  }

  std::vector<double> knots(std::size_t extra_periods) const {
    std::vector<double> out;
    const double offsets[] = {0.0, chi_.width, 1.0 - chi_.width};
    for (std::size_t m = 1; m < s_.size(); ++m)
      for (double o : offsets) out.push_back(s_[m - 1] + o * (s_[m] - s_[m - 1]));
    const std::size_t last = s_.size() - 1;
    const double len = s_[last] - s_[last - 1];
    for (std::size_t j = 0; j <= extra_periods; ++j)
      for (double o : offsets) out.push_back(s_[last] + (static_cast<double>(j) + o) * len);
    return out;
  }

 private:
  std::vector<double> s_;
  std::vector<double> logq_;
  ChiShape chi_;
};

}  // namespace

ScalarC1Function build_h(const GrowthSchedule& schedule) {
  auto growth = std::make_shared<const LogGrowth>(schedule);
  auto value = [growth](double t) { return std::exp(growth->eval(std::abs(t)).first); };
  auto deriv = [growth](double t) {
    const auto [H, dH] = growth->eval(std::abs(t));
    const double d = dH * std::exp(H);
    return t < 0.0 ? -d : d;
  };
  std::vector<double> knots;
  for (double k : growth->knots(64)) {
    knots.push_back(k);
    knots.push_back(-k);
  }
  return ScalarC1Function("h", Interval::real_line(), value, deriv, std::move(knots));
}

ScalarC1Function build_f(const ScalarC1Function& h) {
  if (!(h.value(0.0) > 0.0)) throw InvalidInput("build_f: h(0) must be positive");
  auto value = [h](double t) {
    if (t == 0.0) return 0.0;
    const double a = std::abs(t);
    return a / h.value(std::log(a));
  };
  // f is even, so f' is odd
  auto deriv = [h](double t) {
    if (t == 0.0) return 0.0;
    const double lg = std::log(std::abs(t));
    const double hv = h.value(lg);
    const double d = (1.0 - h.derivative(lg) / hv) / hv;
    return t < 0.0 ? -d : d;
  };
  std::vector<double> knots{0.0};
  for (double k : h.knots()) {
    if (k <= 0.0) continue;
    const double t = std::exp(-k);
    if (t > 0.0 && t < 1.0) {
      knots.push_back(t);
      knots.push_back(-t);
    }
  }
  return ScalarC1Function("f", Interval::open(-1.0, 1.0), value, deriv, std::move(knots));
}

C1Report verify_c1(const ScalarC1Function& f, std::span<const double> grid, double step) {
  if (!(step > 0.0)) throw InvalidInput("verify_c1: step must be positive");
  C1Report r;
  const auto& knots = f.knots();
  for (double t : grid) {
    const double tp = t + step, tm = t - step;
    if (!f.domain().contains(t) || !f.domain().contains(tp) || !f.domain().contains(tm)) {
      ++r.skipped;
      continue;
    }
    const auto it = std::lower_bound(knots.begin(), knots.end(), tm);
    if (it != knots.end() && *it <= tp) {
      ++r.skipped;
      continue;
    }
    const double fp = f.value(tp), fm = f.value(tm), f0 = f.value(t);
    const double fd = (fp - fm) / (2.0 * step);
    const double err = std::abs(fd - f.derivative(t));
    // smooth region: error ~ f''' h^2, far below |f''| h; rounding ~ eps |f| / h
    const double allowed = std::abs(fp - 2.0 * f0 + fm) / step +
                           16.0 * DBL_EPSILON * std::max({std::abs(fp), std::abs(f0), std::abs(fm)}) / step +
                           DBL_MIN;
    ++r.checked;
    if (err > r.max_error) {
      r.max_error = err;
      r.worst_t = t;
    }
    r.max_excess = std::max(r.max_excess, err / allowed);
    if (err > allowed) {
      r.passed = false;
      if (r.flagged.size() < 32) r.flagged.push_back(t);
    }
  }
  return r;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

}  // namespace schurlab
