#include "schurlab/symnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "schurlab/errors.hpp"
#include "schurlab/svd.hpp"

namespace schurlab {

SingularValueSequence::SingularValueSequence(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw InvalidInput("SingularValueSequence: entry " + std::to_string(i) + " is negative or non-finite");
    }
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw InvalidInput("SingularValueSequence: entries must be nonincreasing (index " + std::to_string(i) + ")");
    }
  }
}

SingularValueSequence decreasing_rearrangement(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw InvalidInput("decreasing_rearrangement: non-finite entry");
    out[i] = std::abs(v[i]);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return SingularValueSequence(std::move(out));
}

bool submajorizes(const SingularValueSequence& f, const SingularValueSequence& g, double rel_tol) {
  const std::size_t len = std::max(f.size(), g.size());
  double sf = 0.0, sg = 0.0;
  for (std::size_t t = 0; t < len; ++t) {
    sf += f.at_padded(t);
    sg += g.at_padded(t);
    if (sg > sf + rel_tol * sf) return false;
  }
  return true;
}

SingularValueSequence singular_values(const ComplexMatrix& x) {
  return SingularValueSequence(jacobi_singular_values(x));
}

// --- Orlicz families ---------------------------------------------------------

OrliczFunction OrliczFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("orlicz power: need finite p >= 1");
  return {"power", p, [p](double u) { return std::pow(u, p); }};
}

OrliczFunction OrliczFunction::power_log(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("orlicz power_log: need finite p >= 1");
  return {"power_log", p, [p](double u) { return std::pow(u, p) * std::log(std::numbers::e + u); }};
}

OrliczFunction OrliczFunction::exp_minus_one() {
  return {"exp", 1.0, [](double u) { return std::expm1(u); }};
}

OrliczFunction OrliczFunction::custom(std::string name, std::function<double(double)> fn) {
  if (!fn) throw InvalidInput("orlicz custom: empty evaluator");
  OrliczFunction m{"custom", 1.0, std::move(fn)};
  if (!name.empty()) m.family = "custom:" + name;
  return m;
}

// --- SymmetricNormSpec -------------------------------------------------------

SymmetricNormSpec SymmetricNormSpec::schatten(double p, std::string label) {
  if (std::isnan(p) || p < 1.0) throw InvalidInput("schatten: p must lie in [1, inf]");
  SymmetricNormSpec s;
  s.kind_ = NormKind::schatten;
  s.p_ = p;
  s.label_ = std::move(label);
  return s;
}

SymmetricNormSpec SymmetricNormSpec::kyfan(std::size_t k, std::string label) {
  if (k < 1) throw InvalidInput("kyfan: k must be >= 1");
  SymmetricNormSpec s;
  s.kind_ = NormKind::kyfan;
  s.k_ = k;
  s.label_ = std::move(label);
  return s;
}

SymmetricNormSpec SymmetricNormSpec::lorentz(std::vector<double> weights, std::string label) {
  if (weights.empty()) throw InvalidInput("lorentz: empty weight list");
  if (std::abs(weights.front() - 1.0) > 1e-12) throw InvalidInput("lorentz: first weight must be 1");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] <= 0.0) throw InvalidInput("lorentz: weights must be positive");
    if (i > 0 && weights[i] > weights[i - 1]) throw InvalidInput("lorentz: weights must be nonincreasing");
  }
  return lorentz_unchecked(std::move(weights), std::move(label));
}

SymmetricNormSpec SymmetricNormSpec::lorentz_unchecked(std::vector<double> weights, std::string label) {
  SymmetricNormSpec s;
  s.kind_ = NormKind::lorentz;
  s.weights_ = std::move(weights);
  s.label_ = std::move(label);
  return s;
}

SymmetricNormSpec SymmetricNormSpec::orlicz(OrliczFunction m, std::string label) {
  if (!m.eval) throw InvalidInput("orlicz: missing Young function");
  SymmetricNormSpec s;
  s.kind_ = NormKind::orlicz;
  s.orlicz_ = std::move(m);
  s.label_ = std::move(label);
  return s;
}

namespace {

std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

double parse_number(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (!is || !is.eof()) throw InvalidInput("cannot parse number '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::string SymmetricNormSpec::describe() const {
  switch (kind_) {
    case NormKind::schatten:
      return "schatten:" + format_number(p_);
    case NormKind::kyfan:
      return "kyfan:" + std::to_string(k_);
    case NormKind::lorentz: {
      std::string out = "lorentz:";
      for (std::size_t i = 0; i < weights_.size(); ++i) out += (i ? "," : "") + format_number(weights_[i]);
      return out;
    }
    case NormKind::orlicz:
      if (orlicz_.family == "exp") return "orlicz:exp";
      if (orlicz_.family == "power" || orlicz_.family == "power_log")
        return "orlicz:" + orlicz_.family + ":" + format_number(orlicz_.p);
      return "orlicz:" + orlicz_.family;
  }
  return {};
}

SymmetricNormSpec parse_space(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() < 2) throw InvalidInput("space '" + text + "': expected kind:parameters");
  const std::string& kind = parts[0];
  if (kind == "schatten" && parts.size() == 2) return SymmetricNormSpec::schatten(parse_number(parts[1]));
  if (kind == "kyfan" && parts.size() == 2) {
    const double k = parse_number(parts[1]);
    if (!(k >= 1.0) || k != std::floor(k) || !std::isfinite(k)) throw InvalidInput("kyfan: k must be a positive integer");
    return SymmetricNormSpec::kyfan(static_cast<std::size_t>(k));
  }
  if (kind == "lorentz" && parts.size() == 2) {
    std::vector<double> w;
    for (const auto& item : split(parts[1], ',')) w.push_back(parse_number(item));
    return SymmetricNormSpec::lorentz(std::move(w));
  }
  if (kind == "orlicz") {
    if (parts.size() == 2 && parts[1] == "exp") return SymmetricNormSpec::orlicz(OrliczFunction::exp_minus_one());
    if (parts.size() == 3 && parts[1] == "power") return SymmetricNormSpec::orlicz(OrliczFunction::power(parse_number(parts[2])));
    if (parts.size() == 3 && parts[1] == "power_log")
      return SymmetricNormSpec::orlicz(OrliczFunction::power_log(parse_number(parts[2])));
  }
  throw InvalidInput("unrecognised space '" + text + "'");
}

// --- norms -------------------------------------------------------------------

namespace {

double schatten_norm(double p, std::span<const double> s) {
  if (s.empty()) return 0.0;
  const double top = s.front();
  if (std::isinf(p)) return top;
  if (p == 1.0) {
    double sum = 0.0;
    for (double v : s) sum += v;
    return sum;
  }
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : s) sum += std::pow(v / top, p);
  return top * std::pow(sum, 1.0 / p);
}

double luxemburg_norm(const OrliczFunction& m, std::span<const double> s) {
  if (s.empty() || s.front() == 0.0) return 0.0;
  auto modular = [&](double lambda) {
    double sum = 0.0;
    for (double v : s) {
      if (v == 0.0) break;
      sum += m.eval(v / lambda);
    }
    return sum;
  };
  double hi = s.front();
  double lo = s.front();
  int expansions = 0;
  while (!(modular(hi) <= 1.0)) {
    hi *= 2.0;
    if (++expansions > 2100 || !std::isfinite(hi)) {
      throw NumericError("orlicz '" + m.family + "': no lambda with modular <= 1 (last lambda " + format_number(hi) + ")");
    }
  }
  expansions = 0;
  while (modular(lo) <= 1.0) {
    lo *= 0.5;
    if (++expansions > 2100 || lo == 0.0) {
      throw NumericError("orlicz '" + m.family + "': modular stays <= 1 as lambda -> 0; Young function is bounded");
    }
  }
  int iterations = 0;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (modular(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
    if (++iterations > 400) {
      throw NumericError("orlicz '" + m.family + "': bisection stalled at [" + format_number(lo) + ", " +
                         format_number(hi) + "]");
    }
  }
  return hi;
}

}  // namespace

double norm_E(const SymmetricNormSpec& spec, const SingularValueSequence& seq) {
  const auto s = seq.values();
  switch (spec.kind()) {
    case NormKind::schatten:
      return schatten_norm(spec.p(), s);
    case NormKind::kyfan: {
      double sum = 0.0;
      for (std::size_t i = 0; i < std::min(spec.k(), s.size()); ++i) sum += s[i];
      return sum;
    }
    case NormKind::lorentz: {
      const auto& w = spec.weights();
      double sum = 0.0;
      for (std::size_t i = 0; i < std::min(w.size(), s.size()); ++i) sum += w[i] * s[i];
      return sum;
    }
    case NormKind::orlicz:
      return luxemburg_norm(spec.orlicz_function(), s);
  }
  return 0.0;
}

double norm_E(const SymmetricNormSpec& spec, const ComplexMatrix& x) { return norm_E(spec, singular_values(x)); }

double norm_of_vector(const SymmetricNormSpec& spec, std::span<const double> v) {
  return norm_E(spec, decreasing_rearrangement(v));
}

// --- axiom verification ------------------------------------------------------

namespace {

class AxiomProbe {
 public:
  AxiomProbe(const SymmetricNormSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

  std::vector<double> random_vector(std::size_t len) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> exponent(-2, 2);
    const double scale = std::pow(10.0, exponent(rng_));
    std::vector<double> v(len);
    for (auto& x : v) {
      x = unit(rng_) < 0.15 ? 0.0 : scale * unit(rng_);
      if (unit(rng_) < 0.5) x = -x;
    }
    return v;
  }

  // g ≺≺ f from Robin-Hood transfers followed by entrywise shrinking.
  std::vector<double> submajorized_by(std::vector<double> f) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (f.size() >= 2) {
      std::uniform_int_distribution<std::size_t> idx(0, f.size() - 1);
      const int transfers = 1 + static_cast<int>(f.size());
      for (int t = 0; t < transfers; ++t) {
        std::size_t a = idx(rng_), b = idx(rng_);
        if (a == b) continue;
        if (f[a] < f[b]) std::swap(a, b);
        const double delta = 0.5 * (f[a] - f[b]) * unit(rng_);
        f[a] -= delta;
        f[b] += delta;
      }
    }
    for (auto& x : f)
      if (unit(rng_) < 0.3) x *= unit(rng_);
    return f;
  }

  void run_trial(AxiomReport& report) {
    std::uniform_int_distribution<std::size_t> len_dist(1, 8);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    const auto x = random_vector(len_dist(rng_));
    auto y = random_vector(len_dist(rng_));
    const double nx = norm_of_vector(spec_, x);
    const double ny = norm_of_vector(spec_, y);

    const double c = coef(rng_);
    auto cx = x;
    for (auto& v : cx) v *= c;
    const double ncx = norm_of_vector(spec_, cx);
    check(report, "homogeneity", std::abs(ncx - std::abs(c) * nx) <= kTol * std::abs(c) * nx + kAbs, x, {c}, ncx,
          std::abs(c) * nx);

    std::vector<double> sum(std::max(x.size(), y.size()), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
    for (std::size_t i = 0; i < y.size(); ++i) sum[i] += y[i];
    const double nsum = norm_of_vector(spec_, sum);
    check(report, "triangle", nsum <= (nx + ny) * (1.0 + kTol) + kAbs, x, y, nsum, nx + ny);

    auto perm = x;
    std::shuffle(perm.begin(), perm.end(), rng_);
    for (auto& v : perm)
      if (coef(rng_) < 0.0) v = -v;
    const double nperm = norm_of_vector(spec_, perm);
    check(report, "rearrangement", std::abs(nperm - nx) <= kTol * nx + kAbs, x, perm, nperm, nx);

    std::vector<double> fabs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fabs[i] = std::abs(x[i]);
    const auto g = submajorized_by(fabs);
    if (submajorizes(decreasing_rearrangement(fabs), decreasing_rearrangement(g), 1e-12)) {
      const double ng = norm_of_vector(spec_, g);
      check(report, "submajorization", ng <= nx * (1.0 + kTol) + kAbs, fabs, g, ng, nx);
    }
  }

 private:
  static constexpr double kTol = 1e-10;
  static constexpr double kAbs = 1e-300;
  static constexpr std::size_t kMaxWitnesses = 16;

  void check(AxiomReport& report, const char* axiom, bool ok, const std::vector<double>& x,
             const std::vector<double>& y, double lhs, double rhs) {
    if (ok) return;
    ++report.violation_count;
    if (report.violations.size() < kMaxWitnesses) report.violations.push_back({axiom, x, y, lhs, rhs});
  }

  const SymmetricNormSpec& spec_;
  std::mt19937_64 rng_;
};

}  // namespace

AxiomReport verify_norm_axioms(const SymmetricNormSpec& spec, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("verify_norm_axioms: trials must be >= 1");
  AxiomReport report;
  report.trials = trials;
  AxiomProbe probe(spec, seed);
  for (std::size_t t = 0; t < trials; ++t) probe.run_trial(report);
  return report;
}

std::string to_string(BlockMode mode) { return mode == BlockMode::sup ? "sup" : "sum"; }

BlockMode parse_block_mode(const std::string& text) {
  if (text == "sup") return BlockMode::sup;
  if (text == "sum") return BlockMode::sum;
  throw InvalidInput("mode must be 'sup' or 'sum', got '" + text + "'");
}

BlockFamilyReport verify_block_family(const SymmetricNormSpec& spec, const SingularValueSequence& x0,
                                      std::size_t n, double eps, BlockMode mode, double tol) {
  if (n < 1) throw InvalidInput("verify_block_family: n must be >= 1");
  if (!(eps > 0.0)) throw InvalidInput("verify_block_family: eps must be positive");
  BlockFamilyReport r;
  r.n = n;
  r.eps = eps;
  r.mode = mode;
  r.x0_norm = norm_E(spec, x0);
  if (std::abs(r.x0_norm - 1.0) > tol) {
    throw InvalidInput("verify_block_family: ||x0||_E = " + format_number(r.x0_norm) + ", expected 1");
  }
  // the disjoint sum of n copies has the concatenation as its distribution
  std::vector<double> concat;
  concat.reserve(n * x0.size());
  for (std::size_t j = 0; j < n; ++j) concat.insert(concat.end(), x0.values().begin(), x0.values().end());
  r.copies_norm = norm_of_vector(spec, concat);
  const double nd = static_cast<double>(n);
  if (mode == BlockMode::sup) {
    // lower bound at a = e_j is ||x0|| >= 1; upper bound at a = (1, ..., 1)
    r.lower = 1.0;
    r.upper = 1.0 + eps;
    r.passed = r.x0_norm >= r.lower * (1.0 - tol) && r.copies_norm <= r.upper * (1.0 + tol);
  } else {
    r.lower = (1.0 - eps) * nd;
    r.upper = nd;
    r.passed = r.copies_norm >= r.lower * (1.0 - tol) && r.copies_norm <= r.upper * (1.0 + tol);
  }
  std::ostringstream os;
  os << to_string(mode) << " family, n=" << n << ": ||sum of copies||=" << format_number(r.copies_norm)
     << " required in [" << format_number(r.lower) << ", " << format_number(r.upper) << "]";
  r.detail = os.str();
  return r;
}

}  // namespace schurlab
