#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "schurlab/construct.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/funcs.hpp"
#include "schurlab/pipeline.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/serialize.hpp"
#include "schurlab/symnorm.hpp"

namespace schurlab::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  std::string suite = "identities";
  int n = 16;
  int trials = 200;
  int m = 64;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  std::string out;
  bool timestamp = false;
};

struct SweepOptions {
  std::string m_range = "3..64";
  std::string space = "schatten:inf";
  std::string mode = "auto";
  std::string x0 = "1";
  double eps = 0.5;
  std::string p = "theorem";
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t size_cap = 2000;
  std::string out;
};

struct TheoremOptions {
  std::string config;
  std::string out = ".";
  bool dump_matrices = false;
  bool timestamp = false;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double parse_real(const std::string& text, const char* what) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v = 0.0;
  if (!(is >> v) || !is.eof()) throw UsageError(std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

SingularValueSequence parse_x0(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_real(item, "--x0 entry"));
  try {
    return SingularValueSequence(std::move(v));
  } catch (const Error& e) {
    throw UsageError(std::string("--x0: ") + e.what());
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("--m expects a..b, got '" + text + "'");
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path.string());
  os << content;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create directory " + dir + ": " + ec.message());
}

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexMatrix x(n, n);
  for (auto& z : x.data()) z = cplx{g(rng), g(rng)};
  return x;
}

// Eigenvalues in (-0.9, 0.9); some trials reuse values to exercise the lambda == mu branch.
DiagonalOperator random_diagonal(std::mt19937_64& rng, std::size_t n, bool repeats) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  if (repeats && n > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n / 2; ++i) v[pick(rng)] = v[pick(rng)];
  }
  return DiagonalOperator(std::move(v));
}

// Running max of value / threshold-scale, kept as a Check.
struct WorstCase {
  std::string name;
  double worst = 0.0;  // max residual / scale
  double tol = 0.0;
  void add(double residual, double scale) {
    const double ratio = scale > 0.0 ? residual / scale : residual;
    worst = std::max(worst, ratio);
  }
  Check check() const { return check_at_most(name, worst, tol); }
};

json run_identities(const VerifyOptions& o, std::vector<Check>& checks) {
  std::mt19937_64 rng(o.seed);
  const auto n_max = static_cast<std::size_t>(o.n);
  PipelineConfig cfg;
  const TheoremFunctions fn = theorem_functions(cfg);
  const ScalarC1Function funcs[] = {polynomial({0.0, 0.0, 1.0}, "t^2"), polynomial({0.0, 0.0, 0.0, 1.0}, "t^3"),
                                    fn.f};
  std::uniform_int_distribution<std::size_t> size_dist(1, n_max);

  WorstCase schurcomm{"schur_commutator_identity", 0.0, o.tol};
  for (int t = 0; t < o.trials; ++t) {
    const auto& f = funcs[static_cast<std::size_t>(t) % 3];
    const std::size_t n = size_dist(rng);
    const DiagonalOperator b = random_diagonal(rng, n, t % 4 == 3);
    const ComplexMatrix x = random_matrix(rng, n);
    schurcomm.add(verify_schur_commutator_identity(f, b, x), schur_identity_scale(f, b, x));
  }
  checks.push_back(schurcomm.check());

  WorstCase intertwining{"intertwining", 0.0, o.tol};
  std::uniform_int_distribution<std::size_t> lift_n(1, std::min<std::size_t>(n_max, 8));
  std::uniform_int_distribution<std::size_t> x0_len(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < o.trials; ++t) {
    const auto& f = funcs[static_cast<std::size_t>(t) % 3];
    const std::size_t n = lift_n(rng);
    std::vector<double> x0(x0_len(rng));
    for (auto& v : x0) v = unit(rng);
    x0[0] = 1.0;
    const TensorLift lift = make_tensor_lift(n, decreasing_rearrangement(x0));
    const DiagonalOperator b = random_diagonal(rng, n, t % 4 == 3);
    const ComplexMatrix x = random_matrix(rng, n);
    intertwining.add(verify_intertwining(lift, f, b, x), schur_identity_scale(f, lift.phi(b), lift.psi(x)));
  }
  checks.push_back(intertwining.check());

  std::size_t sandwich_fail = 0;
  const SingularValueSequence one({1.0});
  for (int t = 0; t < o.trials; ++t) {
    const std::size_t n = size_dist(rng);
    const ComplexMatrix x = random_matrix(rng, n);
    const TensorLift lift = make_tensor_lift(n, one);
    if (!verify_norm_sandwich(lift, SymmetricNormSpec::kyfan(1), x, 0.5, BlockMode::sup).passed) ++sandwich_fail;
    if (!verify_norm_sandwich(lift, SymmetricNormSpec::schatten(1.0), x, 0.5, BlockMode::sum).passed) ++sandwich_fail;
  }
  checks.push_back(check_at_most("norm_sandwich_failures", static_cast<double>(sandwich_fail), 0.0));

  // functions
  const double eps = 1.0 / fn.schedule.alpha() - 1.0;
  for (double e : {0.5, eps}) {
    const ScalarC1Function chi = chi_eps(e);
    double worst = 0.0;
    bool monotone = true;
    double prev = chi(0.0);
    for (double t : linspace(0.0, 1.0, 10001)) {
      worst = std::max(worst, chi.derivative(t));
      monotone = monotone && chi(t) >= prev;
      prev = chi(t);
    }
    std::ostringstream name;
    name.imbue(std::locale::classic());
    name << "chi_slope_eps_" << e;
    checks.push_back(check_at_most(name.str(), worst, (1.0 + e) * (1.0 + 1e-12)));
    checks.push_back(check_at_least(name.str() + "_monotone", monotone ? 1.0 : 0.0, 1.0));
    const C1Report c1 = verify_c1(chi, linspace(-0.5, 1.5, 2001), 1e-6);
    checks.push_back(check_at_least(name.str() + "_c1", c1.passed ? 1.0 : 0.0, 1.0));
  }

  double node_err = 0.0;
  for (std::size_t m = 0; m < fn.schedule.size(); ++m) {
    const double q = fn.schedule.q()[m];
    node_err = std::max(node_err, std::abs(fn.h(fn.schedule.s()[m]) - q) / q);
  }
  checks.push_back(check_at_most("h_nodes_relative_error", node_err, 1e-12));

  const double s_max = fn.schedule.s().back();
  double log_slope = 0.0, log_slope_min = 0.0;
  for (double t : linspace(-s_max - 20.0, s_max + 20.0, 40001)) {
    const double r = fn.h.derivative(t) / fn.h(t);
    const double signed_r = t < 0.0 ? -r : r;
    log_slope = std::max(log_slope, signed_r);
    log_slope_min = std::min(log_slope_min, signed_r);
  }
  checks.push_back(check_at_most("h_log_derivative_max", log_slope, 1.0 + 1e-12));
  checks.push_back(check_at_least("h_log_derivative_min", log_slope_min, 0.0));
  const C1Report h_c1 = verify_c1(fn.h, linspace(-s_max - 20.0, s_max + 20.0, 20001), 1e-5);
  checks.push_back(check_at_least("h_c1", h_c1.passed ? 1.0 : 0.0, 1.0));
  const C1Report f_c1 = verify_c1(fn.f, linspace(-0.999, 0.999, 20001), 1e-7);
  checks.push_back(check_at_least("f_c1", f_c1.passed ? 1.0 : 0.0, 1.0));

  double deriv_excess = -INFINITY, deriv_min = INFINITY;
  for (double t : linspace(1e-4, 1.0 - 1e-4, 10000)) {
    const double d = fn.f.derivative(t);
    deriv_min = std::min(deriv_min, d);
    deriv_excess = std::max(deriv_excess, d * fn.h(std::log(t)) / 2.0);
  }
  checks.push_back(check_at_least("f_prime_nonnegative", deriv_min, 0.0));
  checks.push_back(check_at_most("f_prime_times_h_over_2", deriv_excess, 1.0, 1e-12));
  checks.push_back(check_at_most("f_prime_at_0_centered", std::abs((fn.f(1e-8) - fn.f(-1e-8)) / 2e-8), 1e-6));

  return {{"n", o.n}, {"trials", o.trials}, {"seed", o.seed}, {"alpha", fn.schedule.alpha()}};
}

json run_hilbert(const VerifyOptions& o, std::vector<Check>& checks) {
  if (o.m < 3 || o.m > kMaxPaperM) throw UsageError("--m must lie in 3.." + std::to_string(kMaxPaperM));
  std::vector<double> norms;
  double worst = 0.0;
  bool monotone = true;
  for (int m = 3; m <= o.m; ++m) {
    const PaperMatrices pm = build_paper_matrices(m);
    const double v = singular_values(commutator_BA(pm))[0];
    if (!norms.empty()) monotone = monotone && v >= norms.back();
    norms.push_back(v);
    worst = std::max(worst, v);
  }
  checks.push_back(check_at_most("hilbert_le_pi", worst, std::numbers::pi));
  checks.push_back(check_at_least("hilbert_nondecreasing", monotone ? 1.0 : 0.0, 1.0));
  return {{"m_max", o.m}, {"norms", norms}};
}

int cmd_verify(const VerifyOptions& o, const std::vector<std::string>& argv, std::ostream& out) {
  std::vector<Check> checks;
  json detail;
  if (o.suite == "identities") {
    detail = run_identities(o, checks);
  } else if (o.suite == "hilbert") {
    detail = run_hilbert(o, checks);
  } else {
    throw UsageError("--suite must be identities or hilbert");
  }
  RunManifest manifest;
  manifest.command = "verify";
  manifest.config = {{"suite", o.suite}, {"argv", argv}, {"tol", o.tol}};
  if (o.timestamp) manifest.timestamp = utc_timestamp();
  manifest.checks_total = checks.size();
  manifest.checks_failed =
      static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
  manifest.passed = manifest.checks_failed == 0;
  const json report = {{"manifest", to_json(manifest)}, {"suite", detail}, {"checks", checks_to_json(checks)}};
  if (o.out.empty()) {
    out << report.dump(2) << '\n';
  } else {
    ensure_dir(o.out);
    write_file(std::filesystem::path(o.out) / "verify.json", report.dump(2) + "\n");
  }
  return manifest.passed ? kPass : kCertificationFailure;
}

PipelineConfig sweep_config(const SweepOptions& o, int m_hi) {
  PipelineConfig cfg;
  try {
    cfg.spec = parse_space(o.space);
  } catch (const Error& e) {
    throw UsageError(std::string("--space: ") + e.what());
  }
  cfg.x0 = parse_x0(o.x0);
  cfg.eps = o.eps;
  cfg.m_max = m_hi;
  cfg.size_cap = o.size_cap;
  cfg.tol.relative = o.tol;
  std::vector<BlockMode> modes;
  if (o.mode == "auto") {
    modes = {BlockMode::sup, BlockMode::sum};
  } else {
    try {
      modes = {parse_block_mode(o.mode)};
    } catch (const Error& e) {
      throw UsageError(std::string("--mode: ") + e.what());
    }
  }
  // the size cap is applied per row, so only the block family gates the run
  PipelineConfig probe = cfg;
  probe.size_cap = static_cast<std::size_t>(-1);
  std::string why;
  for (BlockMode mode : modes) {
    probe.mode = mode;
    try {
      validate_config(probe);
      cfg.mode = mode;
      return cfg;
    } catch (const Error& e) {
      why += std::string(why.empty() ? "" : "; ") + e.what();
    }
  }
  throw UsageError(why);
}

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  const auto [lo, hi] = parse_range(o.m_range);
  if (lo > hi) throw UsageError("--m range " + o.m_range + " is empty");
  if (lo < 3) throw UsageError("--m must start at 3 or above");
  if (hi > kMaxPaperM) throw UsageError("--m must end at " + std::to_string(kMaxPaperM) + " or below");
  const PipelineConfig cfg = sweep_config(o, hi);
  const TheoremFunctions fn = theorem_functions(cfg);
  std::optional<double> fixed_p;
  if (o.p != "theorem") {
    fixed_p = parse_real(o.p, "--p");
    if (!(*fixed_p > 0.0 && *fixed_p <= 1.0)) throw UsageError("--p must lie in (0, 1]");
  }

  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv << "m,p,s,bound,achieved,margin,pass,reason\n";
  bool ok = true;
  for (int m = lo; m <= hi; ++m) {
    const double p = fixed_p ? *fixed_p : fn.p[static_cast<std::size_t>(m)];
    csv << m << ',' << format_double(p) << ',';
    try {
      const CounterexampleStage st = build_stage(cfg, m, p, fn.f, fn.h, !fixed_p);
      std::string reason;
      for (const auto& c : st.checks)
        if (!c.pass) reason += (reason.empty() ? "" : ";") + c.name;
      for (const auto& c : st.infestimate.checks)
        if (!c.pass) reason += (reason.empty() ? "" : ";") + ("infestimate." + c.name);
      ok = ok && st.passed();
      csv << format_double(st.s) << ',' << format_double(st.lower_bound) << ',' << format_double(st.witness.ratio)
          << ',' << format_double(st.witness.ratio - st.lower_bound) << ',' << (st.passed() ? "pass" : "fail") << ','
          << (reason.empty() ? "" : "failed:" + reason) << '\n';
    } catch (const SizeLimitError& e) {
      csv << ",,,,skip,\"" << e.what() << "\"\n";
    }
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    ensure_dir(o.out);
    write_file(std::filesystem::path(o.out) / "sweep.csv", csv.str());
  }
  return ok ? kPass : kCertificationFailure;
}

PipelineConfig load_config(const std::string& path) {
  PipelineConfig cfg;
  cfg.m_max = 32;
  if (path.empty()) return cfg;
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (j.is_object() && !j.contains("m_max")) j["m_max"] = 32;
  try {
    return config_from_json(j);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

int cmd_theorem(const TheoremOptions& o, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = load_config(o.config);
  try {
    validate_config(cfg);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  TheoremReport report;
  try {
    report = run_theorem_main(cfg);
  } catch (const StageFailure& e) {
    err << "certification aborted: " << e.what() << '\n';
    return kCertificationFailure;
  }
  const auto [total, failed] = count_checks(report);
  RunManifest manifest;
  manifest.command = "theorem";
  manifest.config = to_json(cfg);
  if (o.timestamp) manifest.timestamp = utc_timestamp();
  manifest.passed = report.passed();
  manifest.checks_total = total;
  manifest.checks_failed = failed;

  ensure_dir(o.out);
  const std::filesystem::path dir(o.out);
  write_file(dir / "report.json", theorem_report_to_json(report, manifest, o.dump_matrices).dump(2) + "\n");
  write_file(dir / "stages.csv", stages_csv(report));
  write_file(dir / "f_E.csv", function_samples_csv(*report.f, *report.h, 2001));
  out << "stages " << report.stages.size() << ", checks " << total << ", failed " << failed << ", alpha "
      << format_double(report.alpha) << '\n';
  if (!manifest.passed) {
    for (const auto& st : report.stages)
      for (const auto& c : st.checks)
        if (!c.pass) err << "stage m=" << st.m << ": " << c.name << " failed (margin " << format_double(c.margin) << ")\n";
    for (const auto& p : report.pairs)
      for (const auto& c : p.checks)
        if (!c.pass) err << "pair r=" << p.r << ": " << c.name << " failed (margin " << format_double(c.margin) << ")\n";
  }
  return manifest.passed ? kPass : kCertificationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schur multiplier and commutator counterexample toolkit", "schurlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run an exact-identity suite");
  verify->add_option("--suite", vo.suite, "identities | hilbert")->check(CLI::IsMember({"identities", "hilbert"}));
  verify->add_option("--n", vo.n, "Largest matrix size")->check(CLI::PositiveNumber);
  verify->add_option("--trials", vo.trials, "Random trials per identity")->check(CLI::PositiveNumber);
  verify->add_option("--m", vo.m, "Largest m for the hilbert suite")->check(CLI::Range(3, kMaxPaperM));
  verify->add_option("--seed", vo.seed, "RNG seed");
  verify->add_option("--tol", vo.tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--out", vo.out, "Write verify.json into this directory");
  verify->add_flag("--timestamp", vo.timestamp, "Record the run time in the manifest");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Per-m stage table as CSV");
  sweep->add_option("--m", so.m_range, "Range a..b");
  sweep->add_option("--space", so.space, "schatten:<p|inf>, kyfan:<k>, lorentz:<w,...>, orlicz:...");
  sweep->add_option("--mode", so.mode, "sup | sum | auto")->check(CLI::IsMember({"sup", "sum", "auto"}));
  sweep->add_option("--x0", so.x0, "Comma-separated nonincreasing block vector");
  sweep->add_option("--eps", so.eps, "Block family slack")->check(CLI::PositiveNumber);
  sweep->add_option("--p", so.p, "theorem | fixed value in (0, 1]");
  sweep->add_option("--seed", so.seed, "Unused by the deterministic sweep; recorded for reproducibility");
  sweep->add_option("--tol", so.tol, "Relative tolerance of the bound checks")->check(CLI::PositiveNumber);
  sweep->add_option("--size-cap", so.size_cap, "Largest lifted matrix size")->check(CLI::PositiveNumber);
  sweep->add_option("--out", so.out, "Write sweep.csv into this directory");

  TheoremOptions to;
  auto* theorem = app.add_subcommand("theorem", "End-to-end counterexample with all certifications");
  theorem->add_option("--config", to.config, "JSON config");
  theorem->add_option("--out", to.out, "Output directory");
  theorem->add_flag("--dump-matrices", to.dump_matrices, "Include matrix entries for m <= 8");
  theorem->add_flag("--timestamp", to.timestamp, "Record the run time in the manifest");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsageError;
  }

  try {
    if (*verify) return cmd_verify(vo, args, out);
    if (*sweep) return cmd_sweep(so, out);
    return cmd_theorem(to, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kCertificationFailure;
  }
}

}  // namespace schurlab::cli
