#include "schurlab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <locale>
#include <sstream>

#include "schurlab/errors.hpp"
#include "schurlab/version.hpp"

namespace schurlab {

std::string tool_version() { return kVersionString; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
  }
  throw InvalidInput(std::string("config: ") + what + " must be a number");
}

}  // namespace

json to_json(const SymmetricNormSpec& spec) {
  json j;
  switch (spec.kind()) {
    case NormKind::schatten:
      j = {{"kind", "schatten"}, {"p", number_or_inf(spec.p())}};
      break;
    case NormKind::kyfan:
      j = {{"kind", "kyfan"}, {"k", spec.k()}};
      break;
    case NormKind::lorentz:
      j = {{"kind", "lorentz"}, {"weights", spec.weights()}};
      break;
    case NormKind::orlicz: {
      const auto& o = spec.orlicz_function();
      if (o.family == "custom") throw InvalidInput("to_json: custom Orlicz functions cannot be serialized");
      j = {{"kind", "orlicz"}, {"family", o.family}};
      if (o.family != "exp") j["p"] = o.p;
      break;
    }
  }
  if (!spec.label().empty()) j["label"] = spec.label();
  return j;
}

SymmetricNormSpec spec_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_space(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind")) throw InvalidInput("config: spec needs a \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    const auto label = j.value("label", std::string{});
    if (kind == "schatten") return SymmetricNormSpec::schatten(read_number(j.at("p"), "spec.p"), label);
    if (kind == "kyfan") return SymmetricNormSpec::kyfan(j.at("k").get<std::size_t>(), label);
    if (kind == "lorentz") return SymmetricNormSpec::lorentz(j.at("weights").get<std::vector<double>>(), label);
    if (kind == "orlicz") {
      const auto family = j.at("family").get<std::string>();
      if (family == "power") return SymmetricNormSpec::orlicz(OrliczFunction::power(j.at("p").get<double>()), label);
      if (family == "power_log") {
        return SymmetricNormSpec::orlicz(OrliczFunction::power_log(j.at("p").get<double>()), label);
      }
      if (family == "exp") return SymmetricNormSpec::orlicz(OrliczFunction::exp_minus_one(), label);
      throw InvalidInput("config: unknown Orlicz family '" + family + "'");
    }
    throw InvalidInput("config: unknown norm kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: malformed spec: ") + e.what());
  }
}

json to_json(const GrowthSchedule& schedule) {
  return {{"s", schedule.s()}, {"q", schedule.q()}, {"alpha", schedule.alpha()}};
}

json to_json(const Tolerances& tol) {
  return {{"identity", tol.identity}, {"relative", tol.relative}, {"schedule", tol.schedule}, {"grouping", tol.grouping}};
}

json to_json(const PipelineConfig& cfg) {
  return {{"spec", to_json(cfg.spec)},
          {"mode", to_string(cfg.mode)},
          {"x0", std::vector<double>(cfg.x0.values().begin(), cfg.x0.values().end())},
          {"m_max", cfg.m_max},
          {"eps", cfg.eps},
          {"tolerances", to_json(cfg.tol)},
          {"size_cap", cfg.size_cap}};
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  static const char* const known[] = {"spec", "mode", "x0", "m_max", "eps", "tolerances", "size_cap"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw InvalidInput("config: unknown key '" + key + "'");
  }
  PipelineConfig cfg;
  try {
    if (j.contains("spec")) cfg.spec = spec_from_json(j.at("spec"));
    if (j.contains("mode")) cfg.mode = parse_block_mode(j.at("mode").get<std::string>());
    if (j.contains("x0")) cfg.x0 = SingularValueSequence(j.at("x0").get<std::vector<double>>());
    if (j.contains("m_max")) cfg.m_max = j.at("m_max").get<int>();
    if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
    if (j.contains("size_cap")) cfg.size_cap = j.at("size_cap").get<std::size_t>();
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      cfg.tol.identity = t.value("identity", cfg.tol.identity);
      cfg.tol.relative = t.value("relative", cfg.tol.relative);
      cfg.tol.schedule = t.value("schedule", cfg.tol.schedule);
      cfg.tol.grouping = t.value("grouping", cfg.tol.grouping);
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return cfg;
}

json to_json(const Check& c) {
  return {{"pass", c.pass}, {"margin", c.margin}, {"tol", c.tol}, {"value", c.value}, {"threshold", c.threshold}};
}

json checks_to_json(const std::vector<Check>& checks) {
  json j = json::object();
  for (const auto& c : checks) j[c.name] = to_json(c);
  return j;
}

json to_json(const RunManifest& m) {
  json j = {{"command", m.command},
            {"config", m.config},
            {"tool_version", tool_version()},
            {"outcome", {{"pass", m.passed}, {"checks_total", m.checks_total}, {"checks_failed", m.checks_failed}}}};
  if (!m.timestamp.empty()) j["timestamp"] = m.timestamp;
  return j;
}

json matrix_to_json(const ComplexMatrix& x) {
  std::vector<double> re, im;
  re.reserve(x.size());
  im.reserve(x.size());
  for (const cplx& z : x.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"rows", x.rows()}, {"cols", x.cols()}, {"re", re}, {"im", im}};
}

std::pair<std::size_t, std::size_t> count_checks(const TheoremReport& r) {
  std::size_t total = 0, failed = 0;
  auto add = [&](const std::vector<Check>& cs) {
    for (const auto& c : cs) {
      ++total;
      if (!c.pass) ++failed;
    }
  };
  for (const auto& s : r.stages) {
    add(s.checks);
    add(s.infestimate.checks);
  }
  for (const auto& p : r.pairs) add(p.checks);
  add(r.direct_sum.checks);
  add(r.checks);
  return {total, failed};
}

json theorem_report_to_json(const TheoremReport& r, const RunManifest& manifest, bool dump_matrices) {
  json stages = json::array();
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    const auto& st = r.stages[i];
    const auto& pair = r.pairs[i];
    json checks = checks_to_json(st.checks);
    for (const auto& c : st.infestimate.checks) checks["infestimate." + c.name] = to_json(c);
    for (const auto& c : pair.checks) checks["pair." + c.name] = to_json(c);
    json row = {{"m", st.m},
                {"p", st.p},
                {"s", st.s},
                {"q", st.q},
                {"w_norm", st.w_norm},
                {"bound", st.lower_bound},
                {"achieved", st.witness.ratio},
                {"base_ratio", st.base_ratio},
                {"lift_size", st.W.size()},
                {"infestimate",
                 {{"hilbert_norm", st.infestimate.hilbert_norm},
                  {"comm_norm", st.infestimate.comm_norm},
                  {"reduced_norm", st.infestimate.reduced_norm},
                  {"bound", st.infestimate.bound}}},
                {"pair",
                 {{"r", pair.r},
                  {"first_comm_norm", pair.first_comm_norm},
                  {"second_comm_norm", pair.second_comm_norm},
                  {"first_comm_inf", pair.first_comm_inf},
                  {"rho", pair.rho},
                  {"meets_cubic", pair.meets_cubic}}},
                {"checks", checks}};
    if (dump_matrices && st.m <= 8) {
      row["matrices"] = {{"W", std::vector<double>(st.W.eigenvalues().begin(), st.W.eigenvalues().end())},
                         {"witness", matrix_to_json(st.witness.X)},
                         {"X_r", matrix_to_json(pair.X)}};
    }
    stages.push_back(std::move(row));
  }
  const auto& d = r.direct_sum;
  json direct = {{"R", d.R},
                 {"dimension", d.dimension},
                 {"first_sum", d.first_sum},
                 {"second_max", d.second_max},
                 {"w_sum", d.w_sum},
                 {"first_direct", d.first_direct},
                 {"first_sup_inf", d.first_sup_inf},
                 {"checks", checks_to_json(d.checks)}};
  return {{"manifest", to_json(manifest)},
          {"schedule", {{"p", r.p}, {"s", r.s}, {"q", r.q}, {"alpha", r.alpha}}},
          {"constants", {{"K0", constant_K0()}, {"K1", constant_K1()}}},
          {"stages", stages},
          {"direct_sum", direct},
          {"checks", checks_to_json(r.checks)}};
}

std::string stages_csv(const TheoremReport& r) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "m,p,s,q,w_norm,bound,achieved,base_ratio,r,first_comm_norm,second_comm_norm,rho,pass\n";
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    const auto& st = r.stages[i];
    const auto& pr = r.pairs[i];
    os << st.m << ',' << format_double(st.p) << ',' << format_double(st.s) << ',' << format_double(st.q) << ','
       << format_double(st.w_norm) << ',' << format_double(st.lower_bound) << ',' << format_double(st.witness.ratio)
       << ',' << format_double(st.base_ratio) << ',' << pr.r << ',' << format_double(pr.first_comm_norm) << ','
       << format_double(pr.second_comm_norm) << ',' << format_double(pr.rho) << ','
       << (st.passed() && pr.passed() ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string function_samples_csv(const ScalarC1Function& f, const ScalarC1Function& h, std::size_t count) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "t,log_t,f,f_prime,h_log_t\n";
  // log-spaced towards 0, where the construction lives
  for (double u : linspace(40.0, 1e-3, count)) {
    const double t = std::exp(-u);
    os << format_double(t) << ',' << format_double(-u) << ',' << format_double(f(t)) << ','
       << format_double(f.derivative(t)) << ',' << format_double(h(-u)) << '\n';
  }
  return os.str();
}

}  // namespace schurlab
