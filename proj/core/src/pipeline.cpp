#include "schurlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "schurlab/errors.hpp"

namespace schurlab {

double constant_K0() { return (1.0 - std::exp(-1.0)) / 4.0; }
double constant_K1() { return 2.0 * constant_K0() / (3.0 * std::numbers::pi); }

Check check_at_most(std::string name, double value, double threshold, double tol) {
  const double margin = threshold - value;
  return {std::move(name), margin >= -tol, value, threshold, margin, tol};
}

Check check_at_least(std::string name, double value, double threshold, double tol) {
  const double margin = value - threshold;
  return {std::move(name), margin >= -tol, value, threshold, margin, tol};
}

Check check_close(std::string name, double value, double target, double tol) {
  const double margin = tol - std::abs(value - target);
  return {std::move(name), margin >= 0.0, value, target, margin, tol};
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void validate_config(const PipelineConfig& cfg) {
  if (cfg.m_max < 3) throw InvalidInput("config: m_max must be >= 3");
  if (cfg.m_max > kMaxPaperM) throw InvalidInput("config: m_max must be <= " + std::to_string(kMaxPaperM));
  if (!(cfg.eps > 0.0) || !std::isfinite(cfg.eps)) throw InvalidInput("config: eps must be positive");
  if (cfg.mode == BlockMode::sum && !(cfg.eps < 1.0)) throw InvalidInput("config: sum mode needs eps < 1");
  if (cfg.x0.empty() || cfg.x0[0] == 0.0) throw InvalidInput("config: x0 must be nonzero");
  if (cfg.size_cap == 0) throw InvalidInput("config: size_cap must be positive");
  const std::size_t k = 2 * static_cast<std::size_t>(cfg.m_max) * cfg.x0.size();
  if (k > cfg.size_cap) {
    throw SizeLimitError("config: lift size 2 m_max |x0| = " + std::to_string(k) + " exceeds size_cap " +
                         std::to_string(cfg.size_cap));
  }
  for (int m = 1; m <= cfg.m_max; ++m) {
    const BlockFamilyReport r =
        verify_block_family(cfg.spec, cfg.x0, 2 * static_cast<std::size_t>(m), cfg.eps, cfg.mode);
    if (!r.passed) {
      throw InvalidInput("config: block family fails for " + cfg.spec.describe() + " in " + to_string(cfg.mode) +
                         " mode at n = " + std::to_string(2 * m) + ": " + r.detail);
    }
  }
}

double q_sequence(int m) {
  if (m < 0) throw InvalidInput("q_sequence: m must be >= 0");
  return std::sqrt(std::log(static_cast<double>(m) + std::numbers::e));
}

namespace {

// ||Phi_2m(B_m)||_E: e^-1..e^-m, each repeated 2|x0| times.
double lifted_b_norm(const PipelineConfig& cfg, int m) {
  std::vector<double> v;
  const std::size_t reps = 2 * cfg.x0.size();
  v.reserve(static_cast<std::size_t>(m) * reps);
  for (int j = 1; j <= m; ++j)
    for (std::size_t r = 0; r < reps; ++r) v.push_back(std::exp(-static_cast<double>(j)));
  return norm_of_vector(cfg.spec, v);
}

}  // namespace

std::vector<double> p_sequence(const PipelineConfig& cfg, int m_max) {
  if (m_max < 1) throw InvalidInput("p_sequence: m_max must be >= 1");
  std::vector<double> p{1.0};
  for (int m = 1; m <= m_max; ++m) {
    const double prev = 1.0 / p.back();
    const double qm = q_sequence(m), qp = q_sequence(m - 1);
    const double inv = std::max({1.0, prev, static_cast<double>(m) * m * lifted_b_norm(cfg, m),
                                 qm * qm / (std::numbers::e * qp * qp) * prev});
    p.push_back(1.0 / inv);
  }
  return p;
}

GrowthSchedule theorem_schedule(const std::vector<double>& p) {
  std::vector<double> s(p.size()), q(p.size());
  for (std::size_t m = 0; m < p.size(); ++m) {
    s[m] = static_cast<double>(m) - std::log(p[m]);
    q[m] = q_sequence(static_cast<int>(m));
  }
  return build_schedule(std::move(s), std::move(q));
}

TheoremFunctions theorem_functions(const PipelineConfig& cfg) {
  std::vector<double> p = p_sequence(cfg, cfg.m_max);
  GrowthSchedule sched = theorem_schedule(p);
  ScalarC1Function h = build_h(sched);
  ScalarC1Function f = build_f(h);
  return {std::move(p), std::move(sched), std::move(h), std::move(f)};
}

namespace {

double top_singular_value(const ComplexMatrix& x) {
  const SingularValueSequence s = singular_values(x);
  return s.empty() ? 0.0 : s[0];
}

}  // namespace

InfestimateReport infestimate_check(int m, double p, const ScalarC1Function& f, const ScalarC1Function& h,
                                    const Tolerances& tol) {
  if (!(p > 0.0)) throw InvalidInput("infestimate_check: p must be positive");
  const double top = p * std::exp(-1.0);
  if (!f.domain().contains(top) || !f.domain().contains(-top)) {
    std::ostringstream os;
    os.precision(17);
    os << "infestimate_check: p e^-1 = " << top << " outside the domain of " << f.label();
    throw DomainError(os.str());
  }
  const PaperMatrices pm = build_paper_matrices(m);
  InfestimateReport r;
  r.m = m;
  r.p = p;
  r.hilbert_norm = top_singular_value(commutator_BA(pm));

  const DiagonalOperator pB = pm.B.scaled(p);
  const ComplexMatrix comm = commutator(pB.apply(f), pm.A);
  r.comm_norm = top_singular_value(comm);
  r.reduced_norm = top_singular_value(commutator(pm.D.scaled(p).apply(f), pm.V));
  r.bound = p * constant_K0() * std::log(m / 2.0) / h(static_cast<double>(m) - std::log(p));

  r.checks.push_back(check_at_most("hilbert_le_pi", r.hilbert_norm, std::numbers::pi));
  r.checks.push_back(check_at_least("comm_lower_bound", r.comm_norm, r.bound, tol.relative * r.bound));
  r.checks.push_back(
      check_close("reduction_to_D_V", r.reduced_norm, r.comm_norm, tol.identity * std::max(r.comm_norm, 1.0)));
  r.checks.push_back(check_at_most("schur_commutator_identity", verify_schur_commutator_identity(f, pB, pm.A),
                                   tol.identity * schur_identity_scale(f, pB, pm.A)));
  return r;
}

CounterexampleStage build_stage(const PipelineConfig& cfg, int m, double p, const ScalarC1Function& f,
                                const ScalarC1Function& h, bool scheduled) {
  if (m < 3) throw InvalidInput("build_stage: m must be >= 3");
  const std::size_t k = 2 * static_cast<std::size_t>(m) * cfg.x0.size();
  if (k > cfg.size_cap) {
    throw SizeLimitError("build_stage: lift size " + std::to_string(k) + " exceeds size_cap " +
                         std::to_string(cfg.size_cap));
  }
  const PaperMatrices pm = build_paper_matrices(m);
  const TensorLift lift = make_tensor_lift(2 * static_cast<std::size_t>(m), cfg.x0);
  const Tolerances& tol = cfg.tol;

  CounterexampleStage st;
  st.m = m;
  st.p = p;
  st.q = q_sequence(m);
  st.s = static_cast<double>(m) - std::log(p);
  st.infestimate = infestimate_check(m, p, f, h, tol);

  const DiagonalOperator pB = pm.B.scaled(p);
  st.W = lift.phi(pB);
  st.w_norm = norm_E(cfg.spec, st.W.singular_values());
  st.lower_bound = constant_K1() * std::log(m / 2.0) / h(st.s);

  // [pB, A/p] is [B, A] up to rounding
  const ComplexMatrix x_inf = commutator_BA(pm);
  const ComplexMatrix x_inf_p = commutator(pB, pm.A * cplx{1.0 / p});
  const DividedDifferenceSymbol base_symbol(f, pB);
  const ComplexMatrix m_inf = base_symbol.apply(x_inf);
  const double x_inf_norm = top_singular_value(x_inf);
  st.base_ratio = top_singular_value(m_inf) / x_inf_norm;

  ComplexMatrix base = x_inf;
  if (cfg.mode == BlockMode::sum) base = dual_witness_transfer(f, pB, x_inf);
  const ComplexMatrix y = lift.psi(base);
  const DividedDifferenceSymbol symbol(f, st.W);
  const ComplexMatrix my = symbol.apply(y);
  const double ratio = norm_E(cfg.spec, my) / norm_E(cfg.spec, y);
  st.witness = BlowupWitness{st.W, y, cfg.spec, ratio};

  auto& c = st.checks;
  c.push_back(check_at_most("w_norm_le_inv_m2", st.w_norm, 1.0 / (m * m), tol.schedule / (m * m)));
  c.push_back(check_at_most("x_inf_p_cancels", frobenius_distance(x_inf, x_inf_p),
                            tol.identity * x_inf.frobenius_norm()));
  const double factor = cfg.mode == BlockMode::sup ? 1.0 / (1.0 + cfg.eps) : 1.0 - cfg.eps;
  c.push_back(check_at_least("witness_vs_base", ratio, factor * st.base_ratio, tol.relative * st.base_ratio));
  c.push_back(check_at_least("witness_vs_bound", ratio, st.lower_bound, tol.relative));
  if (cfg.mode == BlockMode::sum) {
    const double tr = norm_E(SymmetricNormSpec::schatten(1.0), base_symbol.apply(base));
    c.push_back(check_at_least("trace_duality", tr, st.base_ratio, tol.relative * st.base_ratio));
  }
  c.push_back(check_at_most("intertwining", verify_intertwining(lift, f, pB, base),
                            tol.identity * schur_identity_scale(f, pB, base)));
  const SandwichReport sw_x = verify_norm_sandwich(lift, cfg.spec, base, cfg.eps, cfg.mode);
  const SandwichReport sw_m = verify_norm_sandwich(lift, cfg.spec, base_symbol.apply(base), cfg.eps, cfg.mode);
  c.push_back(check_at_least("sandwich_witness", sw_x.passed ? 1.0 : 0.0, 1.0));
  c.push_back(check_at_least("sandwich_image", sw_m.passed ? 1.0 : 0.0, 1.0));
  if (scheduled) c.push_back(check_close("h_at_s_equals_q", h(st.s), st.q, tol.schedule * st.q));
  return st;
}

ComplexMatrix hermitian_candidate(const CounterexampleStage& stage, const ScalarC1Function& f) {
  const ComplexMatrix& y = stage.witness.X;
  const ComplexMatrix ya = y.adjoint();
  if (frobenius_distance(y, ya * cplx{-1.0}) == 0.0) return y * cplx{0.0, 1.0};
  if (frobenius_distance(y, ya) == 0.0) return y;
  // Y = H + iK with H, K self-adjoint; M_f(W) commutes with the adjoint.
  const ComplexMatrix hp = (y + ya) * cplx{0.5};
  const ComplexMatrix kp = (y - ya) * cplx{0.0, -0.5};
  const DividedDifferenceSymbol symbol(f, stage.W);
  auto score = [&](const ComplexMatrix& x) {
    const double d = norm_E(stage.witness.spec, x);
    return d == 0.0 ? -1.0 : norm_E(stage.witness.spec, symbol.apply(x)) / d;
  };
  return score(hp) >= score(kp) ? hp : kp;
}

CommutatorPair build_commutator_pair(const SymmetricNormSpec& spec, const ScalarC1Function& f,
                                     const DiagonalOperator& W, const ComplexMatrix& X1, int r,
                                     const Tolerances& tol) {
  const std::size_t n = W.size();
  if (X1.rows() != n || X1.cols() != n) throw InvalidInput("build_commutator_pair: X1 and W differ in size");
  if (r < 1) throw InvalidInput("build_commutator_pair: r must be >= 1");
  if (!X1.is_hermitian(tol.identity * X1.max_abs())) {
    throw InvalidInput("build_commutator_pair: X1 is not self-adjoint");
  }
  const DividedDifferenceSymbol symbol(f, W);
  const ComplexMatrix m1 = symbol.apply(X1);
  if (m1.max_abs() == 0.0) throw NoWitness("build_commutator_pair: M_f(W)(X1) vanishes");

  const auto groups = group_spectrum_relative(W, tol.grouping);
  const ComplexMatrix xhat = pinch(X1, groups);
  const ComplexMatrix x2 = X1 - xhat;
  if (x2.max_abs() == 0.0) {
    throw DegenerateWitness("build_commutator_pair: X1 is block diagonal along the spectrum of W");
  }

  std::vector<std::size_t> group_of(n);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t i : groups[g].indices) group_of[i] = g;
  ComplexMatrix x3(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      if (group_of[j] != group_of[l]) x3(j, l) = cplx{0.0, -1.0} / (W[j] - W[l]) * x2(j, l);

  const double x2_norm = norm_E(spec, x2);
  const double rr = static_cast<double>(r) * r;
  CommutatorPair out;
  out.r = r;
  out.W = W;
  out.X = x3 * cplx{1.0 / (rr * x2_norm)};
  out.first_s = singular_values(commutator(W, out.X));
  out.first_comm_norm = norm_E(spec, out.first_s);
  out.first_comm_inf = out.first_s.empty() ? 0.0 : out.first_s[0];
  const ComplexMatrix second = commutator(W.apply(f), out.X);
  out.second_s = singular_values(second);
  out.second_comm_norm = norm_E(spec, out.second_s);
  const ComplexMatrix m2 = symbol.apply(x2);
  out.rho = norm_E(spec, m2) / x2_norm;
  out.meets_cubic = out.rho >= 2.0 * rr * r;
  out.w_norm = norm_E(spec, W.singular_values());

  auto& c = out.checks;
  c.push_back(check_at_most("x2_eq_i_comm_w_x3", frobenius_distance(x2, commutator(W, x3) * cplx{0.0, 1.0}),
                            tol.identity * x2.frobenius_norm()));
  c.push_back(check_at_most("pinching_invisible_to_multiplier", frobenius_distance(m2, m1),
                            tol.identity * m1.frobenius_norm()));
  const double x1_norm = norm_E(spec, X1);
  c.push_back(check_at_most("pinching_contractive", norm_E(spec, xhat), x1_norm, tol.identity * x1_norm));
  c.push_back(check_at_most("x_r_self_adjoint", frobenius_distance(out.X, out.X.adjoint()),
                            tol.identity * out.X.frobenius_norm()));
  c.push_back(check_close("first_comm_times_r2", out.first_comm_norm * rr, 1.0, tol.relative));
  c.push_back(check_close("second_over_first_eq_rho", out.second_comm_norm / out.first_comm_norm, out.rho,
                          tol.relative * out.rho));
  c.push_back(check_at_most("schur_commutator_identity", verify_schur_commutator_identity(f, W, out.X),
                            tol.identity * schur_identity_scale(f, W, out.X)));
  return out;
}

DirectSumReport assemble_direct_sum(const SymmetricNormSpec& spec, const std::vector<CommutatorPair>& pairs, int R,
                                    const Tolerances& tol) {
  if (R < 1 || static_cast<std::size_t>(R) > pairs.size()) {
    throw InvalidInput("assemble_direct_sum: R must lie in 1.." + std::to_string(pairs.size()));
  }
  DirectSumReport d;
  d.R = R;
  double first = 0.0, second = 0.0, w = 0.0;
  std::vector<double> merged;
  bool monotone = true;
  for (int i = 0; i < R; ++i) {
    const CommutatorPair& p = pairs[static_cast<std::size_t>(i)];
    d.dimension += p.W.size();
    first += p.first_comm_norm;
    const double next = std::max(second, p.second_comm_norm);
    monotone = monotone && next >= second;
    second = next;
    w += p.w_norm;
    d.first_sup_inf = std::max(d.first_sup_inf, p.first_comm_inf);
    merged.insert(merged.end(), p.first_s.values().begin(), p.first_s.values().end());
    d.first_sum.push_back(first);
    d.second_max.push_back(second);
    d.w_sum.push_back(w);
    d.first_direct.push_back(norm_of_vector(spec, merged));
  }
  const double basel = std::numbers::pi * std::numbers::pi / 6.0;
  double worst_sum = 0.0, worst_triangle = -INFINITY;
  for (int i = 0; i < R; ++i) {
    worst_sum = std::max(worst_sum, d.first_sum[static_cast<std::size_t>(i)]);
    worst_triangle = std::max(worst_triangle, d.first_direct[static_cast<std::size_t>(i)] -
                                                  d.first_sum[static_cast<std::size_t>(i)]);
  }
  d.checks.push_back(check_at_most("first_sum_le_basel", worst_sum, basel, tol.relative));
  d.checks.push_back(check_at_most("direct_norm_le_sum", worst_triangle, 0.0, tol.relative * worst_sum));
  d.checks.push_back(check_at_least("second_max_monotone", monotone ? 1.0 : 0.0, 1.0));
  return d;
}

std::pair<ComplexMatrix, ComplexMatrix> direct_sum_truncation(const std::vector<CommutatorPair>& pairs, int R) {
  if (R < 1 || static_cast<std::size_t>(R) > pairs.size()) {
    throw InvalidInput("direct_sum_truncation: R must lie in 1.." + std::to_string(pairs.size()));
  }
  std::vector<ComplexMatrix> ws, xs;
  for (int i = 0; i < R; ++i) {
    ws.push_back(pairs[static_cast<std::size_t>(i)].W.to_matrix());
    xs.push_back(pairs[static_cast<std::size_t>(i)].X);
  }
  return {block_diagonal(ws), block_diagonal(xs)};
}

bool TheoremReport::passed() const {
  if (!all_pass(checks) || !direct_sum.passed()) return false;
  for (const auto& s : stages)
    if (!s.passed()) return false;
  for (const auto& p : pairs)
    if (!p.passed()) return false;
  return true;
}

TheoremReport run_theorem_main(const PipelineConfig& cfg) {
  validate_config(cfg);
  TheoremReport rep;
  rep.config = cfg;
  TheoremFunctions fn = theorem_functions(cfg);
  rep.p = fn.p;
  rep.s = fn.schedule.s();
  rep.q = fn.schedule.q();
  rep.alpha = fn.schedule.alpha();
  rep.h = fn.h;
  rep.f = fn.f;

  for (int m = 3; m <= cfg.m_max; ++m) {
    try {
      CounterexampleStage st = build_stage(cfg, m, rep.p[static_cast<std::size_t>(m)], *rep.f, *rep.h);
      CommutatorPair pair =
          build_commutator_pair(cfg.spec, *rep.f, st.W, hermitian_candidate(st, *rep.f), m - 2, cfg.tol);
      if (cfg.mode == BlockMode::sup) {
        // the stage witness has zero diagonal blocks, so pinching leaves it unchanged
        pair.checks.push_back(
            check_close("rho_eq_stage_ratio", pair.rho, st.witness.ratio, cfg.tol.relative * st.witness.ratio));
      }
      rep.stages.push_back(std::move(st));
      rep.pairs.push_back(std::move(pair));
    } catch (const StageFailure&) {
      throw;
    } catch (const Error& e) {
      throw StageFailure(m, e.what());
    }
  }
  rep.direct_sum = assemble_direct_sum(cfg.spec, rep.pairs, static_cast<int>(rep.pairs.size()), cfg.tol);

  rep.checks.push_back(check_at_most("schedule_alpha_le_half", rep.alpha, 0.5));
  bool p_monotone = true;
  for (std::size_t i = 1; i < rep.p.size(); ++i) p_monotone = p_monotone && rep.p[i] <= rep.p[i - 1];
  rep.checks.push_back(check_at_least("p_nonincreasing", p_monotone ? 1.0 : 0.0, 1.0));
  double min_step = INFINITY;
  for (std::size_t i = 1; i < rep.stages.size(); ++i)
    if (rep.stages[i].m > 6) min_step = std::min(min_step, rep.stages[i].lower_bound - rep.stages[i - 1].lower_bound);
  if (std::isfinite(min_step)) {
    Check c = check_at_least("bound_strictly_increasing_from_6", min_step, 0.0);
    c.pass = min_step > 0.0;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace schurlab
