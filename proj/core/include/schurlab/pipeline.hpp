#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "schurlab/construct.hpp"
#include "schurlab/funcs.hpp"
#include "schurlab/matrix.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/symnorm.hpp"

namespace schurlab {

// K0 = (1 - e^-1) / 4, K1 = 2 K0 / (3 pi).
double constant_K0();
double constant_K1();

struct Tolerances {
  double identity = 1e-12;  // Frobenius residuals, relative to their scale
  double relative = 1e-9;   // norm equalities and the stage lower bound
  double schedule = 1e-12;  // h(s_m) = q_m and ||W_m||_E <= 1/m^2
  double grouping = 1e-12;  // spectral grouping, relative gap between neighbours
};

struct PipelineConfig {
  SymmetricNormSpec spec = SymmetricNormSpec::schatten(kInf);
  BlockMode mode = BlockMode::sup;
  SingularValueSequence x0 = SingularValueSequence({1.0});
  int m_max = 64;
  double eps = 0.5;
  Tolerances tol;
  std::size_t size_cap = 2000;
};

// Runs verify_block_family for every lift size n = 2m, m = 1..m_max, and
// checks the scalar fields. Throws InvalidInput with the first failure.
void validate_config(const PipelineConfig& cfg);

// A certified inequality or identity. `tol` is the absolute slack allowed past
// the threshold; margin >= -tol exactly when the check passes.
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  double tol = 0.0;
};

Check check_at_most(std::string name, double value, double threshold, double tol = 0.0);
Check check_at_least(std::string name, double value, double threshold, double tol = 0.0);
// |value - target| <= tol; threshold holds the target.
Check check_close(std::string name, double value, double target, double tol);
bool all_pass(const std::vector<Check>& checks);

// (log(m + e))^(1/2).
double q_sequence(int m);

// p_0 = 1 and 1/p_m = max{1, 1/p_{m-1}, m^2 ||Phi_2m(B_m)||_E, q_m^2 / (e q_{m-1}^2) / p_{m-1}}.
std::vector<double> p_sequence(const PipelineConfig& cfg, int m_max);

// s_m = m - log p_m, q_m for m = 0..|p|-1.
GrowthSchedule theorem_schedule(const std::vector<double>& p);

// p_m, the schedule (s_m, q_m) and the functions h, f built from it.
struct TheoremFunctions {
  std::vector<double> p;
  GrowthSchedule schedule;
  ScalarC1Function h;
  ScalarC1Function f;
};

TheoremFunctions theorem_functions(const PipelineConfig& cfg);

struct InfestimateReport {
  int m = 0;
  double p = 0.0;
  double hilbert_norm = 0.0;  // ||[B, A]||_inf
  double comm_norm = 0.0;     // ||[f(pB), A]||_inf
  double reduced_norm = 0.0;  // ||[f(pD), V]||_inf
  double bound = 0.0;         // p K0 log(m/2) / h(m - log p)
  std::vector<Check> checks;
  bool passed() const { return all_pass(checks); }
};

// Throws DomainError if p e^-1 lies outside the domain of f.
InfestimateReport infestimate_check(int m, double p, const ScalarC1Function& f, const ScalarC1Function& h,
                                    const Tolerances& tol = {});

struct CounterexampleStage {
  int m = 0;
  double p = 0.0;
  double q = 0.0;
  double s = 0.0;
  DiagonalOperator W;          // Phi_2m(p B_m)
  double w_norm = 0.0;         // ||W||_E
  double lower_bound = 0.0;    // K1 log(m/2) / h(s)
  double base_ratio = 0.0;     // ||M_f(pB)(X_inf)||_inf / ||X_inf||_inf
  BlowupWitness witness;       // in the lifted space, ratio is the achieved one
  InfestimateReport infestimate;
  std::vector<Check> checks;
  bool passed() const { return all_pass(checks) && infestimate.passed(); }
};

// One stage of the counterexample for the given p_m. `scheduled` adds the
// check h(s) = q_m, which only holds when p is the theorem sequence.
// Throws SizeLimitError when 2m|x0| exceeds cfg.size_cap.
CounterexampleStage build_stage(const PipelineConfig& cfg, int m, double p, const ScalarC1Function& f,
                                const ScalarC1Function& h, bool scheduled = true);

struct CommutatorPair {
  int r = 0;
  DiagonalOperator W;
  ComplexMatrix X;             // X_r, self-adjoint
  double first_comm_norm = 0.0;   // ||[W, X_r]||_E
  double second_comm_norm = 0.0;  // ||[f(W), X_r]||_E
  double first_comm_inf = 0.0;    // ||[W, X_r]||_inf
  double w_norm = 0.0;
  double rho = 0.0;            // ||M_f(W)(X2)||_E / ||X2||_E
  bool meets_cubic = false;    // rho >= 2 r^3
  SingularValueSequence first_s;   // s-numbers of [W, X_r]
  SingularValueSequence second_s;  // s-numbers of [f(W), X_r]
  std::vector<Check> checks;
  bool passed() const { return all_pass(checks); }
};

// Pinches X1 along the spectrum of W, solves X2 = i[W, X3] and scales to
// X_r = r^-2 ||X2||_E^-1 X3. Throws InvalidInput unless X1 is self-adjoint,
// NoWitness if M_f(W)(X1) = 0 and DegenerateWitness if X2 = 0.
CommutatorPair build_commutator_pair(const SymmetricNormSpec& spec, const ScalarC1Function& f,
                                     const DiagonalOperator& W, const ComplexMatrix& X1, int r,
                                     const Tolerances& tol = {});

struct DirectSumReport {
  int R = 0;
  std::size_t dimension = 0;
  // Prefix series over r = 1..R.
  std::vector<double> first_sum;    // sum ||[W_r, X_r]||_E
  std::vector<double> second_max;   // max ||[f(W_r), X_r]||_E
  std::vector<double> w_sum;        // sum ||W_r||_E
  std::vector<double> first_direct; // ||(+) [W_r, X_r]||_E from merged s-numbers
  double first_sup_inf = 0.0;       // sup ||[W_r, X_r]||_inf
  std::vector<Check> checks;
  bool passed() const { return all_pass(checks); }
};

// Throws InvalidInput unless 1 <= R <= |pairs|.
DirectSumReport assemble_direct_sum(const SymmetricNormSpec& spec, const std::vector<CommutatorPair>& pairs, int R,
                                    const Tolerances& tol = {});

// Materialized truncations (+)_{r<=R} W_r and (+)_{r<=R} X_r.
std::pair<ComplexMatrix, ComplexMatrix> direct_sum_truncation(const std::vector<CommutatorPair>& pairs, int R);

struct TheoremReport {
  PipelineConfig config;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> s;
  double alpha = 0.0;
  std::optional<ScalarC1Function> h;
  std::optional<ScalarC1Function> f;
  std::vector<CounterexampleStage> stages;
  std::vector<CommutatorPair> pairs;
  DirectSumReport direct_sum;
  std::vector<Check> checks;  // cross-stage properties
  bool passed() const;
};

// The self-adjoint candidate handed to build_commutator_pair for a stage.
ComplexMatrix hermitian_candidate(const CounterexampleStage& stage, const ScalarC1Function& f);

// Stages m = 3..m_max, pairs with r = m - 2. Exceptions from a stage are
// rethrown as StageFailure.
TheoremReport run_theorem_main(const PipelineConfig& cfg);

}  // namespace schurlab
