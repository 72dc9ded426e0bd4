#ifndef CPFACTOR_EPM_HPP
#define CPFACTOR_EPM_HPP

#include <cstdint>
#include <string>

#include "cpfactor/ncg.hpp"
#include "cpfactor/objective.hpp"

namespace cpf {

enum class CpfStatus { Global, Local, Budget };

std::string to_string(CpfStatus s);

struct CpfResult {
  Mat Q;                  // r x r_plus, row-orthonormal
  Mat B;                  // n x r_plus, nonnegative
  double rel_error = 1.0; // ||A - B B^T||_F / ||A||_F
  CpfStatus status = CpfStatus::Budget;
  long ncg_iters = 0;
  int restarts = 0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;

  // diagnostics
  Mat X_final;                  // terminal optimizer iterate
  double f_final = 0.0;
  double grad_norm_final = 0.0;
  double raw_rel_error = 1.0;   // truncation of W_orig X without projection
  NcgStats stats;
  std::vector<NcgTraceRecord> trace;
};

enum class RestartMode { NegateX, FreshRandom };

struct RepmConfig {
  double eps_stat = 1e-3;       // epsilon_1 of the local-optimum test
  double eps_grad = 1e-13;      // epsilon_2 of the global-optimum test
  double eps_f = 1e-24;
  double eps_df_final = 1e-32;
  long k_max_ncg = 50000;
  long k_total = 500000;
  RestartMode restart_mode = RestartMode::NegateX;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

enum class Classification { LikelyLocal, LikelyGlobal, Undecided };

/// Restart classifier: a near-stationary point with f above the gradient
/// norm is treated as local (the value/gradient ratio blows up only at a
/// global optimum); a tiny value with a tiny gradient certifies global
/// convergence.
Classification classify_point(const EpmProblem& p, const Mat& X,
                              const RepmConfig& config);
Classification classify_value_grad(double f, double grad_norm,
                                   const RepmConfig& config);

struct Postprocessed {
  Mat Q;
  Mat B;
  double rel_error;
};

/// Projects X to the nearest row-orthonormal Q, truncates W_orig Q to a
/// nonnegative factor, and reports the error against A = W_orig W_orig^T.
Postprocessed postprocess(const EpmProblem& p, const Mat& X);

/// Single-run exterior point solve from X0. An optional predicate (e.g. the
/// restart classifier or a time budget) can cut the inner iteration short.
CpfResult epm_solve(const EpmProblem& p, const Mat& X0, const NcgConfig& ncg,
                    const WolfeParams& wolfe,
                    const RepmConfig& thresholds = RepmConfig{},
                    const StopPredicate& stop = {});

/// Restarted exterior point solve; inner runs stop on the classifier and
/// restart from -X or a fresh random row-orthonormal point, under a total
/// iteration budget.
CpfResult repm_solve(const EpmProblem& p, const RepmConfig& config,
                     const NcgConfig& ncg, const WolfeParams& wolfe);

struct StationaryReport {
  Vec sigma;            // singular values of X
  double grad_norm;
  double gap_penalty;   // | lambda ||(WX)_-||_F^2 - sum sigma_i^2 (1 - sigma_i^2) |
  double gap_value;     // | f(X) - 1/4 sum (1 - sigma_i^4) |
  double partial_orth;  // ||(W X_1)^T (W X_2)_-||_F over the nonnegative split
};

StationaryReport stationary_report(const EpmProblem& p, const Mat& X);

/// Blockwise Hessian-like matrix of the active-set quadratic form at a
/// near-stationary X; order (r r_plus) x (r r_plus), symmetric.
Mat second_order_matrix(const EpmProblem& p, const Mat& X);

enum class SecondOrderVerdict {
  PositiveDefinite,
  SemidefiniteCertified,
  Inconclusive
};

struct SecondOrderResult {
  SecondOrderVerdict verdict = SecondOrderVerdict::Inconclusive;
  bool stationarity_warning = false;  // ||grad f|| above the gate
  double lambda_min = 0.0;
};

SecondOrderResult check_second_order(const EpmProblem& p, const Mat& X,
                                     double tol = -1.0,
                                     double stationarity_gate = 1e-6);

/// Single-witness check that Y certifies failure of transversality at Q:
/// S = W^T Y Q^T nonzero, symmetric, and trace-free within tol.
bool transversality_witness(const Mat& W, const Mat& Q, const Mat& Y,
                            double tol = 1e-10);

/// Removes columns of W with 2-norm <= drop_tol (approximate-cp-rank
/// deficient inputs).
Mat shrink_columns(const Mat& W, double drop_tol);

/// Self-describing key = value record of a result.
std::string result_record(const CpfResult& result, const std::string& solver);

}  // namespace cpf

#endif
