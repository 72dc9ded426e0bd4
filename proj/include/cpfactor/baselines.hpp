#ifndef CPFACTOR_BASELINES_HPP
#define CPFACTOR_BASELINES_HPP

#include <functional>

#include "cpfactor/epm.hpp"

namespace cpf {

struct ApConfig {
  double eps_rel = 1e-7;    // relative-decrease threshold
  double eps_abs = 1e-13;   // absolute target on the residual
  long stall_window = 5000; // iterations without a new best gap
  long k_max = 500000;
  double time_max = 120.0;  // seconds
  bool record_trace = false;
};

/// Alternating projection in the spirit of a nearest-orthonormal subproblem:
/// Q_k best fits the previous truncation B_{k-1}, then B_k = (W Q_k)_+.
/// The residual f_k = ||B_k - W Q_k||_F is non-increasing.
CpfResult aph_solve(const EpmProblem& p, const Mat& X0, const ApConfig& config);

/// Alternating projection with a pseudoinverse correction step
/// P_{k+1} = Q_k - W^+ (W Q_k)_-; tracks the running best gap
/// ||Q_i - P_i||_F, which need not be monotone.
CpfResult apg_solve(const EpmProblem& p, const Mat& X0, const ApConfig& config);

using ApSolver = std::function<CpfResult(const EpmProblem&, const Mat&,
                                         const ApConfig&)>;

/// Reruns a solver from fresh seeded row-orthonormal starts until one
/// reports Global, up to max_restarts runs each capped at per_run_time;
/// returns the best (lowest rel_error) result.
CpfResult restart_wrap(const ApSolver& solver, const EpmProblem& p,
                       const ApConfig& config, std::uint64_t seed,
                       int max_restarts = 10, double per_run_time = 20.0);

}  // namespace cpf

#endif
