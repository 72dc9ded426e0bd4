#ifndef CPFACTOR_NCG_HPP
#define CPFACTOR_NCG_HPP

#include <functional>
#include <utility>
#include <vector>

#include "cpfactor/line_search.hpp"

namespace cpf {

struct NcgConfig {
  double nu = 1.0;       // > 1/4
  double kappa = 1000.0; // > 0
  double eps_g = 1e-8;   // gradient tolerance (epsilon_1)
  double eps_df = 1e-32; // decrease tolerance (epsilon_2)
  long k_max = 50000;
  bool record_trace = false;
};

struct NcgTraceRecord {
  double f;
  double g_norm;
  double alpha;
  double beta;
  double x_spec_norm;  // ||X||_2 when the point is a matrix iterate
};

struct NcgStats {
  long iters = 0;
  long value_evals = 0;
  long grad_evals = 0;
  long wolfe_violations = 0;    // post-hoc exact recheck of accepted steps
  long descent_violations = 0;  // sufficient-descent condition failures
  long monotone_violations = 0; // f_{k+1} > f_k occurrences
  long beta_cap_violations = 0;
  long collapse_resets = 0;

  void accumulate(const NcgStats& o) {
    iters += o.iters;
    value_evals += o.value_evals;
    grad_evals += o.grad_evals;
    wolfe_violations += o.wolfe_violations;
    descent_violations += o.descent_violations;
    monotone_violations += o.monotone_violations;
    beta_cap_violations += o.beta_cap_violations;
    collapse_resets += o.collapse_resets;
  }
};

struct NcgState {
  Mat x;
  double f = 0.0;
  Mat g;
  Mat d;
  long k = 0;
  double last_beta = 0.0;
  double last_alpha = 0.0;
  std::vector<NcgTraceRecord> trace;
  NcgStats stats;
};

enum class NcgStatus { Converged, StopPredicate, MaxIter, StalledLineSearch };

using StopPredicate = std::function<bool(const NcgState&)>;

/// Capped nonnegative conjugate-gradient parameter: the positive-part PRP
/// variant with restart correction, clamped at kappa ||g_new|| / ||d_old||.
double beta_mmprp(const Mat& g_new, const Mat& g_old, const Mat& d_old,
                  double nu, double kappa);

/// Conjugate gradient with the capped beta rule and a weak-Wolfe line
/// search. Built-in termination requires both ||g||_F < eps_g and
/// f_old - f < eps_df; an optional caller-supplied predicate is consulted
/// each iteration. A collapsed line search resets the direction to -g once;
/// a second consecutive collapse returns StalledLineSearch.
std::pair<NcgState, NcgStatus> ncg_minimize(const SmoothOracle& oracle,
                                            const Mat& x0,
                                            const NcgConfig& config,
                                            const WolfeParams& wolfe,
                                            const StopPredicate& stop = nullptr);

}  // namespace cpf

#endif
