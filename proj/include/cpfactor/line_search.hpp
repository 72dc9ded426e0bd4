#ifndef CPFACTOR_LINE_SEARCH_HPP
#define CPFACTOR_LINE_SEARCH_HPP

#include <functional>

#include "cpfactor/linalg.hpp"

namespace cpf {

/// Callback contract for a continuously differentiable objective:
/// value(x) and value_grad(x, g) must be deterministic and agree.
struct SmoothOracle {
  std::function<double(const Mat&)> value;
  std::function<double(const Mat&, Mat&)> value_grad;
};

struct WolfeParams {
  double rho = 0.1;
  double sigma = 0.4;          // requires 0 < 2 rho < sigma < 1
  double eps_width = 1e-16;    // interval collapse, scaled by (1 + alpha'')
  int p_max = 60;              // bracket doubling cap

  double eta() const { return sigma / (2.0 * (sigma - rho)); }  // in (1/2, 1)
};

enum class LineSearchStatus { WolfeSatisfied, IntervalCollapsed };

struct LineSearchOutcome {
  double alpha = 0.0;
  Mat x_new;
  double f_new = 0.0;
  Mat g_new;
  LineSearchStatus status = LineSearchStatus::WolfeSatisfied;
  int value_evals = 0;
  int grad_evals = 0;
};

struct BracketResult {
  double alpha_lo = 0.0;  // largest tested step still satisfying (wolfe1)
  double alpha_hi = 0.0;  // first step of the form 2^p eta violating (wolfe1)
  double f_lo = 0.0;
  double f_hi = 0.0;
  bool found = false;  // false: (wolfe1) held up to 2^p_max eta (descent ray)
  int value_evals = 0;
};

/// Doubling bracket for the upper end of the initial interval: the smallest
/// alpha = 2^p eta, integer p >= 0, violating the sufficient-decrease
/// condition. phi(alpha) evaluates the objective along the ray.
BracketResult initial_bracket(const std::function<double(double)>& phi,
                              double f0, double slope0,
                              const WolfeParams& params);

/// Safeguarded quadratic-interpolation step inside (alpha_lo, alpha_hi):
/// the interpolant minimizer clamped from below by the eta-weighted point.
/// A nonpositive interpolation denominator falls back to the eta-weighted
/// point.
double quad_step(double alpha_lo, double alpha_hi, double f_lo, double slope_lo,
                 double f_hi, double eta);

/// Inexact line search producing a step satisfying the weak Wolfe
/// conditions, by quadratic interpolation with safeguarded interval
/// shrinking. Requires <g, d> < 0, f = value at x, g = gradient at x.
LineSearchOutcome wolfe_search(const SmoothOracle& oracle, const Mat& x,
                               double f, const Mat& g, const Mat& d,
                               const WolfeParams& params);

}  // namespace cpf

#endif
