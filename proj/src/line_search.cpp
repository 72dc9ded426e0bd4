#include "cpfactor/line_search.hpp"

#include <cmath>

namespace cpf {

namespace {

double fdot(const Mat& a, const Mat& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace

BracketResult initial_bracket(const std::function<double(double)>& phi,
                              double f0, double slope0,
                              const WolfeParams& params) {
  if (!(slope0 < 0))
    throw PreconditionViolated("initial_bracket: direction is not descent");
  const double eta = params.eta();
  BracketResult b;
  b.alpha_lo = 0.0;
  b.f_lo = f0;
  for (int p = 0; p <= params.p_max; ++p) {
    const double a = std::ldexp(eta, p);
    const double fa = phi(a);
    ++b.value_evals;
    if (fa > f0 + params.rho * a * slope0) {
      b.alpha_hi = a;
      b.f_hi = fa;
      b.found = true;
      return b;
    }
    b.alpha_lo = a;
    b.f_lo = fa;
  }
  // (wolfe1) held all the way out: report the last tested step
  b.alpha_hi = b.alpha_lo;
  b.f_hi = b.f_lo;
  b.found = false;
  return b;
}

double quad_step(double alpha_lo, double alpha_hi, double f_lo, double slope_lo,
                 double f_hi, double eta) {
  const double width = alpha_hi - alpha_lo;
  const double eta_point = eta * alpha_lo + (1.0 - eta) * alpha_hi;
  const double denom = f_hi - f_lo - width * slope_lo;
  double c;
  if (denom <= 0.0) {
    c = eta_point;  // degenerate quadratic, analytic bound failed numerically
  } else {
    c = alpha_lo + 0.5 * width * (-width * slope_lo) / denom;
    if (c < eta_point) c = eta_point;
    if (c > alpha_lo + eta * width) c = alpha_lo + eta * width;
  }
  if (!(c > alpha_lo && c < alpha_hi)) c = 0.5 * (alpha_lo + alpha_hi);
  return c;
}

LineSearchOutcome wolfe_search(const SmoothOracle& oracle, const Mat& x,
                               double f, const Mat& g, const Mat& d,
                               const WolfeParams& params) {
  const double slope0 = fdot(g, d);
  if (!(slope0 < 0))
    throw PreconditionViolated("wolfe_search: direction is not descent");
  const double rho = params.rho;
  const double sigma = params.sigma;
  const double eta = params.eta();

  LineSearchOutcome out;
  const auto phi = [&](double a) { return oracle.value(x + a * d); };
  BracketResult b = initial_bracket(phi, f, slope0, params);
  out.value_evals += b.value_evals;

  if (!b.found) {
    // descent ray within the doubling cap: take the giant step
    const double a = b.alpha_hi;
    out.alpha = a;
    out.x_new = x + a * d;
    Mat ga;
    oracle.value_grad(out.x_new, ga);
    ++out.grad_evals;
    out.f_new = b.f_hi;
    out.g_new = ga;
    out.status = (fdot(ga, d) >= sigma * slope0)
                     ? LineSearchStatus::WolfeSatisfied
                     : LineSearchStatus::IntervalCollapsed;
    return out;
  }

  // Interval endpoints: lower end satisfies (wolfe1) and violates (wolfe2),
  // upper end violates (wolfe1).
  double lo = 0.0, f_lo = f, slope_lo = slope0;
  double hi = b.alpha_hi, f_hi = b.f_hi;
  Mat g_lo = g;

  for (;;) {
    if (hi - lo < params.eps_width * (1.0 + hi)) {
      out.alpha = lo;
      out.x_new = (lo == 0.0) ? x : Mat(x + lo * d);
      out.f_new = f_lo;
      out.g_new = g_lo;
      out.status = LineSearchStatus::IntervalCollapsed;
      return out;
    }
    const double c = quad_step(lo, hi, f_lo, slope_lo, f_hi, eta);
    Mat x_c = x + c * d;
    const double f_c = oracle.value(x_c);
    ++out.value_evals;
    if (f_c > f + rho * c * slope0) {
      hi = c;
      f_hi = f_c;
      continue;
    }
    // (wolfe1) holds at c: only now pay for the gradient
    Mat g_c;
    oracle.value_grad(x_c, g_c);
    ++out.grad_evals;
    const double slope_c = fdot(g_c, d);
    if (slope_c >= sigma * slope0) {
      out.alpha = c;
      out.x_new = std::move(x_c);
      out.f_new = f_c;
      out.g_new = std::move(g_c);
      out.status = LineSearchStatus::WolfeSatisfied;
      return out;
    }
    lo = c;
    f_lo = f_c;
    slope_lo = slope_c;
    g_lo = std::move(g_c);
  }
}

}  // namespace cpf
