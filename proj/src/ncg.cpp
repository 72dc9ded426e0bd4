#include "cpfactor/ncg.hpp"

#include <cmath>

namespace cpf {

namespace {

double fdot(const Mat& a, const Mat& b) {
  return (a.array() * b.array()).sum();
}

double spec_norm(const Mat& X) {
  // largest singular value; trace recording only, cheap at solver sizes
  return X.jacobiSvd().singularValues()(0);
}

}  // namespace

double beta_mmprp(const Mat& g_new, const Mat& g_old, const Mat& d_old,
                  double nu, double kappa) {
  const double g_old_sq = g_old.squaredNorm();
  const double d_old_norm = d_old.norm();
  if (g_old_sq == 0.0 || d_old_norm == 0.0)
    throw PreconditionViolated("beta_mmprp: g_old and d_old must be nonzero");
  const Mat diff = g_new - g_old;
  const double corr = nu * diff.squaredNorm() / g_old_sq;
  const double inner = fdot(g_new, diff - corr * d_old);
  const double raw = std::max(0.0, inner) / g_old_sq;
  const double cap = kappa * g_new.norm() / d_old_norm;
  return std::min(raw, cap);
}

std::pair<NcgState, NcgStatus> ncg_minimize(const SmoothOracle& oracle,
                                            const Mat& x0,
                                            const NcgConfig& config,
                                            const WolfeParams& wolfe,
                                            const StopPredicate& stop) {
  NcgState s;
  s.x = x0;
  Mat g;
  s.f = oracle.value_grad(s.x, g);
  s.g = g;
  s.d = -g;
  ++s.stats.grad_evals;

  const double mu =
      (4.0 * config.nu - 1.0) / (4.0 * config.nu * (1.0 + config.kappa));
  bool collapsed_prev = false;

  for (long k = 1; k <= config.k_max; ++k) {
    s.k = k;
    if (stop && stop(s)) return {std::move(s), NcgStatus::StopPredicate};
    if (s.g.norm() == 0.0) return {std::move(s), NcgStatus::Converged};

    double slope = fdot(s.g, s.d);
    if (!(slope < 0.0)) {
      s.d = -s.g;  // restart on a zero or non-descent direction
      slope = -s.g.squaredNorm();
    }

    LineSearchOutcome ls = wolfe_search(oracle, s.x, s.f, s.g, s.d, wolfe);
    s.stats.value_evals += ls.value_evals;
    s.stats.grad_evals += ls.grad_evals;

    if (ls.status == LineSearchStatus::IntervalCollapsed) {
      ++s.stats.collapse_resets;
      if (collapsed_prev) {
        ++s.stats.iters;
        return {std::move(s), NcgStatus::StalledLineSearch};
      }
      collapsed_prev = true;
      // keep any progress made to the surviving lower endpoint
      if (ls.alpha > 0.0) {
        s.x = std::move(ls.x_new);
        s.f = ls.f_new;
        s.g = std::move(ls.g_new);
      }
      s.d = -s.g;
      s.last_beta = 0.0;
      s.last_alpha = 0.0;
      ++s.stats.iters;
      continue;
    }
    collapsed_prev = false;

    // post-hoc exact recheck of the accepted step (zero slack)
    const double f_old = s.f;
    if (!(ls.f_new <= f_old + wolfe.rho * ls.alpha * slope))
      ++s.stats.wolfe_violations;
    if (!(fdot(ls.g_new, s.d) >= wolfe.sigma * slope))
      ++s.stats.wolfe_violations;
    if (!(ls.f_new <= f_old)) ++s.stats.monotone_violations;

    const Mat g_old = s.g;
    const Mat d_old = s.d;
    s.x = std::move(ls.x_new);
    s.f = ls.f_new;
    s.g = std::move(ls.g_new);
    s.last_alpha = ls.alpha;
    ++s.stats.iters;

    if (s.g.norm() < config.eps_g && f_old - s.f < config.eps_df)
      return {std::move(s), NcgStatus::Converged};

    double beta = 0.0;
    if (d_old.norm() > 0.0 && g_old.norm() > 0.0)
      beta = beta_mmprp(s.g, g_old, d_old, config.nu, config.kappa);
    if (!(beta >= 0.0 && beta <= config.kappa * s.g.norm() / d_old.norm()))
      ++s.stats.beta_cap_violations;
    s.d = -s.g + beta * d_old;
    s.last_beta = beta;

    if (!(fdot(s.d, s.g) <= -mu * s.d.norm() * s.g.norm()))
      ++s.stats.descent_violations;

    if (config.record_trace)
      s.trace.push_back(NcgTraceRecord{s.f, s.g.norm(), s.last_alpha, beta,
                                       spec_norm(s.x)});
  }
  return {std::move(s), NcgStatus::MaxIter};
}

}  // namespace cpf
