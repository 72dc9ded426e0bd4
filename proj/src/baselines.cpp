#include "cpfactor/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "cpfactor/rng.hpp"

namespace cpf {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void fill_result(const EpmProblem& p, const Mat& Q, long iters, double t0,
                 CpfStatus status, CpfResult& out) {
  Postprocessed post = postprocess(p, Q);
  out.Q = std::move(post.Q);
  out.B = std::move(post.B);
  out.rel_error = post.rel_error;
  out.X_final = Q;
  out.status = status;
  out.ncg_iters = iters;
  out.wall_time = now_seconds() - t0;

  const Mat A = p.W_orig * p.W_orig.transpose();
  const Mat B_raw = positive_part(p.W_orig * Q);
  out.raw_rel_error = (A - B_raw * B_raw.transpose()).norm() / A.norm();
}

void check_start(const EpmProblem& p, const Mat& X0) {
  if (X0.rows() != p.r || X0.cols() != p.r_plus)
    throw BadShape("baseline: X0 has wrong shape");
  const Mat QQt = X0 * X0.transpose() - Mat::Identity(p.r, p.r);
  if (QQt.norm() > 1e-8)
    throw PreconditionViolated("baseline: X0 not row-orthonormal");
}

}  // namespace

CpfResult aph_solve(const EpmProblem& p, const Mat& X0,
                    const ApConfig& config) {
  check_start(p, X0);
  const double t0 = now_seconds();
  const Mat& W = p.W_orig;

  CpfResult out;
  Mat B = positive_part(W * X0);
  Mat Q = X0;
  double f_prev = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= config.k_max; ++k) {
    bool deficient = false;  // a deficient fit still yields orthonormal Q
    Q = procrustes(W.transpose() * B, 1e-14, &deficient);
    B = positive_part(W * Q);
    const double f = (B - W * Q).norm();
    if (config.record_trace)
      out.trace.push_back(NcgTraceRecord{f, 0.0, 0.0, 0.0, 0.0});
    out.f_final = f;
    if (f <= config.eps_abs) {
      fill_result(p, Q, k, t0, CpfStatus::Global, out);
      return out;
    }
    if ((f_prev - f) / f < config.eps_rel) {
      if (f < config.eps_abs) {
        fill_result(p, Q, k, t0, CpfStatus::Global, out);
        return out;
      }
      if (f > std::sqrt(config.eps_abs)) {
        fill_result(p, Q, k, t0, CpfStatus::Local, out);
        return out;
      }
    }
    f_prev = f;
    if (now_seconds() - t0 > config.time_max) {
      fill_result(p, Q, k, t0, CpfStatus::Budget, out);
      return out;
    }
  }
  fill_result(p, Q, config.k_max, t0, CpfStatus::Budget, out);
  return out;
}

CpfResult apg_solve(const EpmProblem& p, const Mat& X0,
                    const ApConfig& config) {
  check_start(p, X0);
  const double t0 = now_seconds();
  const Mat& W = p.W_orig;

  // Moore-Penrose pseudoinverse from the thin SVD, computed once
  SvdResult s = svd(W);
  const double cutoff =
      1e-14 * std::max(W.rows(), W.cols()) * s.sigma.maxCoeff();
  Vec inv = s.sigma;
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv(i) = s.sigma(i) > cutoff ? 1.0 / s.sigma(i) : 0.0;
  const Mat W_pinv = s.V * inv.asDiagonal() * s.U.transpose();

  CpfResult out;
  Mat Q = X0;
  double best_gap = std::numeric_limits<double>::infinity();
  long best_index = 0;
  Mat best_Q = Q;
  for (long k = 1; k <= config.k_max; ++k) {
    const Mat P = Q - W_pinv * negative_part(W * Q);
    bool deficient = false;
    Q = procrustes(P, 1e-14, &deficient);
    const double gap = (Q - P).norm();
    if (config.record_trace)
      out.trace.push_back(NcgTraceRecord{gap, 0.0, 0.0, 0.0, 0.0});
    if (gap < best_gap) {
      best_gap = gap;
      best_index = k;
      best_Q = Q;
    }
    out.f_final = best_gap;
    if (best_gap < config.eps_abs) {
      fill_result(p, best_Q, k, t0, CpfStatus::Global, out);
      return out;
    }
    if (k - best_index >= config.stall_window) {
      fill_result(p, best_Q, k, t0, CpfStatus::Local, out);
      return out;
    }
    if (now_seconds() - t0 > config.time_max) {
      fill_result(p, best_Q, k, t0, CpfStatus::Budget, out);
      return out;
    }
  }
  fill_result(p, best_Q, config.k_max, t0, CpfStatus::Budget, out);
  return out;
}

CpfResult restart_wrap(const ApSolver& solver, const EpmProblem& p,
                       const ApConfig& config, std::uint64_t seed,
                       int max_restarts, double per_run_time) {
  ApConfig run_cfg = config;
  run_cfg.time_max = std::min(config.time_max, per_run_time);

  CpfResult best;
  long total_iters = 0;
  double total_time = 0.0;
  int runs = 0;
  for (; runs <= max_restarts; ++runs) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(runs)));
    const Mat X0 = random_row_orthonormal(p.r, p.r_plus, rng);
    CpfResult res = solver(p, X0, run_cfg);
    total_iters += res.ncg_iters;
    total_time += res.wall_time;
    if (runs == 0 || res.rel_error < best.rel_error) best = std::move(res);
    if (best.status == CpfStatus::Global) {
      ++runs;
      break;
    }
  }
  best.restarts = runs - 1;
  best.ncg_iters = total_iters;
  best.wall_time = total_time;
  best.seed = seed;
  return best;
}

}  // namespace cpf
