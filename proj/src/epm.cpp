#include "cpfactor/epm.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "cpfactor/rng.hpp"

namespace cpf {

namespace {

SmoothOracle make_oracle(const EpmProblem& p) {
  SmoothOracle o;
  o.value = [&p](const Mat& X) { return f_value(p, X); };
  o.value_grad = [&p](const Mat& X, Mat& g) {
    auto [v, grad] = f_value_grad(p, X);
    g = std::move(grad);
    return v;
  };
  return o;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void finish_result(const EpmProblem& p, const Mat& X, double f, double g_norm,
                   CpfResult& out) {
  Postprocessed post = postprocess(p, X);
  out.Q = std::move(post.Q);
  out.B = std::move(post.B);
  out.rel_error = post.rel_error;
  out.X_final = X;
  out.f_final = f;
  out.grad_norm_final = g_norm;

  const Mat A = p.W_orig * p.W_orig.transpose();
  const Mat B_raw = positive_part(p.W_orig * X);
  out.raw_rel_error = (A - B_raw * B_raw.transpose()).norm() / A.norm();
}

}  // namespace

std::string to_string(CpfStatus s) {
  switch (s) {
    case CpfStatus::Global: return "global";
    case CpfStatus::Local: return "local";
    case CpfStatus::Budget: return "budget";
  }
  return "unknown";
}

Classification classify_value_grad(double f, double grad_norm,
                                   const RepmConfig& config) {
  if (grad_norm < config.eps_grad && f < config.eps_f)
    return Classification::LikelyGlobal;
  if (grad_norm < config.eps_stat && f > grad_norm)
    return Classification::LikelyLocal;
  return Classification::Undecided;
}

Classification classify_point(const EpmProblem& p, const Mat& X,
                              const RepmConfig& config) {
  auto [f, g] = f_value_grad(p, X);
  return classify_value_grad(f, g.norm(), config);
}

Postprocessed postprocess(const EpmProblem& p, const Mat& X) {
  Mat Q = procrustes(X, 1e-14);
  Mat B = positive_part(p.W_orig * Q);
  const Mat A = p.W_orig * p.W_orig.transpose();
  const double rel = (A - B * B.transpose()).norm() / A.norm();
  return Postprocessed{std::move(Q), std::move(B), rel};
}

CpfResult epm_solve(const EpmProblem& p, const Mat& X0, const NcgConfig& ncg,
                    const WolfeParams& wolfe, const RepmConfig& thresholds,
                    const StopPredicate& stop) {
  if (X0.rows() != p.r || X0.cols() != p.r_plus)
    throw BadShape("epm_solve: X0 has wrong shape");
  const double t0 = now_seconds();
  SmoothOracle oracle = make_oracle(p);
  auto [state, status] = ncg_minimize(oracle, X0, ncg, wolfe, stop);

  CpfResult out;
  out.ncg_iters = state.stats.iters;
  out.stats = state.stats;
  out.trace = std::move(state.trace);
  const double g_norm = state.g.norm();
  finish_result(p, state.x, state.f, g_norm, out);

  if (state.f < thresholds.eps_f && g_norm < thresholds.eps_grad)
    out.status = CpfStatus::Global;
  else if (status == NcgStatus::MaxIter)
    out.status = CpfStatus::Budget;
  else
    out.status = CpfStatus::Local;
  out.wall_time = now_seconds() - t0;
  return out;
}

CpfResult repm_solve(const EpmProblem& p, const RepmConfig& config,
                     const NcgConfig& ncg, const WolfeParams& wolfe) {
  const double t0 = now_seconds();
  SmoothOracle oracle = make_oracle(p);
  Rng rng(config.seed);

  CpfResult out;
  out.seed = config.seed;
  Mat X0 = random_row_orthonormal(p.r, p.r_plus, rng);
  long k_used = 0;
  int restarts = 0;
  NcgState last_state;
  bool have_state = false;

  while (k_used < config.k_total) {
    NcgConfig inner = ncg;
    inner.k_max = std::min(config.k_max_ncg, config.k_total - k_used);
    inner.record_trace = config.record_trace;
    inner.eps_g = 0.0;  // inner runs stop on the classifier, not the gate
    const StopPredicate stop = [&](const NcgState& s) {
      return classify_value_grad(s.f, s.g.norm(), config) !=
             Classification::Undecided;
    };
    auto [state, status] = ncg_minimize(oracle, X0, inner, wolfe, stop);
    (void)status;
    k_used += std::max(1L, state.stats.iters);  // a no-progress run still bills
    out.stats.accumulate(state.stats);
    if (config.record_trace)
      out.trace.insert(out.trace.end(), state.trace.begin(), state.trace.end());

    const Classification cls =
        classify_value_grad(state.f, state.g.norm(), config);
    if (cls == Classification::LikelyGlobal && k_used < config.k_total) {
      // polish until the decrease per step dries up
      NcgConfig polish = ncg;
      polish.k_max = config.k_total - k_used;
      polish.eps_g = std::numeric_limits<double>::infinity();
      polish.eps_df = config.eps_df_final;
      polish.record_trace = config.record_trace;
      auto [pstate, pstatus] = ncg_minimize(oracle, state.x, polish, wolfe);
      (void)pstatus;
      k_used += pstate.stats.iters;
      out.stats.accumulate(pstate.stats);
      if (config.record_trace)
        out.trace.insert(out.trace.end(), pstate.trace.begin(),
                         pstate.trace.end());
      last_state = std::move(pstate);
      have_state = true;
      break;
    }
    last_state = std::move(state);
    have_state = true;
    if (cls == Classification::LikelyGlobal) break;

    if (k_used >= config.k_total) break;
    ++restarts;
    X0 = (config.restart_mode == RestartMode::NegateX)
             ? Mat(-last_state.x)
             : random_row_orthonormal(p.r, p.r_plus, rng);
  }

  if (!have_state) {
    // k_total <= 0: classify the initial point, result still well-formed
    auto [f, g] = f_value_grad(p, X0);
    last_state.x = X0;
    last_state.f = f;
    last_state.g = g;
  }

  out.ncg_iters = k_used;
  out.restarts = restarts;
  const double g_norm = last_state.g.norm();
  finish_result(p, last_state.x, last_state.f, g_norm, out);
  if (last_state.f < config.eps_f && g_norm < config.eps_grad)
    out.status = CpfStatus::Global;
  else if (k_used >= config.k_total)
    out.status = CpfStatus::Budget;
  else
    out.status = CpfStatus::Local;
  out.wall_time = now_seconds() - t0;
  return out;
}

StationaryReport stationary_report(const EpmProblem& p, const Mat& X) {
  StationaryReport rep;
  SvdResult s = svd(X);
  rep.sigma = s.sigma;

  auto [f, g] = f_value_grad(p, X);
  rep.grad_norm = g.norm();

  const Mat WX = p.W_norm * X;
  double sum_pen = 0.0, sum_val = 0.0;
  for (Eigen::Index i = 0; i < s.sigma.size(); ++i) {
    const double s2 = s.sigma(i) * s.sigma(i);
    sum_pen += s2 * (1.0 - s2);
    sum_val += 1.0 - s2 * s2;
  }
  rep.gap_penalty =
      std::abs(p.lambda * negative_part(WX).squaredNorm() - sum_pen);
  rep.gap_value = std::abs(f - 0.25 * sum_val);

  // column split: X1 = columns whose image under W is nonnegative
  const double split_tol = 1e-10 * WX.cwiseAbs().maxCoeff();
  std::vector<int> nn_cols, other_cols;
  for (int j = 0; j < p.r_plus; ++j) {
    if (WX.col(j).minCoeff() >= -split_tol)
      nn_cols.push_back(j);
    else
      other_cols.push_back(j);
  }
  if (nn_cols.empty() || other_cols.empty()) {
    rep.partial_orth = 0.0;
  } else {
    Mat WX1(p.n, static_cast<int>(nn_cols.size()));
    Mat WX2(p.n, static_cast<int>(other_cols.size()));
    for (std::size_t j = 0; j < nn_cols.size(); ++j)
      WX1.col(j) = WX.col(nn_cols[j]);
    for (std::size_t j = 0; j < other_cols.size(); ++j)
      WX2.col(j) = WX.col(other_cols[j]);
    rep.partial_orth = (WX1.transpose() * negative_part(WX2)).norm();
  }
  return rep;
}

Mat second_order_matrix(const EpmProblem& p, const Mat& X) {
  const int r = p.r;
  const int rp = p.r_plus;
  const Mat G = X * X.transpose() - Mat::Identity(r, r);
  const Mat WX = p.W_norm * X;
  const Mat XtX = X.transpose() * X;  // rp x rp, entries x_i^T x_j

  Mat S(r * rp, r * rp);
  for (int i = 0; i < rp; ++i) {
    for (int j = 0; j < rp; ++j) {
      Mat block = XtX(i, j) * Mat::Identity(r, r) +
                  X.col(j) * X.col(i).transpose();
      if (i == j) {
        block += G;
        Vec t = (WX.col(i).array() < 0.0).cast<double>();
        block += p.lambda * (p.W_norm.transpose() * t.asDiagonal() * p.W_norm);
      }
      S.block(i * r, j * r, r, r) = block;
    }
  }
  return 0.5 * (S + S.transpose());
}

SecondOrderResult check_second_order(const EpmProblem& p, const Mat& X,
                                     double tol, double stationarity_gate) {
  SecondOrderResult res;
  res.stationarity_warning = f_grad(p, X).norm() > stationarity_gate;

  const Mat S = second_order_matrix(p, X);
  Eigen::SelfAdjointEigenSolver<Mat> eig(S);
  const Vec& lam = eig.eigenvalues();
  const double lam_max_abs =
      std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
  if (tol < 0) tol = 1e-8 * std::max(1.0, lam_max_abs);
  res.lambda_min = lam(0);

  if (lam(0) > tol) {
    res.verdict = SecondOrderVerdict::PositiveDefinite;
    return res;
  }
  if (lam(0) < -tol) {
    res.verdict = SecondOrderVerdict::Inconclusive;
    return res;
  }
  // semidefinite branch: near-null eigenvectors must be tangent
  // (Delta X^T + X Delta^T = 0) and the positive spectrum must clear ||X||_2^2
  const double x_spec_sq = [&] {
    const Vec sv = X.jacobiSvd().singularValues();
    return sv(0) * sv(0);
  }();
  bool ok = true;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (std::abs(lam(k)) <= tol) {
      // column-stacked reshape of the eigenvector
      Mat Delta(p.r, p.r_plus);
      for (int j = 0; j < p.r_plus; ++j)
        Delta.col(j) = eig.eigenvectors().col(k).segment(j * p.r, p.r);
      if ((Delta * X.transpose() + X * Delta.transpose()).norm() > tol) {
        ok = false;
        break;
      }
    } else if (lam(k) > tol && lam(k) < x_spec_sq) {
      ok = false;
      break;
    }
  }
  res.verdict =
      ok ? SecondOrderVerdict::SemidefiniteCertified : SecondOrderVerdict::Inconclusive;
  return res;
}

bool transversality_witness(const Mat& W, const Mat& Q, const Mat& Y,
                            double tol) {
  const Eigen::Index r = Q.rows();
  if ((Q * Q.transpose() - Mat::Identity(r, r)).norm() > tol * 10 + 1e-8)
    throw PreconditionViolated("transversality_witness: Q not row-orthonormal");
  if ((W * Q).minCoeff() < -(tol * 10 + 1e-8))
    throw PreconditionViolated("transversality_witness: WQ not nonnegative");
  if (Y.minCoeff() < 0)
    throw PreconditionViolated("transversality_witness: Y not nonnegative");
  const Mat S = W.transpose() * Y * Q.transpose();
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if (S.norm() <= tol) return false;
  if ((S - S.transpose()).norm() > tol * scale) return false;
  return std::abs(S.trace()) <= tol * scale;
}

Mat shrink_columns(const Mat& W, double drop_tol) {
  std::vector<int> keep;
  for (int j = 0; j < W.cols(); ++j)
    if (W.col(j).norm() > drop_tol) keep.push_back(j);
  if (keep.empty())
    throw AllColumnsDropped("shrink_columns: no columns remain");
  Mat Ws(W.rows(), static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) Ws.col(j) = W.col(keep[j]);
  return Ws;
}

std::string result_record(const CpfResult& result, const std::string& solver) {
  std::ostringstream os;
  os.precision(17);
  os << "solver = " << solver << "\n"
     << "status = " << to_string(result.status) << "\n"
     << "rel_error = " << result.rel_error << "\n"
     << "raw_rel_error = " << result.raw_rel_error << "\n"
     << "f_final = " << result.f_final << "\n"
     << "grad_norm_final = " << result.grad_norm_final << "\n"
     << "iters = " << result.ncg_iters << "\n"
     << "restarts = " << result.restarts << "\n"
     << "wall_time = " << result.wall_time << "\n"
     << "seed = " << result.seed << "\n";
  return os.str();
}

}  // namespace cpf
