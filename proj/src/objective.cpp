#include "cpfactor/objective.hpp"

#include <cmath>
#include <iostream>

namespace cpf {

EpmProblem build_problem(const Mat& W, int r_plus,
                         std::optional<double> lambda_override) {
  const int r = static_cast<int>(W.cols());
  if (r_plus < r) throw BadShape("build_problem: r_plus < r");
  if (r == 0) throw BadShape("build_problem: W has no columns");

  // drop zero rows before normalization
  std::vector<Eigen::Index> keep;
  keep.reserve(W.rows());
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    if (W.row(i).norm() > 0.0) keep.push_back(i);
  const int dropped = static_cast<int>(W.rows()) - static_cast<int>(keep.size());
  if (dropped > 0)
    std::cerr << "warning: dropping " << dropped
              << " zero row(s) of W before normalization\n";
  if (keep.empty()) throw BadShape("build_problem: all rows of W are zero");

  EpmProblem p;
  p.n = static_cast<int>(keep.size());
  p.r = r;
  p.r_plus = r_plus;
  p.dropped_rows = dropped;
  p.W_orig.resize(p.n, r);
  for (int i = 0; i < p.n; ++i) p.W_orig.row(i) = W.row(keep[i]);
  p.row_norms = p.W_orig.rowwise().norm();
  p.W_norm = p.row_norms.cwiseInverse().asDiagonal() * p.W_orig;
  p.lambda = lambda_override.value_or(2.0 * r / static_cast<double>(p.n));
  if (p.lambda <= 0) throw BadSpec("build_problem: lambda must be positive");
  return p;
}

double f_value(const EpmProblem& p, const Mat& X) {
  if (X.rows() != p.r || X.cols() != p.r_plus)
    throw BadShape("f_value: X has wrong shape");
  const Mat G = X * X.transpose() - Mat::Identity(p.r, p.r);
  const Mat N = negative_part(p.W_norm * X);
  return 0.25 * G.squaredNorm() + 0.5 * p.lambda * N.squaredNorm();
}

Mat f_grad(const EpmProblem& p, const Mat& X) {
  if (X.rows() != p.r || X.cols() != p.r_plus)
    throw BadShape("f_grad: X has wrong shape");
  const Mat G = X * X.transpose() - Mat::Identity(p.r, p.r);
  const Mat N = negative_part(p.W_norm * X);
  return G * X + p.lambda * (p.W_norm.transpose() * N);
}

std::pair<double, Mat> f_value_grad(const EpmProblem& p, const Mat& X) {
  if (X.rows() != p.r || X.cols() != p.r_plus)
    throw BadShape("f_value_grad: X has wrong shape");
  const Mat G = X * X.transpose() - Mat::Identity(p.r, p.r);
  const Mat N = negative_part(p.W_norm * X);
  const double val = 0.25 * G.squaredNorm() + 0.5 * p.lambda * N.squaredNorm();
  Mat grad = G * X + p.lambda * (p.W_norm.transpose() * N);
  return {val, std::move(grad)};
}

}  // namespace cpf
