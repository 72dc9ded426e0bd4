#ifndef CPFACTOR_OBJECTIVE_HPP
#define CPFACTOR_OBJECTIVE_HPP

#include <optional>
#include <utility>

#include "cpfactor/linalg.hpp"

namespace cpf {

/// Prepared problem data for the penalized orthogonal-transformation
/// objective
///   f(X) = 1/4 ||X X^T - I||_F^2 + lambda/2 ||(W_norm X)_-||_F^2
/// over X of order r x r_plus. W_norm has unit-norm rows; W_orig is retained
/// for postprocessing (the two have identical nonnegativity patterns under
/// any X since row_norms > 0).
struct EpmProblem {
  Mat W_orig;      // n x r
  Mat W_norm;      // n x r, unit rows
  Vec row_norms;   // n, positive
  double lambda;   // > 0
  int n = 0;
  int r = 0;
  int r_plus = 0;
  int dropped_rows = 0;  // zero rows removed before normalization
};

/// Builds the problem. Zero rows of W are dropped (they contribute nothing
/// to A); lambda defaults to 2 r / n after row normalization.
EpmProblem build_problem(const Mat& W, int r_plus,
                         std::optional<double> lambda_override = std::nullopt);

double f_value(const EpmProblem& p, const Mat& X);
Mat f_grad(const EpmProblem& p, const Mat& X);
std::pair<double, Mat> f_value_grad(const EpmProblem& p, const Mat& X);

}  // namespace cpf

#endif
