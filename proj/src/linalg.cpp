#include "cpfactor/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace cpf {

SvdResult svd(const Mat& X) {
  if (!X.allFinite()) throw Error("svd: input has non-finite entries");
  Eigen::BDCSVD<Mat> dec(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success)
    throw ConvergenceFailure("svd: iterative kernel did not converge");
  return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

std::pair<Mat, int> sym_factor(const Mat& A, double rank_tol, double sym_tol) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw BadShape("sym_factor: matrix is not square");
  const double scale = A.cwiseAbs().maxCoeff();
  if (sym_tol < 0) sym_tol = 1e-12 * std::max(1.0, scale);
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > sym_tol)
    throw NotSymmetric("sym_factor: asymmetry exceeds tolerance");
  if (A.minCoeff() < -sym_tol)
    throw Error("sym_factor: matrix has negative entries");

  const Mat As = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(As);
  if (eig.info() != Eigen::Success)
    throw ConvergenceFailure("sym_factor: eigendecomposition failed");
  const Vec& lam = eig.eigenvalues();  // ascending
  const double lam_max = lam(n - 1);
  if (lam_max <= 0) return {Mat::Zero(n, 0), 0};
  if (rank_tol < 0)
    rank_tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  const double cut = rank_tol * lam_max;

  int r = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam(i) > cut) ++r;
    if (lam(i) < -cut)
      throw NotPsd("sym_factor: materially negative eigenvalue");
  }
  Mat W(n, r);
  for (int j = 0; j < r; ++j) {
    const Eigen::Index i = n - r + j;  // largest r eigenvalues, descending-ish
    W.col(j) = eig.eigenvectors().col(n - 1 - j) *
               std::sqrt(std::max(lam(n - 1 - j), 0.0));
    (void)i;
  }
  return {W, r};
}

Mat procrustes(const Mat& X, double deficiency_tol, bool* rank_deficient) {
  if (X.rows() > X.cols())
    throw BadShape("procrustes: expected r <= r_plus");
  SvdResult s = svd(X);
  const bool deficient = s.sigma(s.sigma.size() - 1) <= deficiency_tol;
  if (rank_deficient)
    *rank_deficient = deficient;
  else if (deficient)
    throw RankDeficient("procrustes: input is (numerically) row rank deficient");
  return s.U * s.V.transpose();
}

Mat negative_part(const Mat& M) { return M.cwiseMin(0.0); }

Mat positive_part(const Mat& M) { return M.cwiseMax(0.0); }

}  // namespace cpf
