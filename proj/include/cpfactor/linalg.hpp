#ifndef CPFACTOR_LINALG_HPP
#define CPFACTOR_LINALG_HPP

#include <Eigen/Dense>
#include <utility>

#include "cpfactor/errors.hpp"

namespace cpf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Thin SVD X = U * diag(sigma) * V^T with U, V column-orthonormal and
/// sigma descending.
struct SvdResult {
  Mat U;
  Vec sigma;
  Mat V;
};

SvdResult svd(const Mat& X);

/// Symmetric factorization A = W W^T with W = U_r diag(sqrt(lambda_i)),
/// keeping eigenvalues above rank_tol * lambda_max. rank_tol < 0 selects the
/// default n * machine-eps.
///
/// Throws NotSymmetric / NotPsd; tiny negative eigenvalues within tolerance
/// are clamped to zero.
std::pair<Mat, int> sym_factor(const Mat& A, double rank_tol = -1.0,
                               double sym_tol = -1.0);

/// Nearest row-orthonormal matrix to X (r x r_plus, r <= r_plus):
/// Q = U V^T from the SVD of X. If rank_deficient is non-null it is set when
/// the smallest singular value of X is <= deficiency_tol; otherwise such
/// inputs throw RankDeficient.
Mat procrustes(const Mat& X, double deficiency_tol = 0.0,
               bool* rank_deficient = nullptr);

/// Entrywise min{M, 0}.
Mat negative_part(const Mat& M);
/// Entrywise max{M, 0}.
Mat positive_part(const Mat& M);

}  // namespace cpf

#endif
