#include "cpfactor/rng.hpp"

#include <cmath>

namespace cpf {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(theta);
  have_spare_ = true;
  return radius * std::cos(theta);
}

Mat random_gaussian(int rows, int cols, Rng& rng) {
  Mat M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = rng.normal();
  return M;
}

Mat random_row_orthonormal(int r, int r_plus, Rng& rng) {
  // A Gaussian matrix is full row rank almost surely; retry on the null set.
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat G = random_gaussian(r, r_plus, rng);
    bool deficient = false;
    Mat Q = procrustes(G, 1e-12, &deficient);
    if (!deficient) return Q;
  }
  throw Error("random_row_orthonormal: repeated rank-deficient draws");
}

}  // namespace cpf
