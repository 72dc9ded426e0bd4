#include <doctest.h>

#include <cmath>

#include "cpfactor/objective.hpp"
#include "cpfactor/rng.hpp"

using namespace cpf;

namespace {

// scalar-loop evaluation, deliberately naive, as the independent oracle
double f_naive(const EpmProblem& p, const Mat& X) {
  double orth = 0.0;
  for (int i = 0; i < p.r; ++i)
    for (int j = 0; j < p.r; ++j) {
      double g = i == j ? -1.0 : 0.0;
      for (int k = 0; k < p.r_plus; ++k) g += X(i, k) * X(j, k);
      orth += g * g;
    }
  double pen = 0.0;
  for (int i = 0; i < p.n; ++i)
    for (int k = 0; k < p.r_plus; ++k) {
      double v = 0.0;
      for (int j = 0; j < p.r; ++j) v += p.W_norm(i, j) * X(j, k);
      if (v < 0.0) pen += v * v;
    }
  return 0.25 * orth + 0.5 * p.lambda * pen;
}

Mat identity_slab(int r, int r_plus) {
  Mat X = Mat::Zero(r, r_plus);
  X.topLeftCorner(r, r).setIdentity();
  return X;
}

EpmProblem random_problem(int n, int r, int r_plus, std::uint64_t seed) {
  Rng rng(seed);
  Mat W(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) W(i, j) = rng.normal();
  return build_problem(W, r_plus);
}

}  // namespace

TEST_CASE("build_problem defaults") {
  EpmProblem p = build_problem(Mat::Identity(3, 3), 3);
  CHECK(p.lambda == doctest::Approx(2.0));
  CHECK((p.W_norm - Mat::Identity(3, 3)).norm() < 1e-14);

  Mat W(2, 2);
  W << 2, 0, 0, 1;
  EpmProblem q = build_problem(W, 3);
  CHECK(q.row_norms(0) == doctest::Approx(2.0));
  CHECK(q.row_norms(1) == doctest::Approx(1.0));
  for (int i = 0; i < 2; ++i)
    CHECK(q.W_norm.row(i).norm() == doctest::Approx(1.0));
  CHECK((q.W_orig - q.row_norms.asDiagonal() * q.W_norm).norm() <
        1e-12 * q.W_orig.norm());

  EpmProblem big = random_problem(200, 10, 10, 1);
  CHECK(big.lambda == doctest::Approx(0.1));

  CHECK_THROWS_AS(build_problem(Mat::Identity(3, 3), 2), BadShape);
}

TEST_CASE("objective vanishes on a feasible slab") {
  Rng rng(5);
  Mat W(6, 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) W(i, j) = rng.uniform() + 0.05;
  EpmProblem p = build_problem(W, 5);
  const Mat X = identity_slab(3, 5);
  CHECK(f_value(p, X) == 0.0);
  CHECK(f_grad(p, X).norm() == 0.0);
}

TEST_CASE("objective at the origin is r/4") {
  EpmProblem p = random_problem(8, 4, 6, 9);
  const Mat X = Mat::Zero(4, 6);
  CHECK(f_value(p, X) == doctest::Approx(1.0));
  CHECK(f_grad(p, X).norm() == 0.0);
}

TEST_CASE("objective agrees with the scalar-loop oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EpmProblem p = random_problem(12, 4, 6, 100 + seed);
    Rng rng(200 + seed);
    const Mat X = random_gaussian(4, 6, rng);
    const double fv = f_value(p, X);
    CHECK(fv == doctest::Approx(f_naive(p, X)).epsilon(1e-14));
    CHECK(fv >= 0.0);
  }
}

TEST_CASE("gradient matches central finite differences away from kinks") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 100; ++seed) {
    EpmProblem p = random_problem(10, 3, 5, 300 + seed);
    Rng rng(400 + seed);
    const Mat X = random_gaussian(3, 5, rng);
    if ((p.W_norm * X).cwiseAbs().minCoeff() <= 1e-3) continue;
    const Mat g = f_grad(p, X);
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 5; ++j) {
        Mat Xp = X, Xm = X;
        Xp(i, j) += h;
        Xm(i, j) -= h;
        const double fd = (f_value(p, Xp) - f_value(p, Xm)) / (2 * h);
        CHECK(std::abs(fd - g(i, j)) <=
              1e-6 * std::max(1.0, std::abs(g(i, j))));
      }
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("fused evaluation matches the split form") {
  EpmProblem p = random_problem(9, 3, 4, 55);
  Rng rng(56);
  const Mat X = random_gaussian(3, 4, rng);
  auto [fv, g] = f_value_grad(p, X);
  CHECK(fv == f_value(p, X));
  CHECK((g - f_grad(p, X)).norm() == 0.0);
}

TEST_CASE("objective is invariant under column permutations of X") {
  EpmProblem p = random_problem(11, 4, 6, 77);
  Rng rng(78);
  const Mat X = random_gaussian(4, 6, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
  perm.setIdentity();
  std::swap(perm.indices()(0), perm.indices()(4));
  std::swap(perm.indices()(2), perm.indices()(5));
  CHECK(f_value(p, X * perm) == doctest::Approx(f_value(p, X)).epsilon(1e-14));
}

TEST_CASE("zero rows are dropped before normalization") {
  Mat W = Mat::Zero(4, 2);
  W(0, 0) = 1;
  W(1, 1) = 1;
  W(3, 0) = 2;
  EpmProblem p = build_problem(W, 2);
  CHECK(p.n == 3);
  CHECK(p.dropped_rows == 1);
}
