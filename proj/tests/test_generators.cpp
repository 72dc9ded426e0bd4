#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "cpfactor/generators.hpp"
#include "cpfactor/linalg.hpp"

using namespace cpf;

namespace {

double rel_error_naive(const Mat& A, const Mat& B) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) {
      double v = A(i, j);
      for (int k = 0; k < B.cols(); ++k) v -= B(i, k) * B(j, k);
      num += v * v;
      den += A(i, j) * A(i, j);
    }
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace

TEST_CASE("column norm profiles") {
  const auto c = column_norms(NormDist::Constant, 5, 0.5);
  for (double v : c) CHECK(v == 1.0);

  const auto lin = column_norms(NormDist::Linear, 5, 0.1);
  const double expect[5] = {1.0, 0.775, 0.55, 0.325, 0.1};
  for (int i = 0; i < 5; ++i) CHECK(lin[i] == doctest::Approx(expect[i]));

  for (NormDist d :
       {NormDist::Linear, NormDist::Convex, NormDist::Concave}) {
    const auto b = column_norms(d, 9, 0.3);
    CHECK(b.front() == 1.0);
    CHECK(b.back() == 0.3);
    for (std::size_t i = 1; i < b.size(); ++i) {
      CHECK(b[i] <= b[i - 1] + 1e-15);
      CHECK(b[i] >= 0.3 - 1e-15);
      CHECK(b[i] <= 1.0 + 1e-15);
    }
  }
  CHECK_THROWS_AS(column_norms(NormDist::Linear, 1, 0.1), BadSpec);
}

TEST_CASE("dense generated instances are exact products") {
  GenSpec spec{40, 6, NormDist::Constant, 1.0, 0.0, 77};
  const CpInstance inst = gen_factor(spec);
  REQUIRE(inst.B_true.has_value());
  const Mat& B = *inst.B_true;
  CHECK(B.minCoeff() > 0.0);
  for (int j = 0; j < 6; ++j) CHECK(B.col(j).norm() == doctest::Approx(1.0));
  CHECK(rel_error(inst.A, B) <= 1e-14);
  CHECK((inst.A - inst.A.transpose()).norm() == 0.0);
  CHECK(inst.A.minCoeff() >= 0.0);
}

TEST_CASE("generation is deterministic per seed") {
  GenSpec spec{200, 12, NormDist::Linear, 0.1, 0.10, 4242};
  const CpInstance a = gen_factor(spec);
  const CpInstance b = gen_factor(spec);
  CHECK((a.A - b.A).norm() == 0.0);
  CHECK((*a.B_true - *b.B_true).norm() == 0.0);

  spec.seed = 4243;
  const CpInstance c = gen_factor(spec);
  CHECK((a.A - c.A).norm() > 0.0);
}

TEST_CASE("requested sparsity is realized") {
  GenSpec spec{100, 8, NormDist::Constant, 1.0, 0.25, 11};
  const CpInstance inst = gen_factor(spec);
  const Mat& B = *inst.B_true;
  const double zeros = (B.array() == 0.0).count();
  const double measured = zeros / (B.rows() * B.cols());
  CHECK(std::abs(measured - 0.25) <= 1.0 / (100.0 * 8.0) + 1e-12);
  CHECK(inst.realized_sparsity == doctest::Approx(measured));
  CHECK(rel_error(inst.A, B) <= 1e-13);
}

TEST_CASE("reference matrices have the advertised structure") {
  const CpInstance a1 = special_matrix("A1");
  CHECK(a1.A.rows() == 4);
  CHECK(a1.A(0, 0) == 6.0);
  CHECK(*a1.r_cp_known == 4);
  CHECK(sym_factor(a1.A).second == 3);

  const CpInstance a2 = special_matrix("A2");
  CHECK(a2.A.rows() == 5);
  CHECK(*a2.r_cp_known == 5);
  CHECK((a2.A - a2.A.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(a2.A.minCoeff() >= -1e-14);
  CHECK(sym_factor(a2.A).second == 3);

  const CpInstance a3 = special_matrix("A3", 5);
  CHECK(a3.A.rows() == 10);
  CHECK(*a3.r_cp_known == 25);
  CHECK(sym_factor(a3.A).second == 9);
  CHECK_THROWS_AS(special_matrix("A3", 1), BadSpec);

  const CpInstance a4 = special_matrix("A4");
  CHECK(a4.A.rows() == 12);
  CHECK(a4.A(0, 0) == 91.0);
  CHECK(a4.A(0, 4) == 19.0);
  CHECK(a4.A(1, 4) == 24.0);
  CHECK(*a4.r_cp_known == 37);
  CHECK(sym_factor(a4.A).second == 10);

  CHECK_THROWS_AS(special_matrix("A9"), BadSpec);
}

TEST_CASE("diagonally dominant factorization") {
  Mat A(2, 2);
  A << 2, 1, 1, 2;
  const Mat B = dominant_cpf(A);
  CHECK(B.cols() == 3);
  CHECK(B.minCoeff() >= 0.0);
  CHECK(rel_error(A, B) <= 1e-14);

  const Mat BI = dominant_cpf(Mat::Identity(4, 4));
  CHECK((BI - Mat::Identity(4, 4)).norm() == 0.0);

  for (int k = 2; k <= 8; ++k) {
    const CpInstance a3 = special_matrix("A3", k);
    const Mat B3 = dominant_cpf(a3.A);
    CHECK(B3.cols() == k * k);
    CHECK(rel_error(a3.A, B3) <= 1e-13);
    const int n = 2 * k;
    CHECK(B3.cols() <= n * (n - 1) / 2 + n);
  }

  Mat bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(dominant_cpf(bad), NotDiagonallyDominant);
}

TEST_CASE("the explicit 37-column factor") {
  const Mat B = a4_explicit_factor();
  CHECK(B.rows() == 12);
  CHECK(B.cols() == 37);
  CHECK(B.minCoeff() >= 0.0);
  const CpInstance a4 = special_matrix("A4");
  CHECK(rel_error(a4.A, B) <= 1e-12);

  // the trailing block: pairwise integer structure before the sqrt(6) scale
  const Mat tail = B.rightCols(30) / std::sqrt(6.0);
  Mat M(4, 4);
  M << 2, 4, 4, 2, 4, 1, 1, 1, 4, 1, 1, 1, 2, 1, 1, 0;
  const Mat diag_expect = Vec{{12.0, 7.0, 7.0, 4.0}}.asDiagonal();
  for (int i = 0; i < 3; ++i) {
    const Mat Bi = tail.middleRows(4 * i, 4);
    CHECK((Bi * Bi.transpose() - diag_expect).norm() <= 1e-12);
    for (int j = i + 1; j < 3; ++j) {
      const Mat Bj = tail.middleRows(4 * j, 4);
      CHECK((Bi * Bj.transpose() - M).norm() <= 1e-12);
    }
  }
}

TEST_CASE("relative error metric") {
  const CpInstance a1 = special_matrix("A1");
  auto [W, r] = sym_factor(a1.A);
  CHECK(rel_error(a1.A, W) <= 1e-14);
  CHECK(rel_error(a1.A, Mat::Zero(4, 4)) == 1.0);

  Mat B(4, 2);
  B << 1, 0, 2, 1, 0, 3, 1, 1;
  CHECK(rel_error(a1.A, B) ==
        doctest::Approx(rel_error_naive(a1.A, B)).epsilon(1e-14));
  CHECK_THROWS_AS(rel_error(Mat::Zero(3, 3), Mat::Zero(3, 2)), ZeroMatrix);
}

TEST_CASE("instance files round trip with metadata") {
  GenSpec spec{30, 4, NormDist::Concave, 0.2, 0.05, 8};
  const CpInstance inst = gen_factor(spec);
  write_instance(inst, "gen_io_a.txt", "gen_io_b.txt");
  const CpInstance back = read_instance("gen_io_a.txt");
  CHECK((back.A - inst.A).norm() == 0.0);
  REQUIRE(back.B_true.has_value());
  CHECK((*back.B_true - *inst.B_true).norm() == 0.0);
  REQUIRE(back.meta.has_value());
  CHECK(back.meta->seed == 8);
  CHECK(back.meta->dist == NormDist::Concave);
  CHECK(back.realized_sparsity == doctest::Approx(inst.realized_sparsity));
  std::remove("gen_io_a.txt");
  std::remove("gen_io_b.txt");
  std::remove("gen_io_a.txt.meta.json");
}
