#include <doctest.h>

#include "cpfactor/baselines.hpp"
#include "cpfactor/generators.hpp"
#include "cpfactor/rng.hpp"

using namespace cpf;

namespace {

EpmProblem problem_for(const Mat& A, int r_plus) {
  auto [W, r] = sym_factor(A);
  (void)r;
  return build_problem(W, r_plus);
}

Mat identity_slab(int r, int r_plus) {
  Mat X = Mat::Zero(r, r_plus);
  X.topLeftCorner(r, r).setIdentity();
  return X;
}

}  // namespace

TEST_CASE("nonnegative factors are immediate fixed points") {
  Rng rng(1);
  Mat W(8, 3);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 3; ++j) W(i, j) = rng.uniform() + 0.05;
  EpmProblem p = build_problem(W, 5);
  const Mat X0 = identity_slab(3, 5);
  ApConfig cfg;

  const CpfResult h = aph_solve(p, X0, cfg);
  CHECK(h.status == CpfStatus::Global);
  CHECK(h.rel_error <= 1e-13);

  const CpfResult g = apg_solve(p, X0, cfg);
  CHECK(g.status == CpfStatus::Global);
  CHECK(g.rel_error <= 1e-13);
}

TEST_CASE("alternating projections factor the first reference matrix") {
  const CpInstance inst = special_matrix("A1");
  EpmProblem p = problem_for(inst.A, 4);
  ApConfig cfg;
  cfg.record_trace = true;

  int h_global = 0, g_global = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Rng rng(seed);
    const Mat X0 = random_row_orthonormal(p.r, p.r_plus, rng);
    const CpfResult h = aph_solve(p, X0, cfg);
    if (h.status == CpfStatus::Global && h.rel_error < 1e-13) ++h_global;
    // the residual sequence is non-increasing
    for (std::size_t i = 1; i < h.trace.size(); ++i)
      CHECK(h.trace[i].f <= h.trace[i - 1].f);
    CHECK(h.B.minCoeff() >= 0.0);
    CHECK((h.Q * h.Q.transpose() - Mat::Identity(p.r, p.r)).norm() <= 1e-10);

    const CpfResult g = apg_solve(p, X0, cfg);
    if (g.status == CpfStatus::Global && g.rel_error < 1e-13) ++g_global;
    CHECK(g.B.minCoeff() >= 0.0);
  }
  CHECK(h_global >= 1);
  CHECK(g_global >= 1);
}

TEST_CASE("restart wrapper stops on the first global result") {
  Rng rng(2);
  Mat W(8, 3);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 3; ++j) W(i, j) = rng.uniform() + 0.05;
  // nonnegative W: the first run converges fast from any orthonormal start
  EpmProblem p = build_problem(W, 4);
  ApConfig cfg;
  const CpfResult res = restart_wrap(aph_solve, p, cfg, 123);
  CHECK(res.status == CpfStatus::Global);
  CHECK(res.restarts == 0);
}

TEST_CASE("restart wrapper returns the best of all-local runs") {
  const CpInstance inst = special_matrix("A1");
  EpmProblem p = problem_for(inst.A, 4);
  ApConfig cfg;
  cfg.k_max = 3;  // starve the solver so no run can reach global
  const CpfResult res = restart_wrap(aph_solve, p, cfg, 9, 4);
  CHECK(res.status != CpfStatus::Global);
  CHECK(res.restarts == 4);
  CHECK(res.rel_error <= 1.0 + 1e-12);
}
