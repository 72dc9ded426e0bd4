#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "cpfactor/baselines.hpp"
#include "cpfactor/epm.hpp"
#include "cpfactor/generators.hpp"
#include "cpfactor/linalg.hpp"
#include "cpfactor/objective.hpp"
#include "cpfactor/rng.hpp"

namespace py = pybind11;
using namespace cpf;

namespace {

RepmConfig make_repm_config(std::uint64_t seed, long k_max_ncg, long k_total,
                            const std::string& restart_mode, double eps_stat) {
  RepmConfig cfg;
  cfg.seed = seed;
  cfg.k_max_ncg = k_max_ncg;
  cfg.k_total = k_total;
  cfg.eps_stat = eps_stat;
  if (restart_mode == "fresh")
    cfg.restart_mode = RestartMode::FreshRandom;
  else if (restart_mode == "negate")
    cfg.restart_mode = RestartMode::NegateX;
  else
    throw py::value_error("restart_mode must be 'negate' or 'fresh'");
  return cfg;
}

CpfResult factorize(const Mat& A, std::optional<int> r_plus,
                    std::optional<double> lambda, std::uint64_t seed,
                    long k_max_ncg, long k_total,
                    const std::string& restart_mode, double eps_stat) {
  auto [W, r] = sym_factor(A);
  const int rp = r_plus.value_or(r);
  EpmProblem p = build_problem(W, rp, lambda);
  const RepmConfig cfg =
      make_repm_config(seed, k_max_ncg, k_total, restart_mode, eps_stat);
  return repm_solve(p, cfg, NcgConfig{}, WolfeParams{});
}

CpfResult baseline_solve(const Mat& A, const std::string& method,
                         std::optional<int> r_plus, std::uint64_t seed,
                         int max_restarts, double per_run_time) {
  auto [W, r] = sym_factor(A);
  EpmProblem p = build_problem(W, r_plus.value_or(r));
  const ApSolver solver = method == "aph" ? ApSolver(aph_solve)
                         : method == "apg"
                             ? ApSolver(apg_solve)
                             : throw py::value_error(
                                   "method must be 'aph' or 'apg'");
  return restart_wrap(solver, p, ApConfig{}, seed, max_restarts, per_run_time);
}

py::dict generate(int n, int r, const std::string& dist, double b_min,
                  double sparsity, std::uint64_t seed) {
  GenSpec spec;
  spec.n = n;
  spec.r = r;
  spec.dist = norm_dist_from_string(dist);
  spec.b_min = b_min;
  spec.sparsity = sparsity;
  spec.seed = seed;
  const CpInstance inst = gen_factor(spec);
  py::dict d;
  d["A"] = inst.A;
  d["B"] = *inst.B_true;
  d["tag"] = inst.tag;
  d["realized_n"] = inst.realized_n;
  d["realized_sparsity"] = inst.realized_sparsity;
  return d;
}

py::dict special(const std::string& name, int k) {
  const CpInstance inst = special_matrix(name, k);
  py::dict d;
  d["A"] = inst.A;
  d["tag"] = inst.tag;
  if (inst.r_cp_known) d["r_cp"] = *inst.r_cp_known;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Completely positive factorization via an exterior point method";

  py::register_exception<Error>(m, "CpfactorError");

  py::class_<CpfResult>(m, "Result")
      .def_property_readonly("B", [](const CpfResult& r) { return r.B; })
      .def_property_readonly("Q", [](const CpfResult& r) { return r.Q; })
      .def_property_readonly(
          "X", [](const CpfResult& r) { return r.X_final; })
      .def_readonly("rel_error", &CpfResult::rel_error)
      .def_readonly("raw_rel_error", &CpfResult::raw_rel_error)
      .def_readonly("iters", &CpfResult::ncg_iters)
      .def_readonly("restarts", &CpfResult::restarts)
      .def_readonly("wall_time", &CpfResult::wall_time)
      .def_readonly("seed", &CpfResult::seed)
      .def_readonly("f_final", &CpfResult::f_final)
      .def_readonly("grad_norm", &CpfResult::grad_norm_final)
      .def_property_readonly(
          "status", [](const CpfResult& r) { return to_string(r.status); })
      .def("__repr__", [](const CpfResult& r) {
        return "<cpfactor.Result status=" + to_string(r.status) +
               " rel_error=" + std::to_string(r.rel_error) + ">";
      });

  m.def("factorize", &factorize, py::arg("A"), py::arg("r_plus") = py::none(),
        py::arg("lambda_") = py::none(), py::arg("seed") = 0,
        py::arg("k_max_ncg") = 50000, py::arg("k_total") = 500000,
        py::arg("restart_mode") = "negate", py::arg("eps_stat") = 1e-3,
        "Restarted exterior-point factorization A = B B^T with B >= 0.");

  m.def("baseline_solve", &baseline_solve, py::arg("A"), py::arg("method"),
        py::arg("r_plus") = py::none(), py::arg("seed") = 0,
        py::arg("max_restarts") = 10, py::arg("per_run_time") = 20.0,
        "Alternating-projection baselines ('aph' or 'apg') with restarts.");

  m.def("generate", &generate, py::arg("n"), py::arg("r"),
        py::arg("dist") = "constant", py::arg("b_min") = 1.0,
        py::arg("sparsity") = 0.0, py::arg("seed") = 0,
        "Random completely positive instance with prescribed column norms.");

  m.def("special_matrix", &special, py::arg("name"), py::arg("k") = 0,
        "Reference matrices A1, A2, A3 (requires k), A4.");

  m.def(
      "sym_factor",
      [](const Mat& A) {
        auto [W, r] = sym_factor(A);
        return py::make_tuple(W, r);
      },
      py::arg("A"), "Symmetric rank-revealing factor: A = W W^T, returns (W, rank).");

  m.def("dominant_cpf", &dominant_cpf, py::arg("A"), py::arg("tol") = 1e-12,
        "Explicit nonnegative factor of a diagonally dominant matrix.");

  m.def("a4_explicit_factor", &a4_explicit_factor,
        "The 12 x 37 nonnegative factor of the reference matrix A4.");

  m.def("rel_error", &rel_error, py::arg("A"), py::arg("B"),
        "||A - B B^T||_F / ||A||_F.");

  m.def(
      "procrustes",
      [](const Mat& X) { return procrustes(X); }, py::arg("X"),
      "Nearest row-orthonormal matrix in Frobenius norm.");

  m.def(
      "objective",
      [](const Mat& W, const Mat& X, std::optional<double> lambda) {
        EpmProblem p = build_problem(W, static_cast<int>(X.cols()), lambda);
        auto [v, g] = f_value_grad(p, X);
        return py::make_tuple(v, g);
      },
      py::arg("W"), py::arg("X"), py::arg("lambda_") = py::none(),
      "Penalized objective value and gradient at X for the factor W.");
}
