// cpfactor: completely positive factorization toolkit.
//
// Subcommands:
//   factorize  solve A = B B^T for a matrix file
//   generate   emit a synthetic instance (A, optional factor, metadata)
//   bench      run a reduced benchmark sweep and print a success table
//   verify     check a factor file against a matrix file
//
// Exit codes: 0 success/global, 2 non-global result or failed verification,
// 1 usage or input errors.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpfactor/baselines.hpp"
#include "cpfactor/epm.hpp"
#include "cpfactor/generators.hpp"
#include "cpfactor/matrix_io.hpp"
#include "cpfactor/rng.hpp"

namespace {

using namespace cpf;

void print_config() {
  const NcgConfig ncg;
  const WolfeParams wolfe;
  const RepmConfig repm;
  const ApConfig ap;
  std::printf("lambda = 2 r / n (unless --lambda)\n");
  std::printf("rho = %g\nsigma = %g\nnu = %g\nkappa = %g\n", wolfe.rho,
              wolfe.sigma, ncg.nu, ncg.kappa);
  std::printf("eps_g = %g\neps_df = %g\n", ncg.eps_g, ncg.eps_df);
  std::printf("eps_stat = %g\neps_grad = %g\neps_f = %g\neps_df_final = %g\n",
              repm.eps_stat, repm.eps_grad, repm.eps_f, repm.eps_df_final);
  std::printf("k_max_ncg = %ld\nk_total = %ld\nrestart_mode = negate\n",
              repm.k_max_ncg, repm.k_total);
  std::printf("ap_eps_rel = %g\nap_eps_abs = %g\nap_stall_window = %ld\n",
              ap.eps_rel, ap.eps_abs, ap.stall_window);
}

struct FactorizeArgs {
  std::string input;
  int rplus = -1;
  std::string solver = "repm";
  std::uint64_t seed = 0;
  double lambda = -1.0;
  std::string restart_mode = "negate";
  long max_ncg = 50000;
  long max_total = 500000;
  std::string out;
  std::string emit_factor;
};

CpfResult run_solver(const std::string& solver, const EpmProblem& p,
                     const RepmConfig& repm_cfg, std::uint64_t seed) {
  const NcgConfig ncg;
  const WolfeParams wolfe;
  if (solver == "repm") return repm_solve(p, repm_cfg, ncg, wolfe);
  if (solver == "epm") {
    Rng rng(seed);
    NcgConfig single = ncg;
    single.k_max = repm_cfg.k_max_ncg;
    CpfResult res = epm_solve(p, random_row_orthonormal(p.r, p.r_plus, rng),
                              single, wolfe, repm_cfg);
    res.seed = seed;
    return res;
  }
  ApConfig ap;
  ap.k_max = repm_cfg.k_total;
  if (solver == "aph" || solver == "apg") {
    Rng rng(seed);
    const Mat X0 = random_row_orthonormal(p.r, p.r_plus, rng);
    CpfResult res =
        solver == "aph" ? aph_solve(p, X0, ap) : apg_solve(p, X0, ap);
    res.seed = seed;
    return res;
  }
  if (solver == "rap-h") return restart_wrap(aph_solve, p, ap, seed);
  if (solver == "rap-g") return restart_wrap(apg_solve, p, ap, seed);
  throw BadSpec("unknown solver: " + solver);
}

int cmd_factorize(const FactorizeArgs& a) {
  const Mat A = read_matrix_file(a.input);
  auto [W, rank] = sym_factor(A);
  const int rplus = a.rplus > 0 ? a.rplus : rank;
  EpmProblem p = build_problem(
      W, rplus,
      a.lambda > 0 ? std::optional<double>(a.lambda) : std::nullopt);

  RepmConfig cfg;
  cfg.seed = a.seed;
  cfg.k_max_ncg = a.max_ncg;
  cfg.k_total = a.max_total;
  cfg.restart_mode = a.restart_mode == "fresh" ? RestartMode::FreshRandom
                                               : RestartMode::NegateX;

  const CpfResult res = run_solver(a.solver, p, cfg, a.seed);
  const std::string record = result_record(res, a.solver);
  std::cout << record;
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    f << record;
  }
  if (!a.emit_factor.empty()) {
    write_matrix_file(a.emit_factor + ".B.txt", res.B, "nonnegative factor");
    write_matrix_file(a.emit_factor + ".Q.txt", res.Q,
                      "row-orthonormal transform");
  }
  return res.status == CpfStatus::Global ? 0 : 2;
}

struct GenerateArgs {
  int n = 200;
  int r = 10;
  std::string dist = "constant";
  double b_min = 1.0;
  double sparsity = 0.0;
  std::uint64_t seed = 0;
  std::string out = "instance.txt";
  std::string emit_factor;
};

int cmd_generate(const GenerateArgs& a) {
  GenSpec spec;
  spec.n = a.n;
  spec.r = a.r;
  spec.dist = norm_dist_from_string(a.dist);
  spec.b_min = a.b_min;
  spec.sparsity = a.sparsity;
  spec.seed = a.seed;
  const CpInstance inst = gen_factor(spec);
  write_instance(inst, a.out, a.emit_factor);
  std::cout << "wrote " << a.out << " (n = " << inst.realized_n
            << ", sparsity = " << inst.realized_sparsity << ")\n";
  return 0;
}

struct VerifyArgs {
  std::string input;
  std::string factor;
  std::string q;
  double threshold = 1e-12;
  double tol = 1e-12;
};

int cmd_verify(const VerifyArgs& a) {
  const Mat A = read_matrix_file(a.input);
  const Mat B = read_matrix_file(a.factor);
  const double err = rel_error(A, B);
  const double b_min = B.minCoeff();
  std::printf("rel_error = %.17g\nmin_entry = %.17g\n", err, b_min);
  bool ok = err < a.threshold && b_min >= -a.tol;
  if (!a.q.empty()) {
    const Mat Q = read_matrix_file(a.q);
    const double orth =
        (Q * Q.transpose() - Mat::Identity(Q.rows(), Q.rows())).norm();
    std::printf("orth_defect = %.17g\n", orth);
    ok = ok && orth < 1e-8;
  }
  std::printf("verdict = %s\n", ok ? "pass" : "fail");
  return ok ? 0 : 2;
}

struct BenchArgs {
  std::string suite = "dense-table";
  int repeats = 30;
  std::uint64_t seed = 0;
  std::string out;
};

struct BenchRow {
  std::string cell;
  std::uint64_t seed;
  std::string status;
  double rel_error;
  long iters;
  double time;
};

void emit_rows(const BenchArgs& a, const std::vector<BenchRow>& rows) {
  if (a.out.empty()) return;
  std::ofstream f(a.out);
  f << "cell\tseed\tstatus\trel_error\titers\ttime\n";
  f.precision(17);
  for (const auto& r : rows)
    f << r.cell << "\t" << r.seed << "\t" << r.status << "\t" << r.rel_error
      << "\t" << r.iters << "\t" << r.time << "\n";
}

int cmd_bench(const BenchArgs& a) {
  const NcgConfig ncg;
  const WolfeParams wolfe;
  std::vector<BenchRow> rows;
  std::printf("# suite %s, %d repeats (reduced scale)\n", a.suite.c_str(),
              a.repeats);

  const auto push = [&rows](const std::string& cell, std::uint64_t seed,
                            const CpfResult& res) {
    rows.push_back(BenchRow{cell, seed, to_string(res.status), res.rel_error,
                            res.ncg_iters, res.wall_time});
  };

  if (a.suite == "dense-table" || a.suite == "sparse-table") {
    const bool sparse = a.suite == "sparse-table";
    const std::vector<NormDist> types =
        sparse ? std::vector<NormDist>{NormDist::Constant}
               : std::vector<NormDist>{NormDist::Constant, NormDist::Linear,
                                       NormDist::Convex, NormDist::Concave};
    const std::vector<int> rs = sparse ? std::vector<int>{10, 12}
                                       : std::vector<int>{10, 15};
    const std::vector<double> ss =
        sparse ? std::vector<double>{0.01, 0.10, 0.40}
               : std::vector<double>{0.0};
    std::printf("%-10s %4s %5s %10s\n", "type", "r", "s%", "success%");
    for (NormDist t : types)
      for (int r : rs)
        for (double s : ss) {
          int ok = 0;
          const std::string cell = to_string(t) + ":r" + std::to_string(r) +
                                   ":s" + std::to_string(int(s * 100));
          for (int i = 0; i < a.repeats; ++i) {
            const std::uint64_t seed = Rng::derive(a.seed, rows.size());
            GenSpec spec{200, r, t, t == NormDist::Constant ? 1.0 : 0.1, s,
                         seed};
            try {
              const CpInstance inst = gen_factor(spec);
              EpmProblem p = build_problem(*inst.B_true, r);
              Rng rng(seed + 1);
              const CpfResult res = epm_solve(
                  p, random_row_orthonormal(p.r, p.r_plus, rng), ncg, wolfe);
              push(cell, seed, res);
              if (res.rel_error < 1e-13) ++ok;
            } catch (const Error& e) {
              rows.push_back(BenchRow{cell, seed, std::string("error:") +
                                                      e.what(),
                                      1.0, 0, 0.0});
            }
          }
          std::printf("%-10s %4d %5.0f %10.1f\n", to_string(t).c_str(), r,
                      s * 100, 100.0 * ok / a.repeats);
        }
  } else if (a.suite == "restart-table") {
    std::printf("%-12s %10s\n", "mode", "success%");
    for (const bool restart : {false, true}) {
      int ok = 0;
      const std::string cell = restart ? "repm" : "single";
      for (int i = 0; i < a.repeats; ++i) {
        const std::uint64_t seed = Rng::derive(a.seed, rows.size());
        GenSpec spec{200, 12, NormDist::Constant, 1.0, 0.01, seed};
        const CpInstance inst = gen_factor(spec);
        EpmProblem p = build_problem(*inst.B_true, 12);
        CpfResult res;
        if (restart) {
          RepmConfig cfg;
          cfg.seed = seed + 1;
          res = repm_solve(p, cfg, ncg, wolfe);
        } else {
          Rng rng(seed + 1);
          res = epm_solve(p, random_row_orthonormal(p.r, p.r_plus, rng), ncg,
                          wolfe);
        }
        push(cell, seed, res);
        if (res.rel_error < 1e-12) ++ok;
      }
      std::printf("%-12s %10.1f\n", cell.c_str(), 100.0 * ok / a.repeats);
    }
  } else if (a.suite == "special-table") {
    struct Item {
      std::string name;
      int k;
      int rplus;
    };
    const std::vector<Item> items = {
        {"A1", 0, 4}, {"A2", 0, 5}, {"A3", 5, 25}, {"A4", 0, 37}};
    std::printf("%-8s %10s %12s %10s\n", "matrix", "success%", "median_iter",
                "med_time");
    for (const auto& it : items) {
      std::vector<long> iters;
      std::vector<double> times;
      int ok = 0;
      const CpInstance inst = special_matrix(it.name, it.k);
      auto [W, rank] = sym_factor(inst.A);
      EpmProblem p = build_problem(W, it.rplus);
      for (int i = 0; i < a.repeats; ++i) {
        const std::uint64_t seed = Rng::derive(a.seed, rows.size());
        RepmConfig cfg;
        cfg.seed = seed;
        cfg.restart_mode = RestartMode::FreshRandom;
        cfg.eps_stat = 1e-7;
        const CpfResult res = repm_solve(p, cfg, ncg, wolfe);
        push(inst.tag, seed, res);
        if (res.rel_error < 1e-13) ++ok;
        iters.push_back(res.ncg_iters);
        times.push_back(res.wall_time);
      }
      std::sort(iters.begin(), iters.end());
      std::sort(times.begin(), times.end());
      std::printf("%-8s %10.1f %12ld %10.3f\n", inst.tag.c_str(),
                  100.0 * ok / a.repeats, iters[iters.size() / 2],
                  times[times.size() / 2]);
    }
  } else {
    throw BadSpec("unknown suite: " + a.suite);
  }
  emit_rows(a, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"completely positive factorization toolkit"};
  app.require_subcommand(0, 1);
  bool show_config = false;
  app.add_flag("--print-config", show_config, "print solver defaults");

  FactorizeArgs fa;
  CLI::App* fac = app.add_subcommand("factorize", "factorize a matrix file");
  fac->add_option("--input", fa.input, "matrix file for A")->required();
  fac->add_option("--rplus", fa.rplus, "factor column count (default rank)");
  fac->add_option("--solver", fa.solver, "epm|repm|aph|apg|rap-h|rap-g")
      ->check(CLI::IsMember({"epm", "repm", "aph", "apg", "rap-h", "rap-g"}));
  fac->add_option("--seed", fa.seed, "rng seed");
  fac->add_option("--lambda", fa.lambda, "penalty weight override");
  fac->add_option("--restart-mode", fa.restart_mode, "negate|fresh")
      ->check(CLI::IsMember({"negate", "fresh"}));
  fac->add_option("--max-ncg", fa.max_ncg, "inner iteration cap");
  fac->add_option("--max-total", fa.max_total, "total iteration budget");
  fac->add_option("--out", fa.out, "result record file");
  fac->add_option("--emit-factor", fa.emit_factor,
                  "path prefix for B/Q output files");

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "generate an instance");
  gen->add_option("--n", ga.n, "order before zero-row deletion");
  gen->add_option("--r", ga.r, "factor columns");
  gen->add_option("--dist", ga.dist, "constant|linear|convex|concave")
      ->check(CLI::IsMember({"constant", "linear", "convex", "concave"}));
  gen->add_option("--bmin", ga.b_min, "smallest column norm");
  gen->add_option("--sparsity", ga.sparsity, "zero fraction in [0,1)");
  gen->add_option("--seed", ga.seed, "rng seed");
  gen->add_option("--out", ga.out, "output matrix file");
  gen->add_option("--emit-factor", ga.emit_factor, "factor output file");

  BenchArgs ba;
  CLI::App* ben = app.add_subcommand("bench", "run a benchmark suite");
  ben->add_option("--suite", ba.suite,
                  "dense-table|sparse-table|restart-table|special-table")
      ->check(CLI::IsMember(
          {"dense-table", "sparse-table", "restart-table", "special-table"}));
  ben->add_option("--repeats", ba.repeats, "runs per cell")
      ->check(CLI::PositiveNumber);
  ben->add_option("--seed", ba.seed, "base seed");
  ben->add_option("--out", ba.out, "per-run results file (tab-delimited)");

  VerifyArgs va;
  CLI::App* ver = app.add_subcommand("verify", "verify a factor");
  ver->add_option("--input", va.input, "matrix file for A")->required();
  ver->add_option("--factor", va.factor, "matrix file for B")->required();
  ver->add_option("--q", va.q, "optional row-orthonormal Q file");
  ver->add_option("--threshold", va.threshold, "rel_error acceptance bound");
  ver->add_option("--tol", va.tol, "negativity tolerance on B");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (show_config) {
      print_config();
      return 0;
    }
    if (fac->parsed()) return cmd_factorize(fa);
    if (gen->parsed()) return cmd_generate(ga);
    if (ben->parsed()) return cmd_bench(ba);
    if (ver->parsed()) return cmd_verify(va);
    std::cerr << app.help();
    return 1;
  } catch (const cpf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
