#include "cpfactor/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "cpfactor/errors.hpp"
#include "cpfactor/matrix_io.hpp"
#include "cpfactor/rng.hpp"

namespace cpf {

std::string to_string(NormDist d) {
  switch (d) {
    case NormDist::Constant: return "constant";
    case NormDist::Linear: return "linear";
    case NormDist::Convex: return "convex";
    case NormDist::Concave: return "concave";
  }
  return "unknown";
}

NormDist norm_dist_from_string(const std::string& s) {
  if (s == "constant") return NormDist::Constant;
  if (s == "linear") return NormDist::Linear;
  if (s == "convex") return NormDist::Convex;
  if (s == "concave") return NormDist::Concave;
  throw BadSpec("unknown norm distribution: " + s);
}

std::vector<double> column_norms(NormDist dist, int r, double b_min) {
  if (r < 1) throw BadSpec("column_norms: r must be positive");
  if (dist == NormDist::Constant) return std::vector<double>(r, 1.0);
  if (r < 2) throw BadSpec("column_norms: r >= 2 required for decaying types");
  if (!(b_min > 0.0 && b_min <= 1.0))
    throw BadSpec("column_norms: b_min must lie in (0, 1]");
  const double d = dist == NormDist::Convex ? -0.1
                 : dist == NormDist::Linear ? 1.0
                                            : 2.0;
  std::vector<double> t(r);
  for (int i = 0; i < r; ++i) t[i] = std::pow(i + 1.0, d);
  std::vector<double> b(r);
  for (int i = 0; i < r; ++i)
    b[i] = 1.0 - (1.0 - b_min) * (t[i] - t[0]) / (t[r - 1] - t[0]);
  b[0] = 1.0;
  b[r - 1] = b_min;
  return b;
}

CpInstance gen_factor(const GenSpec& spec) {
  if (spec.n < 1 || spec.r < 1 || spec.r > spec.n)
    throw BadSpec("gen_factor: need 1 <= r <= n");
  if (!(spec.sparsity >= 0.0 && spec.sparsity < 1.0))
    throw BadSpec("gen_factor: sparsity must lie in [0, 1)");
  const std::vector<double> norms = column_norms(spec.dist, spec.r, spec.b_min);

  Rng rng(spec.seed);
  Mat B(spec.n, spec.r);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.r; ++j) B(i, j) = rng.uniform();

  const long total = static_cast<long>(spec.n) * spec.r;
  const long n_zero = static_cast<long>(std::floor(spec.sparsity * total));
  if (n_zero > 0) {
    // global smallest entries; ties broken by (row, col)
    std::vector<long> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    std::nth_element(idx.begin(), idx.begin() + n_zero, idx.end(),
                     [&](long a, long b) {
                       const double va = B(a / spec.r, a % spec.r);
                       const double vb = B(b / spec.r, b % spec.r);
                       return va != vb ? va < vb : a < b;
                     });
    for (long k = 0; k < n_zero; ++k)
      B(idx[k] / spec.r, idx[k] % spec.r) = 0.0;
  }

  // drop rows that became entirely zero
  std::vector<int> keep;
  for (int i = 0; i < spec.n; ++i)
    if (B.row(i).maxCoeff() > 0.0) keep.push_back(i);
  Mat Bk(static_cast<int>(keep.size()), spec.r);
  for (std::size_t i = 0; i < keep.size(); ++i) Bk.row(i) = B.row(keep[i]);

  for (int j = 0; j < spec.r; ++j) {
    const double nj = Bk.col(j).norm();
    if (nj == 0.0)
      throw DegenerateInstance("gen_factor: column " + std::to_string(j) +
                               " vanished under sparsification");
    Bk.col(j) *= norms[j] / nj;
  }

  CpInstance inst;
  inst.A = Bk * Bk.transpose();
  inst.B_true = Bk;
  inst.meta = spec;
  inst.realized_n = static_cast<int>(keep.size());
  inst.realized_sparsity =
      static_cast<double>((Bk.array() == 0.0).count()) /
      static_cast<double>(Bk.size());
  std::ostringstream tag;
  tag << "gen:" << to_string(spec.dist) << ":n" << spec.n << ":r" << spec.r
      << ":s" << spec.sparsity << ":seed" << spec.seed;
  inst.tag = tag.str();
  return inst;
}

namespace {

Mat a4_matrix() {
  Mat G(4, 4), H(4, 4);
  G << 91, 0, 0, 0, 0, 42, 0, 0, 0, 0, 42, 0, 0, 0, 0, 42;
  H << 19, 24, 24, 24, 24, 6, 6, 6, 24, 6, 6, 6, 24, 6, 6, 6;
  Mat A = Mat::Zero(12, 12);
  for (int bi = 0; bi < 3; ++bi)
    for (int bj = 0; bj < 3; ++bj)
      A.block(4 * bi, 4 * bj, 4, 4) = (bi == bj) ? G : H;
  return A;
}

}  // namespace

CpInstance special_matrix(const std::string& name, int k) {
  CpInstance inst;
  inst.tag = name;
  if (name == "A1") {
    Mat A(4, 4);
    A << 6, 3, 3, 0, 3, 5, 1, 3, 3, 1, 5, 3, 0, 3, 3, 6;
    inst.A = A;
    inst.r_cp_known = 4;
  } else if (name == "A2") {
    const double a = (std::sqrt(5.0) - 1.0) / 4.0;
    const double b = (std::sqrt(5.0) + 1.0) / 4.0;
    Mat W(5, 3);
    W << 1, 0, 1,
         a, std::sqrt(b), 1,
         -b, std::sqrt(a), 1,
         -b, -std::sqrt(a), 1,
         a, -std::sqrt(b), 1;
    Vec d(3);
    d << 2.0, std::sqrt(5.0), (3.0 + std::sqrt(5.0)) / 2.0;
    inst.A = W * d.asDiagonal() * W.transpose();
    inst.r_cp_known = 5;
  } else if (name == "A3") {
    if (k < 2) throw BadSpec("special_matrix: A3 needs k >= 2");
    Mat A = Mat::Identity(2 * k, 2 * k);
    A.block(0, k, k, k).setConstant(1.0 / k);
    A.block(k, 0, k, k).setConstant(1.0 / k);
    inst.A = A;
    inst.r_cp_known = k * k;
    inst.tag = "A3(" + std::to_string(k) + ")";
  } else if (name == "A4") {
    inst.A = a4_matrix();
    inst.r_cp_known = 37;
  } else {
    throw BadSpec("special_matrix: unknown name " + name);
  }
  inst.realized_n = static_cast<int>(inst.A.rows());
  return inst;
}

Mat dominant_cpf(const Mat& A, double tol) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw BadShape("dominant_cpf: A must be square");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol * 10 + 1e-14)
    throw NotSymmetric("dominant_cpf: A not symmetric");
  if (A.minCoeff() < -tol)
    throw PreconditionViolated("dominant_cpf: A has negative entries");

  Vec c(n);
  std::string bad;
  for (int i = 0; i < n; ++i) {
    c(i) = A(i, i) - (A.row(i).sum() - A(i, i));
    if (c(i) < -tol) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
  }
  if (!bad.empty())
    throw NotDiagonallyDominant("dominant_cpf: rows " + bad +
                                " violate diagonal dominance");

  std::vector<Vec> cols;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (A(i, j) > 0.0) {
        Vec v = Vec::Zero(n);
        v(i) = v(j) = std::sqrt(A(i, j));
        cols.push_back(std::move(v));
      }
  for (int i = 0; i < n; ++i)
    if (c(i) > tol) {
      Vec v = Vec::Zero(n);
      v(i) = std::sqrt(c(i));
      cols.push_back(std::move(v));
    }
  Mat B(n, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) B.col(j) = cols[j];
  return B;
}

namespace {

// Feasible 4x4x4 nonnegative integer counts with the three pairwise
// marginals below; depth-first over compositions per (a, b) cell.
using Counts = std::array<std::array<std::array<int, 4>, 4>, 4>;

bool fill_counts(const std::array<std::array<int, 4>, 4>& M12,
                 std::array<std::array<int, 4>, 4>& R13,
                 std::array<std::array<int, 4>, 4>& R23, Counts& out,
                 int cell) {
  if (cell == 16) {
    for (int a = 0; a < 4; ++a)
      for (int cc = 0; cc < 4; ++cc)
        if (R13[a][cc] != 0) return false;
    return true;
  }
  const int a = cell / 4, b = cell % 4;
  int rem = M12[a][b];
  std::array<int, 4> pick{};
  // enumerate compositions of rem into 4 parts bounded by the remainders
  const auto rec = [&](auto&& self, int c, int left) -> bool {
    if (c == 3) {
      if (left > R13[a][3] || left > R23[b][3]) return false;
      pick[3] = left;
      for (int cc = 0; cc < 4; ++cc) {
        R13[a][cc] -= pick[cc];
        R23[b][cc] -= pick[cc];
        out[a][b][cc] = pick[cc];
      }
      if (fill_counts(M12, R13, R23, out, cell + 1)) return true;
      for (int cc = 0; cc < 4; ++cc) {
        R13[a][cc] += pick[cc];
        R23[b][cc] += pick[cc];
      }
      return false;
    }
    const int hi = std::min({left, R13[a][c], R23[b][c]});
    for (int v = hi; v >= 0; --v) {
      pick[c] = v;
      if (self(self, c + 1, left - v)) return true;
    }
    return false;
  };
  return rec(rec, 0, rem);
}

}  // namespace

Mat a4_explicit_factor() {
  const auto e = [](int i) {
    Vec v = Vec::Zero(4);
    v(i) = 1.0;
    return v;
  };

  Mat B(12, 37);
  B.setZero();
  int col = 0;

  // single column: e4 stacked three times
  for (int blk = 0; blk < 3; ++blk) B.block(4 * blk, col, 4, 1) = e(3);
  ++col;

  const double s5 = std::sqrt(5.0), s7 = std::sqrt(7.0), s6 = std::sqrt(6.0);
  const int b2_idx[3][3] = {{3, 0, 3}, {0, 3, 3}, {3, 3, 0}};
  const int b3_idx[3][3] = {{0, 3, 0}, {3, 0, 0}, {0, 0, 3}};
  for (int j = 0; j < 3; ++j, ++col)
    for (int blk = 0; blk < 3; ++blk)
      B.block(4 * blk, col, 4, 1) = s5 * e(b2_idx[blk][j]);
  for (int j = 0; j < 3; ++j, ++col)
    for (int blk = 0; blk < 3; ++blk)
      B.block(4 * blk, col, 4, 1) = s7 * e(b3_idx[blk][j]);

  // last 30 columns: three stacked 4x30 blocks of scaled unit vectors,
  // the first in sorted order and the other two recovered by the count search
  const std::array<int, 4> diag = {12, 7, 7, 4};
  const std::array<std::array<int, 4>, 4> M = {{{2, 4, 4, 2},
                                                {4, 1, 1, 1},
                                                {4, 1, 1, 1},
                                                {2, 1, 1, 0}}};
  auto R13 = M;
  std::array<std::array<int, 4>, 4> R23;
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c) R23[b][c] = M[b][c];
  Counts counts{};
  if (!fill_counts(M, R13, R23, counts, 0))
    throw SearchFailed("a4_explicit_factor: no feasible count assignment");

  int j = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int m = 0; m < counts[a][b][c]; ++m, ++j) {
          B.block(0, col + j, 4, 1) = s6 * e(a);
          B.block(4, col + j, 4, 1) = s6 * e(b);
          B.block(8, col + j, 4, 1) = s6 * e(c);
        }
  if (j != 30 || col + j != 37)
    throw SearchFailed("a4_explicit_factor: column count mismatch");
  (void)diag;
  return B;
}

double rel_error(const Mat& A, const Mat& B) {
  const double na = A.norm();
  if (na == 0.0) throw ZeroMatrix("rel_error: A is zero");
  if (B.rows() != A.rows()) throw BadShape("rel_error: row mismatch");
  return (A - B * B.transpose()).norm() / na;
}

void write_instance(const CpInstance& inst, const std::string& path_a,
                    const std::string& path_b) {
  write_matrix_file(path_a, inst.A, inst.tag);
  if (!path_b.empty() && inst.B_true)
    write_matrix_file(path_b, *inst.B_true, inst.tag + " factor");

  nlohmann::json meta;
  meta["tag"] = inst.tag;
  meta["realized_n"] = inst.realized_n;
  meta["realized_sparsity"] = inst.realized_sparsity;
  if (inst.r_cp_known) meta["r_cp_known"] = *inst.r_cp_known;
  if (inst.meta) {
    const GenSpec& s = *inst.meta;
    meta["spec"] = {{"n", s.n},
                    {"r", s.r},
                    {"dist", to_string(s.dist)},
                    {"b_min", s.b_min},
                    {"sparsity", s.sparsity},
                    {"seed", s.seed}};
  }
  if (!path_b.empty() && inst.B_true) meta["factor_file"] = path_b;
  std::ofstream out(path_a + ".meta.json");
  out << meta.dump(2) << "\n";
}

CpInstance read_instance(const std::string& path_a) {
  CpInstance inst;
  inst.A = read_matrix_file(path_a);
  inst.realized_n = static_cast<int>(inst.A.rows());
  std::ifstream in(path_a + ".meta.json");
  if (in) {
    nlohmann::json meta = nlohmann::json::parse(in);
    inst.tag = meta.value("tag", "");
    inst.realized_n = meta.value("realized_n", inst.realized_n);
    inst.realized_sparsity = meta.value("realized_sparsity", 0.0);
    if (meta.contains("r_cp_known")) inst.r_cp_known = meta["r_cp_known"];
    if (meta.contains("spec")) {
      GenSpec s;
      const auto& j = meta["spec"];
      s.n = j["n"];
      s.r = j["r"];
      s.dist = norm_dist_from_string(j["dist"]);
      s.b_min = j["b_min"];
      s.sparsity = j["sparsity"];
      s.seed = j["seed"];
      inst.meta = s;
    }
    if (meta.contains("factor_file"))
      inst.B_true = read_matrix_file(meta["factor_file"]);
  }
  return inst;
}

}  // namespace cpf
