#ifndef CPFACTOR_GENERATORS_HPP
#define CPFACTOR_GENERATORS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpfactor/linalg.hpp"

namespace cpf {

enum class NormDist { Constant, Linear, Convex, Concave };

std::string to_string(NormDist d);
NormDist norm_dist_from_string(const std::string& s);

struct GenSpec {
  int n = 0;
  int r = 0;
  NormDist dist = NormDist::Constant;
  double b_min = 1.0;    // in (0, 1]
  double sparsity = 0.0; // in [0, 1)
  std::uint64_t seed = 0;
};

struct CpInstance {
  Mat A;
  std::optional<Mat> B_true;
  std::string tag;                 // generator spec summary or special name
  std::optional<GenSpec> meta;
  std::optional<int> r_cp_known;
  int realized_n = 0;              // after zero-row deletion
  double realized_sparsity = 0.0;  // zero fraction of B_true after deletion
};

/// Target column norms: b_1 = 1 decaying to b_r = b_min along t_i = i^d with
/// d = -0.1 (Convex), 1 (Linear), 2 (Concave); Constant is all ones.
std::vector<double> column_norms(NormDist dist, int r, double b_min);

/// Random nonnegative factor with prescribed column norms and sparsity; the
/// globally smallest entries are zeroed, zero rows deleted, then columns are
/// rescaled. A = B B^T.
CpInstance gen_factor(const GenSpec& spec);

/// The four reference matrices with known cp-rank: A1 (4x4), A2 (5x5),
/// A3(k) (2k x 2k), A4 (12x12).
CpInstance special_matrix(const std::string& name, int k = 0);

/// Explicit factor of a diagonally dominant nonnegative symmetric matrix:
/// columns sqrt(a_ij) (e_i + e_j) for i < j plus sqrt(c_i) e_i for the
/// diagonal surplus c_i = a_ii - sum_{j != i} a_ij.
Mat dominant_cpf(const Mat& A, double tol = 1e-12);

/// The 12 x 37 strict factor of A4, with the three permuted blocks of its
/// last component recovered by an integer feasibility search.
Mat a4_explicit_factor();

/// ||A - B B^T||_F / ||A||_F.
double rel_error(const Mat& A, const Mat& B);

/// Instance I/O: matrix files A / optional B_true plus a JSON metadata
/// sidecar next to the A file.
void write_instance(const CpInstance& inst, const std::string& path_a,
                    const std::string& path_b = "");
CpInstance read_instance(const std::string& path_a);

}  // namespace cpf

#endif
