#ifndef CPFACTOR_RNG_HPP
#define CPFACTOR_RNG_HPP

#include <cstdint>
#include <random>

#include "cpfactor/linalg.hpp"

namespace cpf {

/// Seedable 64-bit generator (mt19937_64) with explicit bit-to-double
/// mappings so that streams are reproducible for a given seed regardless of
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (one value per call, cached pair).
  double normal();

  /// Derived stream for run index i (base seed + index, per the bench
  /// fan-out convention).
  static std::uint64_t derive(std::uint64_t base, std::uint64_t index) {
    return base + index;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random matrix with i.i.d. standard normal entries.
Mat random_gaussian(int rows, int cols, Rng& rng);

/// Random row-orthonormal matrix of order r x r_plus (Procrustes projection
/// of a Gaussian matrix).
Mat random_row_orthonormal(int r, int r_plus, Rng& rng);

}  // namespace cpf

#endif
