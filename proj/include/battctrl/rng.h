#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace battctrl {

/// Seeded generator whose draws are identical across standard libraries.
/// std::mt19937_64 output is fully specified; the std distributions are not,
/// so the distributions here are written out.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer on [0, bound). `bound` must be positive.
  std::uint64_t Below(std::uint64_t bound);
  /// Standard normal via Box-Muller (no cached second value).
  double Normal();
  /// Uniformly random permutation of 0 .. n-1 (Fisher-Yates).
  std::vector<int> Permutation(int n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace battctrl
