#pragma once

#include "cdap/core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cdap {

/// Seeded random source with a fixed, library-independent output stream:
/// std::mt19937_64 bits, 53-bit uniforms, and Box-Muller normals. The
/// standard distributions are avoided because their algorithms are
/// implementation-defined.
class Rng {
 public:
  static constexpr const char* algorithm = "mt19937_64/box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., k-1}.
  Index index(Index k) { return std::min<Index>(Index(uniform() * double(k)), k - 1); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  /// Filled row by row.
  Matrix normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cdap
