#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "geoeig/errors.hpp"

namespace geoeig {

// Real diagonal matrix diag(d_0, ..., d_{n-1}) with finite, nonnegative
// entries. Iterations that divide by it call require_nonsingular() first.
class DiagonalMatrix {
 public:
  DiagonalMatrix() = default;
  explicit DiagonalMatrix(std::vector<double> d) : d_(std::move(d)) {
    for (double v : d_)
      if (!std::isfinite(v) || v < 0.0)
        throw invalid_preconditioner("diagonal entries must be finite and nonnegative");
  }

  static DiagonalMatrix constant(std::size_t n, double v) { return DiagonalMatrix(std::vector<double>(n, v)); }

  std::size_t size() const { return d_.size(); }
  double operator[](std::size_t i) const { return d_[i]; }
  std::span<const double> values() const { return d_; }

  double max() const { return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end()); }
  double min() const { return d_.empty() ? 0.0 : *std::min_element(d_.begin(), d_.end()); }

  bool nonsingular() const { return std::all_of(d_.begin(), d_.end(), [](double v) { return v > 0.0; }); }

  const DiagonalMatrix& require_nonsingular(std::size_t n) const {
    if (d_.size() != n) throw dimension_mismatch("preconditioner length differs from n");
    for (std::size_t i = 0; i < d_.size(); ++i)
      if (!(d_[i] > 0.0))
        throw invalid_preconditioner("preconditioner entry " + std::to_string(i) + " is not positive");
    return *this;
  }

  friend bool operator==(const DiagonalMatrix&, const DiagonalMatrix&) = default;

 private:
  std::vector<double> d_;
};

// Both iterations divide by the same expressions, so the centralized and the
// vertex-level code share these two helpers.
inline double inverse_square(double q) { return 1.0 / (q * q); }
inline double inverse(double q) { return 1.0 / q; }

}  // namespace geoeig
