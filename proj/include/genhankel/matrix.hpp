#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "genhankel/link.hpp"
#include "genhankel/rng.hpp"

namespace genhankel {

/// Dense square matrix, row-major, 0-based element access.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * n_, n_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }
  std::span<const double> data() const { return data_; }

  static Matrix identity(std::size_t n);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A_n = n^{-1/2} (x_{L(i,j)}) with one input variable per residue class.
struct PatternedMatrix {
  std::int64_t n = 0;
  LinkSpec link;
  Matrix entries;
  std::vector<double> inputs;  // x_0 .. x_{a_n - 1}, unscaled
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  /// 1-based access, i, j in [1, n].
  double entry(std::int64_t i, std::int64_t j) const {
    return entries(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  }
};

/// Deterministic in (n, link, dist, seed, replicate).
PatternedMatrix build_matrix(std::int64_t n, const LinkSpec& link, InputDistribution dist,
                             std::uint64_t seed, std::uint64_t replicate = 0);

}  // namespace genhankel
