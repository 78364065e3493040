#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nv {

using Exponents = std::vector<int>;

// Bijection between exponent vectors of total degree `degree` in `num_vars`
// variables and 0..size()-1. The order is graded-lexicographic, descending in
// the first variable: for two variables and degree 2 the basis is
// x^2, xy, y^2.
class MonomialIndexer {
 public:
  MonomialIndexer(int num_vars, int degree);

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return size_; }

  // Throws DegreeMismatchError when the exponents do not sum to degree(),
  // ShapeError on a length mismatch or negative entry.
  std::size_t rank(std::span<const int> exponents) const;
  // Throws ShapeError if index >= size().
  Exponents unrank(std::size_t index) const;

  // rank() without validation, for inner loops of the convolution.
  std::size_t rank_unchecked(const int* exponents) const;

  // Flattened row-major table of all exponent vectors in index order.
  std::vector<int> exponent_table() const;

 private:
  std::size_t binom(int n, int k) const {
    return binom_[static_cast<std::size_t>(n) * static_cast<std::size_t>(num_vars_ + 1) +
                  static_cast<std::size_t>(k)];
  }

  int num_vars_;
  int degree_;
  std::size_t size_;
  std::vector<std::size_t> binom_;  // Pascal table, rows 0..num_vars+degree, cols 0..num_vars
};

// C(num_vars + degree - 1, degree), checked; raises CapacityError on overflow.
std::uint64_t basis_size(int num_vars, int degree);

}  // namespace nv
