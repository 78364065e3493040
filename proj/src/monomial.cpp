#include "neurovariety/monomial.hpp"

#include <string>

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"

namespace nv {

std::uint64_t basis_size(int num_vars, int degree) {
  if (num_vars < 1 || degree < 0) throw ShapeError("basis_size: need num_vars >= 1 and degree >= 0");
  return checked_binomial(static_cast<std::uint64_t>(num_vars) + static_cast<std::uint64_t>(degree) - 1,
                          static_cast<std::uint64_t>(degree));
}

MonomialIndexer::MonomialIndexer(int num_vars, int degree)
    : num_vars_(num_vars), degree_(degree), size_(0) {
  const std::uint64_t size = basis_size(num_vars, degree);
  require_within_cap(size, "monomial basis");
  size_ = static_cast<std::size_t>(size);

  const auto rows = static_cast<std::size_t>(num_vars + degree + 1);
  const auto cols = static_cast<std::size_t>(num_vars + 1);
  binom_.assign(rows * cols, 0);
  // Entries beyond the basis size are never consulted by rank/unrank of valid
  // input, so saturation is harmless.
  for (std::size_t n = 0; n < rows; ++n) {
    binom_[n * cols] = 1;
    for (std::size_t k = 1; k < cols && k <= n; ++k) {
      const std::size_t a = binom_[(n - 1) * cols + k - 1];
      const std::size_t b = binom_[(n - 1) * cols + k];
      std::size_t s = 0;
      if (__builtin_add_overflow(a, b, &s)) s = SIZE_MAX;
      binom_[n * cols + k] = s;
    }
  }
}

std::size_t MonomialIndexer::rank_unchecked(const int* exponents) const {
  std::size_t index = 0;
  int remaining = degree_;
  for (int i = 0; i + 1 < num_vars_; ++i) {
    const int m = num_vars_ - i;
    const int e = exponents[i];
    // Monomials sharing the prefix whose i-th exponent exceeds e.
    index += binom(m - 2 + remaining - e, m - 1);
    remaining -= e;
  }
  return index;
}

std::size_t MonomialIndexer::rank(std::span<const int> exponents) const {
  if (static_cast<int>(exponents.size()) != num_vars_) {
    throw ShapeError("monomial has " + std::to_string(exponents.size()) + " exponents, expected " +
                     std::to_string(num_vars_));
  }
  long sum = 0;
  for (int e : exponents) {
    if (e < 0) throw ShapeError("negative exponent");
    sum += e;
  }
  if (sum != degree_) {
    throw DegreeMismatchError("exponents sum to " + std::to_string(sum) + ", expected degree " +
                              std::to_string(degree_));
  }
  return rank_unchecked(exponents.data());
}

Exponents MonomialIndexer::unrank(std::size_t index) const {
  if (index >= size_) {
    throw ShapeError("monomial index " + std::to_string(index) + " out of range " + std::to_string(size_));
  }
  Exponents out(static_cast<std::size_t>(num_vars_), 0);
  int remaining = degree_;
  for (int i = 0; i + 1 < num_vars_; ++i) {
    const int m = num_vars_ - i;
    for (int v = remaining; v >= 0; --v) {
      // Number of monomials in the remaining m-1 variables of degree remaining-v.
      const std::size_t block = binom(m - 2 + remaining - v, m - 2);
      if (index < block) {
        out[static_cast<std::size_t>(i)] = v;
        remaining -= v;
        break;
      }
      index -= block;
    }
  }
  out.back() = remaining;
  return out;
}

std::vector<int> MonomialIndexer::exponent_table() const {
  std::vector<int> table(size_ * static_cast<std::size_t>(num_vars_));
  if (size_ == 0) return table;
  // Walk the basis in order: decrement-and-carry over the grlex sequence.
  Exponents cur(static_cast<std::size_t>(num_vars_), 0);
  cur[0] = degree_;
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::copy(cur.begin(), cur.end(), table.begin() + static_cast<std::ptrdiff_t>(idx * cur.size()));
    if (idx + 1 == size_) break;
    // Successor: find the last position j < n-1 with cur[j] > 0, move one unit
    // to j+1 and gather everything after j+1 into j+1.
    int j = num_vars_ - 2;
    while (j >= 0 && cur[static_cast<std::size_t>(j)] == 0) --j;
    const auto uj = static_cast<std::size_t>(j);
    int tail = 0;
    for (std::size_t k = uj + 1; k < cur.size(); ++k) {
      tail += cur[k];
      cur[k] = 0;
    }
    cur[uj] -= 1;
    cur[uj + 1] = tail + 1;
  }
  return table;
}

}  // namespace nv
