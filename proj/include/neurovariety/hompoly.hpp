#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"
#include "neurovariety/monomial.hpp"
#include "neurovariety/scalar.hpp"

namespace nv {

// Homogeneous polynomial stored densely over the graded-lex basis of
// MonomialIndexer(num_vars, degree). The zero polynomial is simply the
// all-zero coefficient vector.
template <typename Scalar>
class HomPoly {
 public:
  using CoeffVector = Vector<Scalar>;

  HomPoly(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
    const std::uint64_t n = basis_size(num_vars, degree);
    require_within_cap(n, "polynomial");
    coeffs_ = CoeffVector::Zero(static_cast<Eigen::Index>(n));
  }

  HomPoly(int num_vars, int degree, CoeffVector coeffs)
      : num_vars_(num_vars), degree_(degree), coeffs_(std::move(coeffs)) {
    const std::uint64_t n = basis_size(num_vars, degree);
    if (static_cast<std::uint64_t>(coeffs_.size()) != n) {
      throw ShapeError("coefficient vector has length " + std::to_string(coeffs_.size()) +
                       ", basis size is " + std::to_string(n));
    }
  }

  // Sum of terms; repeated monomials accumulate.
  static HomPoly from_terms(int num_vars, int degree,
                            const std::vector<std::pair<Scalar, Exponents>>& terms) {
    HomPoly out(num_vars, degree);
    const MonomialIndexer idx(num_vars, degree);
    for (const auto& [c, e] : terms) {
      out.coeffs_(static_cast<Eigen::Index>(idx.rank(e))) += c;
    }
    return out;
  }

  // The linear form sum_i c_i x_i.
  static HomPoly linear(std::span<const Scalar> c) {
    HomPoly out(static_cast<int>(c.size()), 1);
    for (std::size_t i = 0; i < c.size(); ++i) out.coeffs_(static_cast<Eigen::Index>(i)) = c[i];
    return out;
  }

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  const CoeffVector& coeffs() const { return coeffs_; }
  const Scalar& operator[](std::size_t i) const { return coeffs_(static_cast<Eigen::Index>(i)); }

  Scalar coeff(std::span<const int> exponents) const {
    return coeffs_(static_cast<Eigen::Index>(MonomialIndexer(num_vars_, degree_).rank(exponents)));
  }

  bool is_zero() const {
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) {
      if (!FieldTraits<Scalar>::is_zero(coeffs_(i))) return false;
    }
    return true;
  }

  bool same_shape(const HomPoly& o) const { return num_vars_ == o.num_vars_ && degree_ == o.degree_; }

  friend bool operator==(const HomPoly& a, const HomPoly& b) {
    return a.same_shape(b) && a.coeffs_ == b.coeffs_;
  }

  friend HomPoly operator+(const HomPoly& a, const HomPoly& b) {
    a.require_same_shape(b);
    return HomPoly(a.num_vars_, a.degree_, a.coeffs_ + b.coeffs_);
  }
  friend HomPoly operator-(const HomPoly& a, const HomPoly& b) {
    a.require_same_shape(b);
    return HomPoly(a.num_vars_, a.degree_, a.coeffs_ - b.coeffs_);
  }
  friend HomPoly operator*(const Scalar& s, const HomPoly& a) {
    return HomPoly(a.num_vars_, a.degree_, CoeffVector(a.coeffs_ * s));
  }

  void require_same_shape(const HomPoly& o) const {
    if (!same_shape(o)) {
      throw ShapeError("polynomial shapes differ: (" + std::to_string(num_vars_) + " vars, degree " +
                       std::to_string(degree_) + ") vs (" + std::to_string(o.num_vars_) + " vars, degree " +
                       std::to_string(o.degree_) + ")");
    }
  }

 private:
  int num_vars_;
  int degree_;
  CoeffVector coeffs_;
};

// Univariate polynomial, index i holding the coefficient of t^i.
template <typename Scalar>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(Vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {}

  const Vector<Scalar>& coeffs() const { return coeffs_; }

  // Largest index with a nonzero coefficient; nullopt for the zero polynomial.
  std::optional<std::size_t> degree() const {
    for (Eigen::Index i = coeffs_.size(); i-- > 0;) {
      if (!FieldTraits<Scalar>::is_zero(coeffs_(i))) return static_cast<std::size_t>(i);
    }
    return std::nullopt;
  }

  bool is_zero() const { return !degree().has_value(); }

  // Equality up to trailing zeros.
  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    const Eigen::Index n = std::max(a.coeffs_.size(), b.coeffs_.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar x = i < a.coeffs_.size() ? a.coeffs_(i) : Scalar(0);
      const Scalar y = i < b.coeffs_.size() ? b.coeffs_(i) : Scalar(0);
      if (x != y) return false;
    }
    return true;
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    const Eigen::Index n = std::max(a.coeffs_.size(), b.coeffs_.size());
    Vector<Scalar> out = Vector<Scalar>::Zero(n);
    out.head(a.coeffs_.size()) += a.coeffs_;
    out.head(b.coeffs_.size()) += b.coeffs_;
    return UniPoly(std::move(out));
  }

 private:
  Vector<Scalar> coeffs_;
};

// Dense convolution. Raises ShapeError when the variable counts differ and
// CapacityError when the product basis exceeds the cap.
template <typename Scalar>
HomPoly<Scalar> multiply(const HomPoly<Scalar>& a, const HomPoly<Scalar>& b) {
  if (a.num_vars() != b.num_vars()) throw ShapeError("multiply: variable counts differ");
  const int n = a.num_vars();
  const int degree = a.degree() + b.degree();
  require_within_cap(basis_size(n, degree), "product");
  const MonomialIndexer out_index(n, degree);
  const std::vector<int> ta = MonomialIndexer(n, a.degree()).exponent_table();
  const std::vector<int> tb = MonomialIndexer(n, b.degree()).exponent_table();

  // Nonzero terms of b, gathered once.
  std::vector<std::size_t> nz_b;
  nz_b.reserve(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!FieldTraits<Scalar>::is_zero(b[j])) nz_b.push_back(j);
  }

  Vector<Scalar> out = Vector<Scalar>::Zero(static_cast<Eigen::Index>(out_index.size()));
  std::vector<int> sum(static_cast<std::size_t>(n));
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Scalar& ai = a[i];
    if (FieldTraits<Scalar>::is_zero(ai)) continue;
    const int* ei = ta.data() + i * un;
    for (std::size_t j : nz_b) {
      const int* ej = tb.data() + j * un;
      for (std::size_t v = 0; v < un; ++v) sum[v] = ei[v] + ej[v];
      out(static_cast<Eigen::Index>(out_index.rank_unchecked(sum.data()))) += ai * b[j];
    }
  }
  return HomPoly<Scalar>(n, degree, std::move(out));
}

// p^r by repeated squaring. Requires r >= 1.
template <typename Scalar>
HomPoly<Scalar> poly_pow(const HomPoly<Scalar>& p, int r) {
  if (r < 1) throw UsageError("poly_pow requires r >= 1, got " + std::to_string(r));
  require_within_cap(basis_size(p.num_vars(), static_cast<int>(checked_mul(static_cast<std::uint64_t>(p.degree()),
                                                                            static_cast<std::uint64_t>(r)))),
                     "power");
  std::optional<HomPoly<Scalar>> acc;
  HomPoly<Scalar> base = p;
  unsigned e = static_cast<unsigned>(r);
  while (true) {
    if (e & 1U) acc = acc ? multiply(*acc, base) : base;
    e >>= 1U;
    if (e == 0) break;
    base = multiply(base, base);
  }
  return *acc;
}

// sum_j row[j] * polys[j]. All polynomials must share their shape.
template <typename Scalar>
HomPoly<Scalar> linear_combination(std::span<const HomPoly<Scalar>> polys, std::span<const Scalar> row) {
  if (polys.empty()) throw ShapeError("linear_combination of an empty list");
  if (polys.size() != row.size()) {
    throw ShapeError("linear_combination: " + std::to_string(polys.size()) + " polynomials but " +
                     std::to_string(row.size()) + " weights");
  }
  Vector<Scalar> acc = Vector<Scalar>::Zero(static_cast<Eigen::Index>(polys.front().size()));
  for (std::size_t j = 0; j < polys.size(); ++j) {
    polys.front().require_same_shape(polys[j]);
    if (FieldTraits<Scalar>::is_zero(row[j])) continue;
    acc += polys[j].coeffs() * row[j];
  }
  return HomPoly<Scalar>(polys.front().num_vars(), polys.front().degree(), std::move(acc));
}

template <typename Scalar>
HomPoly<Scalar> linear_combination(const std::vector<HomPoly<Scalar>>& polys, const std::vector<Scalar>& row) {
  return linear_combination(std::span<const HomPoly<Scalar>>(polys), std::span<const Scalar>(row));
}

// q(t) = p(base + t * dir).
template <typename Scalar>
UniPoly<Scalar> restrict_to_line(const HomPoly<Scalar>& p, std::span<const Scalar> base, std::span<const Scalar> dir) {
  const auto n = static_cast<std::size_t>(p.num_vars());
  if (base.size() != n || dir.size() != n) {
    throw ShapeError("restrict_to_line: point and direction need " + std::to_string(n) + " coordinates");
  }
  const int degree = p.degree();
  const auto ud = static_cast<std::size_t>(degree);
  // powers[v][k] = (base_v + t dir_v)^k as a coefficient vector of length degree+1.
  std::vector<std::vector<Vector<Scalar>>> powers(n);
  for (std::size_t v = 0; v < n; ++v) {
    powers[v].reserve(ud + 1);
    Vector<Scalar> cur = Vector<Scalar>::Zero(degree + 1);
    cur(0) = Scalar(1);
    powers[v].push_back(cur);
    for (int k = 1; k <= degree; ++k) {
      Vector<Scalar> next = Vector<Scalar>::Zero(degree + 1);
      for (int i = 0; i < k; ++i) {
        next(i) += cur(i) * base[v];
        next(i + 1) += cur(i) * dir[v];
      }
      cur = next;
      powers[v].push_back(cur);
    }
  }

  const std::vector<int> table = MonomialIndexer(p.num_vars(), degree).exponent_table();
  Vector<Scalar> out = Vector<Scalar>::Zero(degree + 1);
  Vector<Scalar> term(degree + 1);
  Vector<Scalar> next(degree + 1);
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (FieldTraits<Scalar>::is_zero(p[m])) continue;
    term.setZero();
    term(0) = p[m];
    int term_degree = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const int e = table[m * n + v];
      if (e == 0) continue;
      next.setZero();
      const Vector<Scalar>& f = powers[v][static_cast<std::size_t>(e)];
      for (int i = 0; i <= term_degree; ++i) {
        if (FieldTraits<Scalar>::is_zero(term(i))) continue;
        for (int j = 0; j <= e; ++j) next(i + j) += term(i) * f(j);
      }
      term_degree += e;
      term.swap(next);
    }
    out += term;
  }
  return UniPoly<Scalar>(std::move(out));
}

template <typename Scalar>
Scalar evaluate(const HomPoly<Scalar>& p, std::span<const Scalar> point) {
  const auto n = static_cast<std::size_t>(p.num_vars());
  if (point.size() != n) throw ShapeError("evaluate: point has the wrong number of coordinates");
  const std::vector<int> table = MonomialIndexer(p.num_vars(), p.degree()).exponent_table();
  Scalar acc(0);
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (FieldTraits<Scalar>::is_zero(p[m])) continue;
    Scalar term = p[m];
    for (std::size_t v = 0; v < n; ++v) {
      for (int k = 0; k < table[m * n + v]; ++k) term *= point[v];
    }
    acc += term;
  }
  return acc;
}

// Coefficient-wise conversion between fields.
template <typename To, typename From, typename Fn>
HomPoly<To> map_coeffs(const HomPoly<From>& p, Fn&& fn) {
  Vector<To> out(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) out(static_cast<Eigen::Index>(i)) = fn(p[i]);
  return HomPoly<To>(p.num_vars(), p.degree(), std::move(out));
}

inline HomPoly<ModP> reduce(const HomPoly<Rational>& p) {
  return map_coeffs<ModP>(p, [](const Rational& q) { return nv::reduce(q); });
}

}  // namespace nv
