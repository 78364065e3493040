#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurovariety/hompoly.hpp"
#include "neurovariety/random.hpp"
#include "neurovariety/scalar.hpp"

namespace nv {

// Widths (d_0, ..., d_L) and activation degree r of a bias-free polynomial
// network. The degree is ignored when L = 1.
class Architecture {
 public:
  // Throws UsageError: empty or single width, width < 1, or r < 1 with L >= 2.
  Architecture(std::vector<int> widths, int activation_degree);

  // "2,2,2"
  static Architecture parse(std::string_view text, int activation_degree);

  const std::vector<int>& widths() const { return widths_; }
  int width(int i) const { return widths_[static_cast<std::size_t>(i)]; }
  int activation_degree() const { return activation_degree_; }
  int depth() const { return static_cast<int>(widths_.size()) - 1; }
  int input_width() const { return widths_.front(); }
  int output_width() const { return widths_.back(); }

  // Degree r^{L-1} of every output coordinate (1 when L = 1); checked.
  int output_degree() const;
  // Degree r^{i-1} of the pre-activations of layer i (1-based).
  int layer_degree(int i) const;

  // d_1 + ... + d_{L-1}: dimension of the multi-homogeneity group.
  std::uint64_t hidden_width_sum() const;
  // Every d_i > 1 for i = 1..L, the width hypothesis of the high-degree
  // threshold bound.
  bool widths_exceed_one() const;
  bool is_equi_width() const;

  Architecture with_degree(int r) const { return Architecture(widths_, r); }
  // Canonical text form "d0,d1,...,dL".
  std::string to_string() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;

 private:
  std::vector<int> widths_;
  int activation_degree_;
};

// d_L * C(d_0 + r^{L-1} - 1, r^{L-1}), checked against overflow and the cap.
std::uint64_t ambient_dim(const Architecture& arch);
// Same count, checked for overflow only.
std::uint64_t ambient_count(const Architecture& arch);
// sum_i d_i d_{i+1}, checked.
std::uint64_t param_count(const Architecture& arch);

// The matrix tuple (W_1, ..., W_L), W_i of shape d_i x d_{i-1}.
template <typename Scalar>
struct WeightSet {
  std::vector<Matrix<Scalar>> matrices;

  std::size_t size() const { return matrices.size(); }
  const Matrix<Scalar>& operator[](std::size_t i) const { return matrices[i]; }
  Matrix<Scalar>& operator[](std::size_t i) { return matrices[i]; }

  friend bool operator==(const WeightSet& a, const WeightSet& b) {
    if (a.matrices.size() != b.matrices.size()) return false;
    for (std::size_t i = 0; i < a.matrices.size(); ++i) {
      if (a.matrices[i].rows() != b.matrices[i].rows() || a.matrices[i].cols() != b.matrices[i].cols() ||
          a.matrices[i] != b.matrices[i]) {
        return false;
      }
    }
    return true;
  }
};

// Throws ShapeError unless w matches arch.
template <typename Scalar>
void check_shapes(const Architecture& arch, const WeightSet<Scalar>& w) {
  if (static_cast<int>(w.size()) != arch.depth()) {
    throw ShapeError("weight set has " + std::to_string(w.size()) + " matrices, architecture " + arch.to_string() +
                     " needs " + std::to_string(arch.depth()));
  }
  for (int i = 1; i <= arch.depth(); ++i) {
    const auto& m = w[static_cast<std::size_t>(i - 1)];
    if (m.rows() != arch.width(i) || m.cols() != arch.width(i - 1)) {
      throw ShapeError("W_" + std::to_string(i) + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(arch.width(i)) + "x" + std::to_string(arch.width(i - 1)));
    }
  }
}

// Architecture implied by the matrix shapes.
template <typename Scalar>
Architecture architecture_of(const WeightSet<Scalar>& w, int activation_degree) {
  if (w.matrices.empty()) throw ShapeError("empty weight set");
  std::vector<int> widths{static_cast<int>(w[0].cols())};
  for (const auto& m : w.matrices) {
    if (m.cols() != widths.back()) throw ShapeError("consecutive weight matrices do not chain");
    widths.push_back(static_cast<int>(m.rows()));
  }
  return Architecture(std::move(widths), activation_degree);
}

template <typename Scalar>
struct NetworkOutput {
  std::vector<HomPoly<Scalar>> polys;
};

// Per-layer values of one forward pass. For layer i = 1..L:
//   inputs[i-1]  = a_{i-1}, the layer input (a_0 = coordinates x_1..x_{d_0})
//   pre[i-1]     = q_i = W_i a_{i-1}
// and for hidden layers i < L:
//   slope[i-1][j] = r * q_{i,j}^{r-1}, the derivative of the activation.
template <typename Scalar>
struct ForwardCache {
  std::vector<std::vector<HomPoly<Scalar>>> inputs;
  std::vector<std::vector<HomPoly<Scalar>>> pre;
  std::vector<std::vector<HomPoly<Scalar>>> slope;

  const std::vector<HomPoly<Scalar>>& output() const { return pre.back(); }
};

namespace detail {

template <typename Scalar>
std::vector<HomPoly<Scalar>> apply_layer(const Matrix<Scalar>& w, const std::vector<HomPoly<Scalar>>& in) {
  std::vector<HomPoly<Scalar>> out;
  out.reserve(static_cast<std::size_t>(w.rows()));
  std::vector<Scalar> row(static_cast<std::size_t>(w.cols()));
  for (Eigen::Index j = 0; j < w.rows(); ++j) {
    for (Eigen::Index k = 0; k < w.cols(); ++k) row[static_cast<std::size_t>(k)] = w(j, k);
    out.push_back(linear_combination(in, row));
  }
  return out;
}

template <typename Scalar>
HomPoly<Scalar> constant(int num_vars, const Scalar& c) {
  Vector<Scalar> v(1);
  v(0) = c;
  return HomPoly<Scalar>(num_vars, 0, std::move(v));
}

template <typename Scalar>
Scalar int_scalar(int k) {
  if constexpr (std::is_same_v<Scalar, Complex>) {
    return Complex(static_cast<double>(k), 0.0);
  } else {
    return Scalar(k);
  }
}

}  // namespace detail

template <typename Scalar>
std::vector<HomPoly<Scalar>> coordinate_forms(int num_vars) {
  std::vector<HomPoly<Scalar>> xs;
  xs.reserve(static_cast<std::size_t>(num_vars));
  for (int v = 0; v < num_vars; ++v) {
    Vector<Scalar> c = Vector<Scalar>::Zero(num_vars);
    c(v) = Scalar(1);
    xs.emplace_back(num_vars, 1, std::move(c));
  }
  return xs;
}

// One forward pass keeping every intermediate layer. `with_slopes` also
// stores r q^{r-1} for the tangent pass.
template <typename Scalar>
ForwardCache<Scalar> forward_cache(const Architecture& arch, const WeightSet<Scalar>& w, bool with_slopes = true) {
  check_shapes(arch, w);
  (void)ambient_dim(arch);
  const int n = arch.input_width();
  const int r = arch.activation_degree();
  ForwardCache<Scalar> cache;
  std::vector<HomPoly<Scalar>> current = coordinate_forms<Scalar>(n);
  for (int i = 1; i <= arch.depth(); ++i) {
    cache.inputs.push_back(current);
    std::vector<HomPoly<Scalar>> q = detail::apply_layer(w[static_cast<std::size_t>(i - 1)], current);
    if (i < arch.depth()) {
      std::vector<HomPoly<Scalar>> activated;
      activated.reserve(q.size());
      std::vector<HomPoly<Scalar>> slopes;
      for (const auto& qj : q) {
        activated.push_back(poly_pow(qj, r));
        if (with_slopes) {
          const HomPoly<Scalar> lower = r == 1 ? detail::constant(n, Scalar(1)) : poly_pow(qj, r - 1);
          slopes.push_back(detail::int_scalar<Scalar>(r) * lower);
        }
      }
      cache.slope.push_back(std::move(slopes));
      current = std::move(activated);
    }
    cache.pre.push_back(std::move(q));
  }
  return cache;
}

// p_w = W_L s(W_{L-1} ... s(W_1 x)).
template <typename Scalar>
NetworkOutput<Scalar> forward(const Architecture& arch, const WeightSet<Scalar>& w) {
  ForwardCache<Scalar> cache = forward_cache(arch, w, false);
  return NetworkOutput<Scalar>{std::move(cache.pre.back())};
}

// Concatenated coefficient vectors, length ambient_dim(arch).
template <typename Scalar>
Vector<Scalar> vectorize(const NetworkOutput<Scalar>& out) {
  Eigen::Index total = 0;
  for (const auto& p : out.polys) total += static_cast<Eigen::Index>(p.size());
  Vector<Scalar> v(total);
  Eigen::Index at = 0;
  for (const auto& p : out.polys) {
    v.segment(at, static_cast<Eigen::Index>(p.size())) = p.coeffs();
    at += static_cast<Eigen::Index>(p.size());
  }
  return v;
}

// Uniform entries: residues over a prime field, real parts in [-1, 1] over
// ComplexFloat. Exact rationals are rejected with UnsupportedFieldError.
template <typename Scalar>
WeightSet<Scalar> random_weights(const Architecture& arch, std::uint64_t seed) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    (void)arch;
    (void)seed;
    throw UnsupportedFieldError("random weights are sampled over a prime field or complex floats, not exact rationals");
  } else {
    Rng rng(seed);
    WeightSet<Scalar> w;
    for (int i = 1; i <= arch.depth(); ++i) {
      Matrix<Scalar> m(arch.width(i), arch.width(i - 1));
      for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) = rng.sample<Scalar>();
      }
      w.matrices.push_back(std::move(m));
    }
    return w;
  }
}

// Diagonal scalings D_1..D_{L-1} (diagonal entries) and permutations
// P_1..P_{L-1} (index arrays: row a of P_i M is row perm[a] of M).
template <typename Scalar>
struct Homogeneity {
  std::vector<Vector<Scalar>> scalings;
  std::vector<std::vector<int>> perms;
};

namespace detail {

template <typename Scalar>
WeightSet<Scalar> apply_homogeneity_impl(const WeightSet<Scalar>& w, const Homogeneity<Scalar>& h, int r,
                                         bool compensate) {
  const std::size_t hidden = w.size() == 0 ? 0 : w.size() - 1;
  if (h.scalings.size() != hidden || h.perms.size() != hidden) {
    throw ShapeError("homogeneity needs " + std::to_string(hidden) + " scalings and permutations");
  }
  // inv_pow[i][c] = D_{i+1}[c]^{-r}
  std::vector<Vector<Scalar>> inv_pow(hidden);
  for (std::size_t i = 0; i < hidden; ++i) {
    const Vector<Scalar>& d = h.scalings[i];
    if (d.size() != w[i].rows() || static_cast<Eigen::Index>(h.perms[i].size()) != w[i].rows()) {
      throw ShapeError("scaling/permutation " + std::to_string(i + 1) + " has the wrong size");
    }
    std::vector<bool> seen(h.perms[i].size(), false);
    for (int p : h.perms[i]) {
      if (p < 0 || static_cast<std::size_t>(p) >= seen.size() || seen[static_cast<std::size_t>(p)]) {
        throw ShapeError("permutation " + std::to_string(i + 1) + " is not a bijection");
      }
      seen[static_cast<std::size_t>(p)] = true;
    }
    inv_pow[i].resize(d.size());
    for (Eigen::Index c = 0; c < d.size(); ++c) {
      if (FieldTraits<Scalar>::is_zero(d(c))) {
        throw SingularScalingError("D_" + std::to_string(i + 1) + " has a zero diagonal entry");
      }
      const Scalar inv = FieldTraits<Scalar>::inverse(d(c));
      Scalar acc(1);
      for (int k = 0; k < r; ++k) acc *= inv;
      inv_pow[i](c) = compensate ? acc : Scalar(1);
    }
  }

  WeightSet<Scalar> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Matrix<Scalar>& m = w[i];
    Matrix<Scalar> t(m.rows(), m.cols());
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      // Left factor P_i D_i, absent on the output layer.
      Eigen::Index src_row = a;
      Scalar left(1);
      if (i < hidden) {
        src_row = h.perms[i][static_cast<std::size_t>(a)];
        left = h.scalings[i](src_row);
      }
      for (Eigen::Index b = 0; b < m.cols(); ++b) {
        // Right factor D_{i-1}^{-r} P_{i-1}^T, absent on the first layer.
        Eigen::Index src_col = b;
        Scalar right(1);
        if (i > 0) {
          src_col = h.perms[i - 1][static_cast<std::size_t>(b)];
          right = inv_pow[i - 1](src_col);
        }
        t(a, b) = left * m(src_row, src_col) * right;
      }
    }
    out.matrices.push_back(std::move(t));
  }
  return out;
}

}  // namespace detail

// (P_1 D_1 W_1, P_2 D_2 W_2 D_1^{-r} P_1^T, ..., W_L D_{L-1}^{-r} P_{L-1}^T).
// Raises SingularScalingError on a zero diagonal entry.
template <typename Scalar>
WeightSet<Scalar> apply_homogeneity(const WeightSet<Scalar>& w, const Homogeneity<Scalar>& h, int r) {
  return detail::apply_homogeneity_impl(w, h, r, true);
}

template <typename Scalar>
Homogeneity<Scalar> identity_homogeneity(const Architecture& arch) {
  Homogeneity<Scalar> h;
  for (int i = 1; i < arch.depth(); ++i) {
    h.scalings.push_back(Vector<Scalar>::Ones(arch.width(i)));
    std::vector<int> perm(static_cast<std::size_t>(arch.width(i)));
    for (int k = 0; k < arch.width(i); ++k) perm[static_cast<std::size_t>(k)] = k;
    h.perms.push_back(std::move(perm));
  }
  return h;
}

// Random invertible diagonal scalings and uniform permutations over the
// current prime field.
Homogeneity<ModP> random_homogeneity(const Architecture& arch, Rng& rng);

}  // namespace nv
