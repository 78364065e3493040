#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/SVD>

#include "neurovariety/hompoly.hpp"
#include "neurovariety/network.hpp"
#include "neurovariety/scalar.hpp"

namespace nv {

// value + eps * tangent with eps^2 = 0.
template <typename Scalar>
struct TangentPoly {
  HomPoly<Scalar> value;
  HomPoly<Scalar> tangent;

  TangentPoly(HomPoly<Scalar> v, HomPoly<Scalar> t) : value(std::move(v)), tangent(std::move(t)) {
    value.require_same_shape(tangent);
  }

  static TangentPoly constant(HomPoly<Scalar> v) {
    HomPoly<Scalar> zero(v.num_vars(), v.degree());
    return TangentPoly(std::move(v), std::move(zero));
  }

  friend TangentPoly operator+(const TangentPoly& a, const TangentPoly& b) {
    return TangentPoly(a.value + b.value, a.tangent + b.tangent);
  }
  friend TangentPoly operator*(const Scalar& s, const TangentPoly& a) { return TangentPoly(s * a.value, s * a.tangent); }
};

// Product rule: (a + eps a')(b + eps b') = ab + eps (a'b + ab').
template <typename Scalar>
TangentPoly<Scalar> multiply(const TangentPoly<Scalar>& a, const TangentPoly<Scalar>& b) {
  return TangentPoly<Scalar>(multiply(a.value, b.value),
                             multiply(a.tangent, b.value) + multiply(a.value, b.tangent));
}

// Repeated squaring over dual polynomials.
template <typename Scalar>
TangentPoly<Scalar> poly_pow(const TangentPoly<Scalar>& p, int r) {
  if (r < 1) throw UsageError("poly_pow requires r >= 1");
  std::optional<TangentPoly<Scalar>> acc;
  TangentPoly<Scalar> base = p;
  unsigned e = static_cast<unsigned>(r);
  while (true) {
    if (e & 1U) acc = acc ? multiply(*acc, base) : base;
    e >>= 1U;
    if (e == 0) break;
    base = multiply(base, base);
  }
  return *acc;
}

// Column offset of W_i (1-based layer index) in the parameter ordering:
// layers in order, each matrix row-major.
inline std::size_t parameter_offset(const Architecture& arch, int layer) {
  std::size_t off = 0;
  for (int i = 1; i < layer; ++i) off += static_cast<std::size_t>(arch.width(i)) * static_cast<std::size_t>(arch.width(i - 1));
  return off;
}

// Jacobian of the parameter map at w: ambient_dim x param_count, column
// (W_i)_{jk} holding the coefficients of d p_w / d (W_i)_{jk}. Each column is
// one tangent pass through the shared forward cache using
// d s(q) = r q^{r-1} dq.
template <typename Scalar>
Matrix<Scalar> jacobian(const Architecture& arch, const WeightSet<Scalar>& w) {
  const std::uint64_t ambient = ambient_dim(arch);
  const std::uint64_t params = param_count(arch);
  const ForwardCache<Scalar> cache = forward_cache(arch, w, true);
  const int L = arch.depth();
  const int n = arch.input_width();
  const int out_degree = arch.output_degree();
  const auto block = static_cast<Eigen::Index>(basis_size(n, out_degree));

  Matrix<Scalar> jac = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(params));
  for (int i = 1; i <= L; ++i) {
    const std::size_t offset = parameter_offset(arch, i);
    const auto& inputs = cache.inputs[static_cast<std::size_t>(i - 1)];
    for (int j = 0; j < arch.width(i); ++j) {
      for (int k = 0; k < arch.width(i - 1); ++k) {
        const auto col = static_cast<Eigen::Index>(offset + static_cast<std::size_t>(j * arch.width(i - 1) + k));
        const HomPoly<Scalar>& a_k = inputs[static_cast<std::size_t>(k)];
        if (i == L) {
          jac.col(col).segment(j * block, block) = a_k.coeffs();
          continue;
        }
        // Tangent of the activated layer-i output: nonzero only at coordinate j.
        HomPoly<Scalar> seed = multiply(cache.slope[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)], a_k);
        std::vector<HomPoly<Scalar>> dq;
        {
          const Matrix<Scalar>& next = w[static_cast<std::size_t>(i)];
          dq.reserve(static_cast<std::size_t>(next.rows()));
          for (Eigen::Index row = 0; row < next.rows(); ++row) dq.push_back(next(row, j) * seed);
        }
        for (int l = i + 1; l < L; ++l) {
          const auto& slopes = cache.slope[static_cast<std::size_t>(l - 1)];
          std::vector<HomPoly<Scalar>> da;
          da.reserve(dq.size());
          for (std::size_t m = 0; m < dq.size(); ++m) da.push_back(multiply(slopes[m], dq[m]));
          dq = detail::apply_layer(w[static_cast<std::size_t>(l)], da);
        }
        for (std::size_t m = 0; m < dq.size(); ++m) {
          jac.col(col).segment(static_cast<Eigen::Index>(m) * block, block) = dq[m].coeffs();
        }
      }
    }
  }
  return jac;
}

// Directional derivative of vectorize(forward(arch, w)) along `direction`
// (same shapes as w), computed by pushing TangentPoly values through the
// network. Independent of the cached-slope route used by jacobian().
template <typename Scalar>
Vector<Scalar> forward_tangent(const Architecture& arch, const WeightSet<Scalar>& w, const WeightSet<Scalar>& direction) {
  check_shapes(arch, w);
  check_shapes(arch, direction);
  const int n = arch.input_width();
  std::vector<TangentPoly<Scalar>> current;
  for (auto& x : coordinate_forms<Scalar>(n)) current.push_back(TangentPoly<Scalar>::constant(std::move(x)));
  for (int i = 1; i <= arch.depth(); ++i) {
    const Matrix<Scalar>& W = w[static_cast<std::size_t>(i - 1)];
    const Matrix<Scalar>& dW = direction[static_cast<std::size_t>(i - 1)];
    std::vector<TangentPoly<Scalar>> next;
    for (Eigen::Index j = 0; j < W.rows(); ++j) {
      HomPoly<Scalar> value(n, current.front().value.degree());
      HomPoly<Scalar> tangent(n, current.front().value.degree());
      for (Eigen::Index k = 0; k < W.cols(); ++k) {
        const auto& c = current[static_cast<std::size_t>(k)];
        value = value + W(j, k) * c.value;
        tangent = tangent + W(j, k) * c.tangent + dW(j, k) * c.value;
      }
      TangentPoly<Scalar> q(std::move(value), std::move(tangent));
      next.push_back(i < arch.depth() ? poly_pow(q, arch.activation_degree()) : std::move(q));
    }
    current = std::move(next);
  }
  NetworkOutput<Scalar> out;
  for (auto& t : current) out.polys.push_back(std::move(t.tangent));
  return vectorize(out);
}

// Row-echelon basis built one row at a time. Each stored row has a unit
// pivot and zeros in the pivot columns of the rows stored before it, so a
// single ordered sweep reduces a new row. Memory is rank x cols.
template <typename Scalar>
  requires ExactScalar<Scalar>
class PivotBasis {
 public:
  explicit PivotBasis(Eigen::Index cols) : cols_(cols) {}

  // Reduces `row` in place; keeps it when it is independent. Returns true
  // when the rank grew.
  bool insert(Vector<Scalar> row) {
    if (row.size() != cols_) throw ShapeError("PivotBasis: row length mismatch");
    reduce(row);
    Eigen::Index pivot = -1;
    for (Eigen::Index c = 0; c < cols_; ++c) {
      if (!FieldTraits<Scalar>::is_zero(row(c))) {
        pivot = c;
        break;
      }
    }
    if (pivot < 0) return false;
    const Scalar inv = FieldTraits<Scalar>::inverse(row(pivot));
    for (Eigen::Index c = pivot; c < cols_; ++c) row(c) *= inv;
    rows_.push_back(std::move(row));
    pivots_.push_back(pivot);
    return true;
  }

  void reduce(Vector<Scalar>& row) const {
    for (std::size_t b = 0; b < rows_.size(); ++b) {
      const Scalar factor = row(pivots_[b]);
      if (FieldTraits<Scalar>::is_zero(factor)) continue;
      const Vector<Scalar>& basis = rows_[b];
      for (Eigen::Index c = pivots_[b]; c < cols_; ++c) {
        if (!FieldTraits<Scalar>::is_zero(basis(c))) row(c) -= factor * basis(c);
      }
    }
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  Eigen::Index cols_;
  std::vector<Vector<Scalar>> rows_;
  std::vector<Eigen::Index> pivots_;
};

// Exact rank over a prime field or the rationals, rows streamed through a
// PivotBasis; stops once the rank reaches min(rows, cols).
template <typename Scalar>
  requires ExactScalar<Scalar>
std::size_t rank(const Matrix<Scalar>& m) {
  PivotBasis<Scalar> basis(m.cols());
  const auto full = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
  for (Eigen::Index r = 0; r < m.rows() && basis.rank() < full; ++r) basis.insert(m.row(r).transpose());
  return basis.rank();
}

// Numerical rank: singular values above max(rows, cols) * 1e-10 * sigma_max.
inline std::size_t rank(const Matrix<Complex>& m) {
  if (m.size() == 0) return 0;
  const Eigen::BDCSVD<Matrix<Complex>> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * 1e-10 * sv(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++r;
  }
  return r;
}

struct RankResult {
  std::size_t rank = 0;
  int trials = 0;
  std::vector<std::size_t> per_trial_ranks;
  ScalarField field;
  std::uint64_t seed = 0;
  // Per-trial Schwartz-Zippel bound; prime field only.
  std::optional<double> failure_bound;
};

// Weight-degree (r^L - 1)/(r - 1) of the output coefficients (L when r = 1).
std::uint64_t output_weight_degree(const Architecture& arch);

// Schwartz-Zippel bound m (e_L - 1) / p with m = min(params, ambient).
double schwartz_zippel_bound(const Architecture& arch, std::uint64_t prime);

// Max Jacobian rank over `trials` random weight sets. Trial t uses
// derive_seed(seed, t). Raises UnsupportedFieldError for ExactRational.
RankResult generic_rank(const Architecture& arch, const ScalarField& field, int trials, std::uint64_t seed);

}  // namespace nv
