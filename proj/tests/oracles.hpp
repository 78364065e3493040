#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: polynomials are sparse maps from exponent vectors, networks are
// expanded term by term, and ranks come from textbook Gaussian elimination.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "neurovariety/scalar.hpp"

namespace oracle {

using nv::Rational;
using Exps = std::vector<int>;

template <typename S>
using Sparse = std::map<Exps, S>;

// All exponent vectors of total degree D in n variables, in graded-lex order
// descending in the first variable (recursive enumeration).
inline std::vector<Exps> monomials(int n, int D) {
  std::vector<Exps> out;
  Exps cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == n - 1) {
      cur[static_cast<std::size_t>(v)] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[static_cast<std::size_t>(v)] = e;
      rec(v + 1, left - e);
    }
  };
  rec(0, D);
  return out;
}

template <typename S>
Sparse<S> mul(const Sparse<S>& a, const Sparse<S>& b) {
  Sparse<S> out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

template <typename S>
Sparse<S> pow(const Sparse<S>& a, int r, int n) {
  Sparse<S> out{{Exps(static_cast<std::size_t>(n), 0), S(1)}};
  for (int k = 0; k < r; ++k) out = mul(out, a);
  return out;
}

template <typename S>
void axpy(Sparse<S>& y, const S& a, const Sparse<S>& x) {
  for (const auto& [e, c] : x) y[e] += a * c;
}

// Dense coefficient vector of a sparse polynomial over the degree-D basis.
template <typename S>
std::vector<S> dense(const Sparse<S>& p, int n, int D) {
  std::vector<S> out;
  for (const auto& e : monomials(n, D)) {
    const auto it = p.find(e);
    out.push_back(it == p.end() ? S(0) : it->second);
  }
  return out;
}

// Weights as plain nested vectors: w[i][a][b] is entry (a, b) of W_{i+1}.
template <typename S>
using Weights = std::vector<std::vector<std::vector<S>>>;

// Output coordinates of the network, expanded directly.
template <typename S>
std::vector<Sparse<S>> network(const std::vector<int>& widths, int r, const Weights<S>& w) {
  const int n = widths.front();
  std::vector<Sparse<S>> layer;
  for (int v = 0; v < n; ++v) {
    Exps e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(v)] = 1;
    layer.push_back(Sparse<S>{{e, S(1)}});
  }
  const std::size_t L = widths.size() - 1;
  for (std::size_t i = 0; i < L; ++i) {
    std::vector<Sparse<S>> next;
    for (const auto& row : w[i]) {
      Sparse<S> q;
      for (std::size_t k = 0; k < row.size(); ++k) axpy(q, row[k], layer[k]);
      next.push_back(i + 1 < L ? pow(q, r, n) : q);
    }
    layer = std::move(next);
  }
  return layer;
}

template <typename S>
int output_degree(const std::vector<int>& widths, int r) {
  int D = 1;
  for (std::size_t i = 2; i < widths.size(); ++i) D *= r;
  return D;
}

template <typename S>
std::vector<S> network_vector(const std::vector<int>& widths, int r, const Weights<S>& w) {
  const int n = widths.front();
  const int D = output_degree<S>(widths, r);
  std::vector<S> out;
  for (const auto& p : network(widths, r, w)) {
    for (auto& c : dense(p, n, D)) out.push_back(c);
  }
  return out;
}

// Rank by Gaussian elimination with full row swaps.
template <typename S>
std::size_t rank(std::vector<std::vector<S>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == S(0)) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == S(0)) continue;
      const S f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

// Exact Jacobian of the parameter map by interpolation: for each parameter
// the output is a polynomial in that parameter of degree <= E, sampled at
// t = 0..E and differentiated at 0 via Lagrange weights. Columns follow the
// row-major, layer-by-layer parameter order.
inline std::vector<std::vector<Rational>> jacobian(const std::vector<int>& widths, int r,
                                                    const Weights<Rational>& w) {
  const std::size_t L = widths.size() - 1;
  int E = 0;
  for (std::size_t i = 0, pw = 1; i < L; ++i, pw *= static_cast<std::size_t>(r)) E += static_cast<int>(pw);
  // l'_k(0) for nodes 0..E.
  std::vector<Rational> dweight(static_cast<std::size_t>(E) + 1);
  for (int k = 0; k <= E; ++k) {
    Rational denom(1);
    for (int j = 0; j <= E; ++j) {
      if (j != k) denom *= Rational(k - j);
    }
    Rational sum(0);
    for (int skip = 0; skip <= E; ++skip) {
      if (skip == k) continue;
      Rational prod(1);
      for (int j = 0; j <= E; ++j) {
        if (j != k && j != skip) prod *= Rational(-j);
      }
      sum += prod;
    }
    dweight[static_cast<std::size_t>(k)] = sum / denom;
  }

  std::vector<std::vector<Rational>> cols;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t a = 0; a < w[i].size(); ++a) {
      for (std::size_t b = 0; b < w[i][a].size(); ++b) {
        std::vector<Rational> col;
        for (int k = 0; k <= E; ++k) {
          Weights<Rational> shifted = w;
          shifted[i][a][b] += Rational(k);
          const auto v = network_vector(widths, r, shifted);
          if (col.empty()) col.assign(v.size(), Rational(0));
          for (std::size_t t = 0; t < v.size(); ++t) col[t] += dweight[static_cast<std::size_t>(k)] * v[t];
        }
        cols.push_back(std::move(col));
      }
    }
  }
  // Transpose to ambient x params.
  std::vector<std::vector<Rational>> jac(cols.front().size(), std::vector<Rational>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t t = 0; t < cols[c].size(); ++t) jac[t][c] = cols[c][t];
  }
  return jac;
}

// Deterministic small-integer weights from a linear congruential stream.
inline Weights<Rational> integer_weights(const std::vector<int>& widths, std::uint64_t seed, int range = 9) {
  std::uint64_t s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  Weights<Rational> w;
  for (std::size_t i = 1; i < widths.size(); ++i) {
    std::vector<std::vector<Rational>> m;
    for (int a = 0; a < widths[i]; ++a) {
      std::vector<Rational> row;
      for (int b = 0; b < widths[i - 1]; ++b) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        row.emplace_back(static_cast<int>((s >> 33) % static_cast<std::uint64_t>(2 * range + 1)) - range);
      }
      m.push_back(std::move(row));
    }
    w.push_back(std::move(m));
  }
  return w;
}

// Max rank of the exact Jacobian over a few integer weight draws.
inline std::size_t dimension(const std::vector<int>& widths, int r, int draws = 2) {
  std::size_t best = 0;
  for (int t = 0; t < draws; ++t) {
    best = std::max(best, rank(jacobian(widths, r, integer_weights(widths, static_cast<std::uint64_t>(t) + 1))));
  }
  return best;
}

// C(n, k) in arbitrary precision.
inline nv::BigInt binomial(int n, int k) {
  nv::BigInt num(1);
  nv::BigInt den(1);
  for (int i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

// Expected dimension straight from its definition.
inline nv::BigInt expected_dimension(const std::vector<int>& widths, int r) {
  const std::size_t L = widths.size() - 1;
  nv::BigInt params(widths.back());
  for (std::size_t i = 0; i < L; ++i) params += nv::BigInt(widths[i] - 1) * widths[i + 1];
  nv::BigInt D(1);
  for (std::size_t i = 1; i < L; ++i) D *= r;
  const nv::BigInt ambient = nv::BigInt(widths.back()) * binomial(widths.front() + D.convert_to<int>() - 1, D.convert_to<int>());
  return std::min(params, ambient);
}

}  // namespace oracle
