#include <doctest.h>

#include "neurovariety/diffrank.hpp"
#include "neurovariety/errors.hpp"
#include "oracles.hpp"

using namespace nv;

namespace {

WeightSet<Rational> to_weight_set(const oracle::Weights<Rational>& w) {
  WeightSet<Rational> out;
  for (const auto& m : w) {
    Matrix<Rational> mat(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.front().size()));
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = 0; b < m[a].size(); ++b) mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m[a][b];
    }
    out.matrices.push_back(std::move(mat));
  }
  return out;
}

template <typename S>
std::vector<std::vector<S>> rows_of(const Matrix<S>& m) {
  std::vector<std::vector<S>> out(static_cast<std::size_t>(m.rows()), std::vector<S>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) out[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = m(a, b);
  }
  return out;
}

HomPoly<ModP> random_poly(int n, int D, Rng& rng) {
  HomPoly<ModP> p(n, D);
  Vector<ModP> c(static_cast<Eigen::Index>(p.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.residue();
  return HomPoly<ModP>(n, D, c);
}

}  // namespace

TEST_CASE("exact Jacobian matches the interpolation oracle") {
  const std::vector<std::vector<int>> arches{{2, 2, 2}, {3, 2, 1}, {2, 3, 2}, {2, 2, 2, 2}, {2, 2}};
  for (const auto& widths : arches) {
    for (int r : {1, 2, 3}) {
      if (widths.size() == 4 && r == 3) continue;
      const auto ow = oracle::integer_weights(widths, 70 + static_cast<std::uint64_t>(r));
      const auto jac = jacobian(Architecture(widths, r), to_weight_set(ow));
      const auto expect = oracle::jacobian(widths, r, ow);
      REQUIRE(static_cast<std::size_t>(jac.rows()) == expect.size());
      REQUIRE(static_cast<std::size_t>(jac.cols()) == expect.front().size());
      CHECK(rows_of(jac) == expect);
    }
  }
}

TEST_CASE("Jacobian columns agree with dual-number directional derivatives") {
  const Architecture arch({2, 3, 2, 2}, 2);
  const auto w = random_weights<ModP>(arch, 1);
  const auto jac = jacobian(arch, w);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto dir = random_weights<ModP>(arch, 100 + s);
    Vector<ModP> flat(jac.cols());
    Eigen::Index at = 0;
    for (const auto& m : dir.matrices) {
      for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) flat(at++) = m(a, b);
      }
    }
    CHECK(Vector<ModP>(jac * flat) == forward_tangent(arch, w, dir));
  }
}

TEST_CASE("dual powers satisfy the chain rule") {
  Rng rng(21);
  for (int r = 1; r <= 5; ++r) {
    const auto p = random_poly(3, 2, rng);
    const auto dp = random_poly(3, 2, rng);
    const auto t = poly_pow(TangentPoly<ModP>(p, dp), r);
    CHECK(t.value == poly_pow(p, r));
    const auto expect = r == 1 ? dp : ModP(r) * multiply(poly_pow(p, r - 1), dp);
    CHECK(t.tangent == expect);
  }
}

TEST_CASE("exact rank agrees with Gaussian elimination") {
  Rng rng(31);
  const ScopedModulus mod(7);  // small prime so that deficient matrices are common
  for (int t = 0; t < 200; ++t) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto cols = static_cast<Eigen::Index>(1 + rng.below(6));
    Matrix<ModP> m(rows, cols);
    for (Eigen::Index a = 0; a < rows; ++a) {
      for (Eigen::Index b = 0; b < cols; ++b) m(a, b) = rng.below(3) == 0 ? rng.residue() : ModP(0);
    }
    CHECK(rank(m) == oracle::rank(rows_of(m)));
  }
}

TEST_CASE("rational rank of a product of thin factors") {
  for (int k = 0; k <= 4; ++k) {
    Matrix<Rational> a(6, 4);
    Matrix<Rational> b(4, 5);
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) a(i, j) = j < k ? Rational((i + 1) * (j + 2) % 7 + i * i) : Rational(0);
    }
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) b(i, j) = Rational((i + 3) * (j * j + 1) % 11 - 5);
    }
    const Matrix<Rational> p = a * b;
    CHECK(rank(p) == oracle::rank(rows_of(p)));
  }
}

TEST_CASE("numerical rank of a constructed low-rank complex matrix") {
  Rng rng(41);
  for (int k = 1; k <= 4; ++k) {
    Matrix<Complex> u(7, k);
    Matrix<Complex> v(k, 6);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = Complex(rng.symmetric_unit(), rng.symmetric_unit());
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = Complex(rng.symmetric_unit(), rng.symmetric_unit());
    CHECK(rank(Matrix<Complex>(u * v)) == static_cast<std::size_t>(k));
  }
  CHECK(rank(Matrix<Complex>::Zero(3, 3)) == 0);
}

TEST_CASE("generic rank over the prime field and floats") {
  const Architecture arch({2, 2, 2}, 2);
  const auto fp = generic_rank(arch, ScalarField::prime_field(), 3, 0);
  CHECK(fp.rank == 6);
  CHECK(fp.per_trial_ranks.size() == 3);
  REQUIRE(fp.failure_bound.has_value());
  CHECK(*fp.failure_bound == doctest::Approx(6.0 * 2.0 / static_cast<double>(ModP::kMersenne61)));
  const auto fl = generic_rank(arch, ScalarField::complex_float(), 3, 0);
  CHECK(fl.rank == 6);
  CHECK_FALSE(fl.failure_bound.has_value());
  CHECK_THROWS_AS(generic_rank(arch, ScalarField::exact(), 3, 0), UnsupportedFieldError);
  CHECK(generic_rank(arch, ScalarField::prime_field(), 3, 9).per_trial_ranks ==
        generic_rank(arch, ScalarField::prime_field(), 3, 9).per_trial_ranks);
}

TEST_CASE("a different prime gives the same generic rank") {
  const Architecture arch({3, 2, 1}, 2);
  CHECK(generic_rank(arch, ScalarField::prime_field(1'000'000'007), 3, 4).rank == 5);
  CHECK(generic_rank(arch, ScalarField::prime_field(), 3, 4).rank == 5);
}

TEST_CASE("weight degree and failure bound") {
  CHECK(output_weight_degree(Architecture({2, 2, 2}, 2)) == 3);
  CHECK(output_weight_degree(Architecture({2, 2, 2, 2}, 3)) == 13);
  CHECK(output_weight_degree(Architecture({2, 2, 2}, 1)) == 2);
  CHECK(output_weight_degree(Architecture({2, 2}, 4)) == 1);
  CHECK(schwartz_zippel_bound(Architecture({2, 2}, 4), 101) == 0.0);
}
