#include <doctest.h>

#include <complex>
#include <numbers>

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"
#include "neurovariety/hompoly.hpp"
#include "neurovariety/random.hpp"
#include "oracles.hpp"

using namespace nv;

namespace {

template <typename S>
HomPoly<S> from_sparse(const oracle::Sparse<S>& p, int n, int D) {
  const auto c = oracle::dense(p, n, D);
  Vector<S> v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
  return HomPoly<S>(n, D, v);
}

HomPoly<ModP> random_poly(int n, int D, Rng& rng) {
  HomPoly<ModP> p(n, D);
  Vector<ModP> c(static_cast<Eigen::Index>(p.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.residue();
  return HomPoly<ModP>(n, D, c);
}

oracle::Sparse<ModP> to_sparse(const HomPoly<ModP>& p) {
  oracle::Sparse<ModP> out;
  const auto basis = oracle::monomials(p.num_vars(), p.degree());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_zero()) out[basis[i]] = p[i];
  }
  return out;
}

}  // namespace

TEST_CASE("monomial order matches an independent enumeration") {
  for (int n = 1; n <= 4; ++n) {
    for (int D = 0; D <= 5; ++D) {
      const MonomialIndexer idx(n, D);
      const auto basis = oracle::monomials(n, D);
      REQUIRE(idx.size() == basis.size());
      const auto table = idx.exponent_table();
      for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(idx.rank(basis[i]) == i);
        CHECK(idx.unrank(i) == basis[i]);
        for (int v = 0; v < n; ++v) CHECK(table[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)] == basis[i][static_cast<std::size_t>(v)]);
      }
    }
  }
}

TEST_CASE("two-variable quadric basis is x^2, xy, y^2") {
  const MonomialIndexer idx(2, 2);
  CHECK(idx.unrank(0) == Exponents{2, 0});
  CHECK(idx.unrank(1) == Exponents{1, 1});
  CHECK(idx.unrank(2) == Exponents{0, 2});
}

TEST_CASE("monomial indexer rejects bad exponents") {
  const MonomialIndexer idx(3, 2);
  CHECK_THROWS_AS(idx.rank(Exponents{1, 1, 1}), DegreeMismatchError);
  CHECK_THROWS_AS(idx.rank(Exponents{1, 1}), ShapeError);
  CHECK_THROWS_AS(idx.rank(Exponents{3, -1, 0}), ShapeError);
  CHECK_THROWS_AS(idx.unrank(idx.size()), ShapeError);
}

TEST_CASE("basis size") {
  CHECK(basis_size(3, 4) == 15);
  CHECK(basis_size(2, 2) == 3);
  CHECK(basis_size(5, 0) == 1);
  CHECK_THROWS_AS(basis_size(200, 200), CapacityError);
}

TEST_CASE("capacity cap is enforced and restorable") {
  const std::uint64_t before = capacity_cap();
  {
    const ScopedCapacityCap cap(9);
    CHECK_NOTHROW(HomPoly<ModP>(3, 2));                   // 6 coefficients
    CHECK_THROWS_AS(HomPoly<ModP>(3, 3), CapacityError);  // 10 coefficients
  }
  CHECK(capacity_cap() == before);
}

TEST_CASE("prime field arithmetic") {
  const ModP a(5);
  const ModP b(-3);
  CHECK((a + b).residue() == 2);
  CHECK(b.residue() == ModP::kMersenne61 - 3);
  CHECK((a * a.inverse()).residue() == 1);
  CHECK(ModP(2).pow(61).residue() == 1);  // 2^61 = 1 mod 2^61 - 1
  CHECK_THROWS_AS(ModP(0).inverse(), std::domain_error);

  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const ModP x = rng.residue();
    const ModP y = rng.residue();
    const ModP z = rng.residue();
    CHECK(x * (y + z) == x * y + x * z);
    CHECK((x - y) + y == x);
    if (!x.is_zero()) CHECK(x * x.inverse() == ModP(1));
  }
}

TEST_CASE("a small modulus uses the generic reduction") {
  const ScopedModulus mod(101);
  CHECK(ModP::modulus() == 101);
  CHECK((ModP(50) * ModP(3)).residue() == 150 % 101);
  CHECK((ModP(7) / ModP(7)).residue() == 1);
  CHECK_THROWS_AS(ScopedModulus(100), UsageError);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("12") == Rational(12));
  CHECK(parse_rational("-3/4") == Rational(-3) / 4);
  CHECK(parse_rational("0.125") == Rational(1) / 8);
  CHECK(parse_rational("010") == Rational(10));
  CHECK(parse_rational("-0.5") == Rational(-1) / 2);
  CHECK_THROWS_AS(parse_rational("abc"), UsageError);
  CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
}

TEST_CASE("multiply matches sparse convolution") {
  Rng rng(11);
  for (int n = 1; n <= 3; ++n) {
    for (int da = 0; da <= 3; ++da) {
      for (int db = 0; db <= 2; ++db) {
        const auto a = random_poly(n, da, rng);
        const auto b = random_poly(n, db, rng);
        const auto expect = from_sparse(oracle::mul(to_sparse(a), to_sparse(b)), n, da + db);
        CHECK(multiply(a, b) == expect);
        CHECK(multiply(a, b) == multiply(b, a));
      }
    }
  }
}

TEST_CASE("multiplication is associative and distributive") {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_poly(3, 2, rng);
    const auto b = random_poly(3, 1, rng);
    const auto c = random_poly(3, 1, rng);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    CHECK(multiply(a, b + c) == multiply(a, b) + multiply(a, c));
  }
}

TEST_CASE("poly_pow agrees with repeated multiplication") {
  Rng rng(13);
  for (int r = 1; r <= 6; ++r) {
    const auto p = random_poly(3, 2, rng);
    HomPoly<ModP> acc = p;
    for (int k = 1; k < r; ++k) acc = multiply(acc, p);
    CHECK(poly_pow(p, r) == acc);
  }
  CHECK_THROWS_AS(poly_pow(random_poly(2, 1, rng), 0), UsageError);
}

TEST_CASE("shape mismatches are rejected") {
  const HomPoly<ModP> a(2, 2);
  const HomPoly<ModP> b(3, 2);
  const HomPoly<ModP> c(2, 3);
  CHECK_THROWS_AS(a + b, ShapeError);
  CHECK_THROWS_AS(a + c, ShapeError);
  CHECK_THROWS_AS(multiply(a, b), ShapeError);
  CHECK_THROWS_AS(HomPoly<ModP>(2, 2, Vector<ModP>::Zero(4)), ShapeError);
  const std::vector<HomPoly<ModP>> ps{a, a};
  CHECK_THROWS_AS(linear_combination(ps, std::vector<ModP>{ModP(1)}), ShapeError);
}

TEST_CASE("linear combination") {
  const std::vector<int> e1{1, 0};
  const std::vector<int> e2{0, 1};
  const std::vector<Rational> x{1, 0};
  const std::vector<Rational> y{0, 1};
  const auto px = HomPoly<Rational>::linear(x);
  const auto py = HomPoly<Rational>::linear(y);
  const auto s = linear_combination(std::vector{px, py}, std::vector<Rational>{2, -3});
  CHECK(s.coeff(e1) == 2);
  CHECK(s.coeff(e2) == -3);
}

TEST_CASE("evaluation is a ring homomorphism") {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_poly(3, 2, rng);
    const auto b = random_poly(3, 3, rng);
    const std::vector<ModP> pt{rng.residue(), rng.residue(), rng.residue()};
    CHECK(evaluate<ModP>(multiply(a, b), pt) == evaluate<ModP>(a, pt) * evaluate<ModP>(b, pt));
  }
}

TEST_CASE("restriction to a line agrees with pointwise evaluation") {
  Rng rng(15);
  const auto p = random_poly(3, 3, rng);
  const std::vector<ModP> base{rng.residue(), rng.residue(), rng.residue()};
  const std::vector<ModP> dir{rng.residue(), rng.residue(), rng.residue()};
  const auto q = restrict_to_line<ModP>(p, base, dir);
  for (int t = 0; t < 6; ++t) {
    std::vector<ModP> pt(3);
    for (int v = 0; v < 3; ++v) pt[static_cast<std::size_t>(v)] = base[static_cast<std::size_t>(v)] + ModP(t) * dir[static_cast<std::size_t>(v)];
    ModP qt(0);
    ModP tp(1);
    for (Eigen::Index i = 0; i < q.coeffs().size(); ++i) {
      qt += q.coeffs()(i) * tp;
      tp *= ModP(t);
    }
    CHECK(qt == evaluate<ModP>(p, pt));
  }
}

TEST_CASE("powers summed over roots of unity keep only the pure terms") {
  // sum_k (x + zeta^k y)^m = m x^m + m y^m for a primitive m-th root zeta.
  const int m = 3;
  const std::complex<double> zeta = std::polar(1.0, 2.0 * std::numbers::pi / m);
  HomPoly<Complex> sum(2, m);
  for (int k = 0; k < m; ++k) {
    const std::vector<Complex> c{1.0, std::pow(zeta, k)};
    sum = sum + poly_pow(HomPoly<Complex>::linear(c), m);
  }
  CHECK(std::abs(sum.coeffs()(0) - Complex(m, 0)) < 1e-12);
  CHECK(std::abs(sum.coeffs()(1)) < 1e-12);
  CHECK(std::abs(sum.coeffs()(2)) < 1e-12);
  CHECK(std::abs(sum.coeffs()(3) - Complex(m, 0)) < 1e-12);
}

TEST_CASE("reduction mod p commutes with arithmetic") {
  const auto p = HomPoly<Rational>::from_terms(2, 2, {{Rational(1) / 3, {2, 0}}, {Rational(-5, 7), {1, 1}}});
  const auto q = HomPoly<Rational>::from_terms(2, 1, {{Rational(2), {1, 0}}, {Rational(3, 2), {0, 1}}});
  CHECK(reduce(multiply(p, q)) == multiply(reduce(p), reduce(q)));
  CHECK(reduce(poly_pow(p, 3)) == poly_pow(reduce(p), 3));
}

TEST_CASE("seed derivation is stable and key sensitive") {
  CHECK(derive_seed(0, "dim|2,2,2|r=2") == derive_seed(0, "dim|2,2,2|r=2"));
  CHECK(derive_seed(0, "dim|2,2,2|r=2") != derive_seed(0, "dim|2,2,2|r=3"));
  CHECK(derive_seed(1, "dim|2,2,2|r=2") != derive_seed(0, "dim|2,2,2|r=2"));
  CHECK(derive_seed(5, std::uint64_t{0}) != derive_seed(5, std::uint64_t{1}));
  Rng a(3);
  Rng b(3);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng c(9);
  for (int i = 0; i < 100; ++i) {
    const double u = c.symmetric_unit();
    CHECK(u >= -1.0);
    CHECK(u <= 1.0);
    CHECK(c.below(7) < 7);
  }
  auto perm = c.permutation(6);
  std::sort(perm.begin(), perm.end());
  CHECK(perm == std::vector<int>{0, 1, 2, 3, 4, 5});
}
