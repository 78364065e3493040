#include <doctest.h>

#include "neurovariety/errors.hpp"
#include "neurovariety/tickets.hpp"
#include "oracles.hpp"

using namespace nv;

namespace {

HomPoly<Rational> lin(std::initializer_list<int> c) {
  std::vector<Rational> v;
  for (int x : c) v.emplace_back(x);
  return HomPoly<Rational>::linear(v);
}

oracle::Sparse<Rational> to_sparse(const HomPoly<Rational>& p) {
  oracle::Sparse<Rational> out;
  const auto basis = oracle::monomials(p.num_vars(), p.degree());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_zero()) out[basis[i]] = p[i];
  }
  return out;
}

// Brute-force dependence: rank of the stacked power coefficients < k.
bool oracle_dependent(const std::vector<HomPoly<Rational>>& fam, int m) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& p : fam) {
    rows.push_back(oracle::dense(oracle::pow(to_sparse(p), m, p.num_vars()), p.num_vars(), p.degree() * m));
  }
  return oracle::rank(rows) < fam.size();
}

}  // namespace

TEST_CASE("ns bound") {
  CHECK(ns_bound(2) == 7);
  CHECK(ns_bound(3) == 31);
  CHECK(ns_bound(4) == 71);
  CHECK_THROWS_AS(ns_bound(1), UsageError);
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(PolyFamily<Rational>({lin({1, 0})}), UsageError);
  CHECK_THROWS_AS(PolyFamily<Rational>({lin({1, 0}), lin({1, 0, 0})}), ShapeError);
}

TEST_CASE("pairwise proportionality") {
  CHECK(pairwise_nonproportional(PolyFamily<Rational>({lin({1, 0}), lin({0, 1})})));
  CHECK_FALSE(pairwise_nonproportional(PolyFamily<Rational>({lin({1, 0}), lin({2, 0})})));
  CHECK_FALSE(pairwise_nonproportional(PolyFamily<Rational>({lin({1, 1}), lin({2, 2}), lin({1, -1})})));
}

TEST_CASE("dependence of powers with certificates") {
  const PolyFamily<Rational> three({lin({1, 0}), lin({0, 1}), lin({1, 1})});
  const auto d1 = powers_dependent(three, 1);
  REQUIRE(d1.dependent);
  CHECK(*d1.certificate == Vector<Rational>((Vector<Rational>(3) << 1, 1, -1).finished()));
  CHECK_FALSE(powers_dependent(three, 2).dependent);

  const auto d2 = powers_dependent(builtin_family(), 2);
  REQUIRE(d2.dependent);
  const Vector<Rational>& a = *d2.certificate;
  // proportional to (-2, -2, 1, 1), normalized to a leading 1
  CHECK(a(0) == 1);
  CHECK(a(1) == 1);
  CHECK(a(2) == Rational(-1) / 2);
  CHECK(a(3) == Rational(-1) / 2);
}

TEST_CASE("ticket of the builtin family") {
  const auto rep = ticket(builtin_family(), 5);
  CHECK(rep.members == std::vector<int>{1, 2});
  CHECK(rep.ns_bound == 71);
  CHECK(rep.bound_check_enabled);
  CHECK(rep.bound_violations.empty());
  const auto family = builtin_family();
  const auto& polys = family.polys();
  for (const auto& [m, alpha] : rep.certificates) {
    HomPoly<Rational> sum(2, m);
    for (std::size_t j = 0; j < polys.size(); ++j) sum = sum + alpha(static_cast<Eigen::Index>(j)) * poly_pow(polys[j], m);
    CHECK(sum.is_zero());
  }
}

TEST_CASE("confirmed ticket matches the exact ticket") {
  const auto exact = ticket(builtin_family(), 5);
  const auto conf = ticket_confirmed(builtin_family(), 5);
  CHECK(conf.members == exact.members);
  CHECK(conf.exact_confirmation);
  CHECK(conf.refuted_by_exact.empty());
  for (const auto& [m, alpha] : exact.certificates) CHECK(conf.certificates.at(m) == alpha);
}

TEST_CASE("a small prime can flag spurious members that exact arithmetic refutes") {
  // x, y and x + 2y: the cubes are independent over Q (4 coefficients, 3
  // rows of full rank) but over F_2 the third form is x, so every power is
  // dependent there.
  const PolyFamily<Rational> fam({lin({1, 0}), lin({0, 1}), lin({1, 2})});
  const auto rep = ticket_confirmed(fam, 3, 2);
  CHECK(rep.members == std::vector<int>{1});
  CHECK(rep.refuted_by_exact == std::vector<int>{2, 3});
}

TEST_CASE("proportional families disable the bound check") {
  const auto rep = ticket(PolyFamily<Rational>({lin({1, 0}), lin({2, 0})}), 3);
  CHECK(rep.members == std::vector<int>{1, 2, 3});
  CHECK(rep.pairwise_proportional);
  CHECK_FALSE(rep.bound_check_enabled);
  CHECK(rep.bound_violations.empty());
}

TEST_CASE("distinct variables have an empty ticket") {
  CHECK(ticket(PolyFamily<Rational>({lin({1, 0}), lin({0, 1})}), 10).members.empty());
}

TEST_CASE("ticket agrees with brute force on small families") {
  const std::vector<std::vector<HomPoly<Rational>>> fams{
      {lin({1, 0}), lin({0, 1}), lin({1, 1})},
      {lin({1, 0}), lin({0, 1}), lin({1, 1}), lin({1, -1})},
      {lin({1, 0, 0}), lin({0, 1, 0}), lin({1, 1, 1}), lin({1, 2, 3})},
      {lin({1, 2}), lin({3, -1}), lin({2, 5})}};
  for (const auto& fam : fams) {
    const auto rep = ticket(PolyFamily<Rational>(fam), 5);
    std::vector<int> expect;
    for (int m = 1; m <= 5; ++m) {
      if (oracle_dependent(fam, m)) expect.push_back(m);
    }
    CHECK(rep.members == expect);
  }
}

TEST_CASE("adding a polynomial never shrinks the ticket") {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    std::vector<HomPoly<ModP>> polys;
    for (int j = 0; j < 4; ++j) {
      const std::vector<ModP> c{ModP(static_cast<std::int64_t>(rng.below(3))), ModP(static_cast<std::int64_t>(rng.below(3))) };
      polys.push_back(HomPoly<ModP>::linear(c));
    }
    if (polys[0].is_zero() || polys[1].is_zero() || polys[2].is_zero()) continue;
    const auto small = ticket(PolyFamily<ModP>({polys[0], polys[1], polys[2]}), 4);
    const auto big = ticket(PolyFamily<ModP>(polys), 4);
    for (int m : small.members) CHECK(std::find(big.members.begin(), big.members.end(), m) != big.members.end());
  }
}

TEST_CASE("certificates vanish on random lines") {
  const auto rep = ticket(builtin_family(), 5);
  const auto family = builtin_family();
  const auto& polys = family.polys();
  Rng rng(3);
  for (const auto& [m, alpha] : rep.certificates) {
    for (int t = 0; t < 5; ++t) {
      const std::vector<Rational> base{Rational(static_cast<int>(rng.below(19)) - 9), Rational(static_cast<int>(rng.below(19)) - 9)};
      const std::vector<Rational> dir{Rational(static_cast<int>(rng.below(19)) - 9), Rational(static_cast<int>(rng.below(19)) - 9)};
      UniPoly<Rational> sum;
      for (std::size_t j = 0; j < polys.size(); ++j) {
        const auto q = restrict_to_line<Rational>(poly_pow(polys[j], m), base, dir);
        sum = sum + UniPoly<Rational>(Vector<Rational>(q.coeffs() * alpha(static_cast<Eigen::Index>(j))));
      }
      CHECK(sum.is_zero());
    }
  }
}

TEST_CASE("random non-proportional families have empty tickets") {
  Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    const auto fam = random_family(3, 3, 2, rng);
    CHECK(pairwise_nonproportional(fam));
    const auto rep = ticket(fam, 6);
    CHECK(rep.members.empty());
  }
}

TEST_CASE("capacity failures are recorded per exponent") {
  const ScopedCapacityCap cap(5);
  const auto rep = ticket(builtin_family(), 6);
  CHECK(rep.members == std::vector<int>{1, 2});
  CHECK_FALSE(rep.skipped.empty());
  CHECK(rep.skipped.front().first == 5);
}
