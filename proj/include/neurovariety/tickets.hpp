#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "neurovariety/hompoly.hpp"
#include "neurovariety/random.hpp"
#include "neurovariety/scalar.hpp"

namespace nv {

// k >= 2 polynomials sharing num_vars and degree.
template <typename Scalar>
  requires ExactScalar<Scalar>
class PolyFamily {
 public:
  explicit PolyFamily(std::vector<HomPoly<Scalar>> polys) : polys_(std::move(polys)) {
    if (polys_.size() < 2) throw UsageError("a polynomial family needs at least two members");
    for (const auto& p : polys_) polys_.front().require_same_shape(p);
  }

  const std::vector<HomPoly<Scalar>>& polys() const { return polys_; }
  std::size_t size() const { return polys_.size(); }
  int num_vars() const { return polys_.front().num_vars(); }
  int degree() const { return polys_.front().degree(); }

 private:
  std::vector<HomPoly<Scalar>> polys_;
};

// 8 (k - 1)^2 - 1: if k pairwise non-proportional polynomials have linearly
// dependent m-th powers then m is at most this.
std::uint64_t ns_bound(std::uint64_t k);

template <typename Scalar>
bool proportional(const HomPoly<Scalar>& a, const HomPoly<Scalar>& b) {
  a.require_same_shape(b);
  std::size_t s = 0;
  while (s < a.size() && FieldTraits<Scalar>::is_zero(a[s])) ++s;
  if (s == a.size()) return true;  // zero is proportional to everything
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (b[t] * a[s] != a[t] * b[s]) return false;
  }
  return true;
}

// True iff no pair of members has a rank-1 stacked coefficient matrix.
template <typename Scalar>
bool pairwise_nonproportional(const PolyFamily<Scalar>& family) {
  const auto& ps = family.polys();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (proportional(ps[i], ps[j])) return false;
    }
  }
  return true;
}

template <typename Scalar>
struct DependenceResult {
  bool dependent = false;
  // Nonzero alpha with sum_j alpha_j f_j^m = 0, scaled so its first nonzero
  // entry is 1.
  std::optional<Vector<Scalar>> certificate;
};

// sum_j alpha_j polys[j], checked to be the zero polynomial.
template <typename Scalar>
bool certificate_vanishes(const std::vector<HomPoly<Scalar>>& powers, const Vector<Scalar>& alpha) {
  std::vector<Scalar> row(alpha.data(), alpha.data() + alpha.size());
  return linear_combination(powers, row).is_zero();
}

// Stacks f_j^m as rows and eliminates while tracking row combinations; the
// first row that reduces to zero yields the certificate.
template <typename Scalar>
DependenceResult<Scalar> powers_dependent(const PolyFamily<Scalar>& family, int m) {
  if (m < 1) throw UsageError("powers_dependent needs m >= 1");
  const std::size_t k = family.size();
  std::vector<HomPoly<Scalar>> powers;
  powers.reserve(k);
  for (const auto& f : family.polys()) powers.push_back(poly_pow(f, m));

  const auto cols = static_cast<Eigen::Index>(powers.front().size());
  std::vector<Vector<Scalar>> basis_rows;
  std::vector<Vector<Scalar>> basis_combos;
  std::vector<Eigen::Index> pivots;
  DependenceResult<Scalar> out;
  for (std::size_t j = 0; j < k; ++j) {
    Vector<Scalar> row = powers[j].coeffs();
    Vector<Scalar> combo = Vector<Scalar>::Zero(static_cast<Eigen::Index>(k));
    combo(static_cast<Eigen::Index>(j)) = Scalar(1);
    for (std::size_t b = 0; b < basis_rows.size(); ++b) {
      const Scalar factor = row(pivots[b]);
      if (FieldTraits<Scalar>::is_zero(factor)) continue;
      row -= basis_rows[b] * factor;
      combo -= basis_combos[b] * factor;
    }
    Eigen::Index pivot = -1;
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!FieldTraits<Scalar>::is_zero(row(c))) {
        pivot = c;
        break;
      }
    }
    if (pivot < 0) {
      Eigen::Index lead = 0;
      while (FieldTraits<Scalar>::is_zero(combo(lead))) ++lead;
      const Scalar inv = FieldTraits<Scalar>::inverse(combo(lead));
      combo *= inv;
      if (!certificate_vanishes(powers, combo)) {
        throw std::logic_error("dependence certificate failed to verify");
      }
      out.dependent = true;
      out.certificate = std::move(combo);
      return out;
    }
    const Scalar inv = FieldTraits<Scalar>::inverse(row(pivot));
    row *= inv;
    combo *= inv;
    basis_rows.push_back(std::move(row));
    basis_combos.push_back(std::move(combo));
    pivots.push_back(pivot);
  }
  return out;
}

template <typename Scalar>
struct TicketReport {
  int m_max = 0;
  std::vector<int> members;
  std::map<int, Vector<Scalar>> certificates;
  bool pairwise_proportional = false;
  std::uint64_t ns_bound = 0;
  // Disabled for families with a proportional pair.
  bool bound_check_enabled = true;
  // Members above ns_bound on a non-proportional family: counterexample
  // candidates, reported rather than dropped.
  std::vector<int> bound_violations;
  std::vector<std::pair<int, std::string>> skipped;  // (m, reason)
  ScalarField field;
  // Set when members were confirmed over the rationals after a prime pass.
  bool exact_confirmation = false;
  // Exponents the prime pass flagged but exact arithmetic refuted.
  std::vector<int> refuted_by_exact;
};

template <typename Scalar>
ScalarField field_of() {
  if constexpr (std::is_same_v<Scalar, ModP>) {
    return ScalarField::prime_field(ModP::modulus());
  } else {
    return ScalarField::exact();
  }
}

namespace detail {

template <typename Scalar>
void finish_ticket(TicketReport<Scalar>& rep, std::size_t k) {
  rep.ns_bound = ns_bound(k);
  rep.bound_check_enabled = !rep.pairwise_proportional;
  if (rep.bound_check_enabled) {
    for (int m : rep.members) {
      if (static_cast<std::uint64_t>(m) > rep.ns_bound) rep.bound_violations.push_back(m);
    }
  }
}

}  // namespace detail

// T(F) restricted to [1, m_max]. Capacity failures are recorded per m.
template <typename Scalar>
TicketReport<Scalar> ticket(const PolyFamily<Scalar>& family, int m_max) {
  if (m_max < 1) throw UsageError("ticket needs m_max >= 1");
  TicketReport<Scalar> rep;
  rep.m_max = m_max;
  rep.field = field_of<Scalar>();
  rep.pairwise_proportional = !pairwise_nonproportional(family);
  for (int m = 1; m <= m_max; ++m) {
    try {
      auto dep = powers_dependent(family, m);
      if (dep.dependent) {
        rep.members.push_back(m);
        rep.certificates.emplace(m, std::move(*dep.certificate));
      }
    } catch (const CapacityError& e) {
      rep.skipped.emplace_back(m, e.what());
    }
  }
  detail::finish_ticket(rep, family.size());
  return rep;
}

PolyFamily<ModP> reduce(const PolyFamily<Rational>& family);

// Prime-field sweep over m = 1..m_max followed by an exact rational pass on
// the flagged exponents only; certificates are exact. Runs under `prime`.
TicketReport<Rational> ticket_confirmed(const PolyFamily<Rational>& family, int m_max,
                                        std::uint64_t prime = ModP::kMersenne61);

// k random pairwise non-proportional forms of the given degree over the
// current prime field.
PolyFamily<ModP> random_family(int k, int num_vars, int degree, Rng& rng);

// {x, y, x + y, x - y}.
PolyFamily<Rational> builtin_family();

}  // namespace nv
