#include "neurovariety/tickets.hpp"

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"

namespace nv {

std::uint64_t ns_bound(std::uint64_t k) {
  if (k < 2) throw UsageError("ns_bound needs k >= 2");
  return checked_mul(8, checked_mul(k - 1, k - 1)) - 1;
}

PolyFamily<ModP> reduce(const PolyFamily<Rational>& family) {
  std::vector<HomPoly<ModP>> out;
  out.reserve(family.size());
  for (const auto& p : family.polys()) out.push_back(nv::reduce(p));
  return PolyFamily<ModP>(std::move(out));
}

TicketReport<Rational> ticket_confirmed(const PolyFamily<Rational>& family, int m_max, std::uint64_t prime) {
  if (m_max < 1) throw UsageError("ticket needs m_max >= 1");
  TicketReport<ModP> fast;
  {
    const ScopedModulus modulus(prime);
    fast = ticket(reduce(family), m_max);
  }
  TicketReport<Rational> rep;
  rep.m_max = m_max;
  rep.field = ScalarField::prime_field(prime);
  rep.exact_confirmation = true;
  rep.pairwise_proportional = !pairwise_nonproportional(family);
  rep.skipped = fast.skipped;
  // Dependence over Q implies dependence mod p, so only flagged exponents
  // need the exact pass.
  for (int m : fast.members) {
    auto dep = powers_dependent(family, m);
    if (dep.dependent) {
      rep.members.push_back(m);
      rep.certificates.emplace(m, std::move(*dep.certificate));
    } else {
      rep.refuted_by_exact.push_back(m);
    }
  }
  detail::finish_ticket(rep, family.size());
  return rep;
}

PolyFamily<ModP> random_family(int k, int num_vars, int degree, Rng& rng) {
  if (k < 2) throw UsageError("random_family needs k >= 2");
  const auto size = static_cast<Eigen::Index>(basis_size(num_vars, degree));
  while (true) {
    std::vector<HomPoly<ModP>> polys;
    for (int j = 0; j < k; ++j) {
      Vector<ModP> c(size);
      for (Eigen::Index i = 0; i < size; ++i) c(i) = rng.residue();
      polys.emplace_back(num_vars, degree, std::move(c));
    }
    PolyFamily<ModP> family(std::move(polys));
    if (pairwise_nonproportional(family)) return family;
  }
}

PolyFamily<Rational> builtin_family() {
  auto lin = [](long a, long b) {
    const std::vector<Rational> c{Rational(a), Rational(b)};
    return HomPoly<Rational>::linear(c);
  };
  return PolyFamily<Rational>({lin(1, 0), lin(0, 1), lin(1, 1), lin(1, -1)});
}

}  // namespace nv
