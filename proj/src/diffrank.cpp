#include "neurovariety/diffrank.hpp"

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"
#include "neurovariety/random.hpp"

namespace nv {

std::uint64_t output_weight_degree(const Architecture& arch) {
  const auto L = static_cast<std::uint64_t>(arch.depth());
  const auto r = static_cast<std::uint64_t>(arch.activation_degree());
  if (L == 1) return 1;
  if (r == 1) return L;
  // 1 + r + ... + r^{L-1}
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  for (std::uint64_t i = 0; i < L; ++i) {
    total = checked_add(total, term);
    if (i + 1 < L) term = checked_mul(term, r);
  }
  return total;
}

double schwartz_zippel_bound(const Architecture& arch, std::uint64_t prime) {
  const std::uint64_t m = std::min(param_count(arch), ambient_count(arch));
  const double entry_degree = static_cast<double>(output_weight_degree(arch) - 1);
  return static_cast<double>(m) * entry_degree / static_cast<double>(prime);
}

namespace {

template <typename Scalar>
void run_trials(const Architecture& arch, RankResult& result) {
  const std::size_t cap = static_cast<std::size_t>(std::min(param_count(arch), ambient_dim(arch)));
  for (int t = 0; t < result.trials; ++t) {
    const WeightSet<Scalar> w = random_weights<Scalar>(arch, derive_seed(result.seed, static_cast<std::uint64_t>(t)));
    const std::size_t r = rank(jacobian(arch, w));
    result.per_trial_ranks.push_back(std::min(r, cap));
  }
}

}  // namespace

RankResult generic_rank(const Architecture& arch, const ScalarField& field, int trials, std::uint64_t seed) {
  if (trials < 1) throw UsageError("generic_rank needs at least one trial");
  RankResult result;
  result.trials = trials;
  result.field = field;
  result.seed = seed;
  switch (field.kind) {
    case FieldKind::PrimeField: {
      const ScopedModulus modulus(field.prime);
      run_trials<ModP>(arch, result);
      result.failure_bound = schwartz_zippel_bound(arch, field.prime);
      break;
    }
    case FieldKind::ComplexFloat:
      run_trials<Complex>(arch, result);
      break;
    case FieldKind::ExactRational:
      throw UnsupportedFieldError("generic rank is sampled over a prime field or complex floats, not exact rationals");
  }
  result.rank = *std::max_element(result.per_trial_ranks.begin(), result.per_trial_ranks.end());
  return result;
}

}  // namespace nv
