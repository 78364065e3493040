#include "neurovariety/geometry.hpp"

#include <chrono>
#include <cmath>

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"

namespace nv {

std::string to_string(EdimBranch branch) {
  return branch == EdimBranch::ParameterCount ? "ParameterCount" : "AmbientSpace";
}

ExpectedDimension edim(const Architecture& arch) {
  ExpectedDimension out;
  std::uint64_t side = static_cast<std::uint64_t>(arch.output_width());
  for (int i = 0; i < arch.depth(); ++i) {
    const auto d_i = static_cast<std::uint64_t>(arch.width(i));
    const auto d_next = static_cast<std::uint64_t>(arch.width(i + 1));
    // d_i d_{i+1} - d_{i+1} = (d_i - 1) d_{i+1} >= 0
    side = checked_add(side, checked_mul(d_i - 1, d_next));
  }
  out.parameter_side = side;
  out.ambient_side = ambient_count(arch);
  if (out.parameter_side <= out.ambient_side) {
    out.value = out.parameter_side;
    out.branch = EdimBranch::ParameterCount;
  } else {
    out.value = out.ambient_side;
    out.branch = EdimBranch::AmbientSpace;
  }
  return out;
}

std::string job_key(const std::string& kind, const Architecture& arch) {
  return kind + "|" + arch.to_string() + "|r=" + std::to_string(arch.activation_degree());
}

DimensionReport dimension(const Architecture& arch, const DimensionOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  DimensionReport rep{.arch = arch, .field = opts.field, .seed = opts.seed, .trials = opts.trials};
  rep.params = param_count(arch);
  rep.ambient = ambient_dim(arch);
  rep.expected = edim(arch);
  rep.rank = generic_rank(arch, opts.field, opts.trials, derive_seed(opts.seed, job_key("dim", arch)));
  rep.dim = rep.rank.rank;
  rep.defect = static_cast<std::int64_t>(rep.expected.value) - static_cast<std::int64_t>(rep.dim);
  rep.fiber_dim = static_cast<std::int64_t>(rep.params) - static_cast<std::int64_t>(rep.dim);
  rep.hidden_width_sum = arch.hidden_width_sum();
  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::uint64_t threshold_bound(const Architecture& arch) {
  if (arch.depth() == 1) return 0;
  int widest = 0;
  for (int i = 1; i < arch.depth(); ++i) widest = std::max(widest, arch.width(i));
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(widest) - 1;
  return checked_mul(8, checked_mul(base, base)) - 1;
}

ThresholdReport threshold_probe(const Architecture& arch, int r_max, const DimensionOptions& opts) {
  if (r_max < 1) throw UsageError("threshold probe needs r_max >= 1");
  ThresholdReport rep{.arch = arch, .r_max = r_max};
  rep.theoretical_bound = threshold_bound(arch);
  rep.width_hypothesis_met = arch.widths_exceed_one();
  rep.field = opts.field;
  rep.seed = opts.seed;
  rep.trials = opts.trials;
  bool contiguous = true;
  for (int r = 1; r <= r_max; ++r) {
    DegreeOutcome outcome;
    outcome.degree = r;
    try {
      outcome.report = dimension(arch.with_degree(r), opts);
      if (outcome.report->defect > 0) rep.deficient_degrees.push_back(r);
      if (contiguous) rep.verified_up_to = r;
    } catch (const CapacityError& e) {
      outcome.skipped_reason = e.what();
      contiguous = false;
    }
    rep.degrees.push_back(std::move(outcome));
  }
  rep.estimated_threshold = rep.deficient_degrees.empty() ? 0 : rep.deficient_degrees.back();
  return rep;
}

HomogeneityCheckResult homogeneity_check(const Architecture& arch, std::uint64_t seed, int trials,
                                         bool omit_inverse_scaling, std::uint64_t prime) {
  if (arch.depth() < 2) throw UsageError("homogeneity check needs a hidden layer (L >= 2)");
  if (trials < 1) throw UsageError("homogeneity check needs at least one trial");
  const ScopedModulus modulus(prime);
  HomogeneityCheckResult result;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    const WeightSet<ModP> w = random_weights<ModP>(arch, trial_seed);
    Rng rng(derive_seed(trial_seed, "homogeneity"));
    const Homogeneity<ModP> h = random_homogeneity(arch, rng);
    const WeightSet<ModP> moved =
        detail::apply_homogeneity_impl(w, h, arch.activation_degree(), !omit_inverse_scaling);
    result.trials_run = t + 1;
    if (vectorize(forward(arch, w)) != vectorize(forward(arch, moved))) {
      result.passed = false;
      result.failing_seed = trial_seed;
      break;
    }
  }
  return result;
}

FiberCheck fiber_check(const Architecture& arch, const DimensionOptions& opts) {
  FiberCheck out{.report = dimension(arch, opts)};
  out.lower_bound = arch.hidden_width_sum();
  out.passed = out.report.fiber_dim >= static_cast<std::int64_t>(out.lower_bound);
  return out;
}

bool numerically_singular(const Matrix<Complex>& m) {
  const Eigen::JacobiSVD<Matrix<Complex>> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return true;
  return sv(sv.size() - 1) < kSingularityTolerance * sv(0);
}

Vector<Complex> evaluate_network(const Architecture& arch, const WeightSet<Complex>& w, const Vector<Complex>& x,
                                 bool magnitudes) {
  check_shapes(arch, w);
  Vector<Complex> a = magnitudes ? Vector<Complex>(x.cwiseAbs().cast<Complex>()) : x;
  for (int i = 1; i <= arch.depth(); ++i) {
    const Matrix<Complex>& W = w[static_cast<std::size_t>(i - 1)];
    Vector<Complex> q = magnitudes ? Vector<Complex>(W.cwiseAbs().cast<Complex>() * a) : Vector<Complex>(W * a);
    if (i < arch.depth()) {
      for (Eigen::Index j = 0; j < q.size(); ++j) {
        Complex p(1.0, 0.0);
        for (int k = 0; k < arch.activation_degree(); ++k) p *= q(j);
        q(j) = p;
      }
    }
    a = std::move(q);
  }
  return a;
}

std::optional<ZeroWitness> zero_witness(const Architecture& arch, const WeightSet<Complex>& w) {
  if (!arch.is_equi_width()) throw UsageError("zero witness needs an equi-width architecture");
  check_shapes(arch, w);
  const int r = arch.activation_degree();

  int singular = 0;
  for (int i = 1; i <= arch.depth(); ++i) {
    if (numerically_singular(w[static_cast<std::size_t>(i - 1)])) {
      singular = i;
      break;
    }
  }
  if (singular == 0) return std::nullopt;

  const Eigen::JacobiSVD<Matrix<Complex>> svd(w[static_cast<std::size_t>(singular - 1)], Eigen::ComputeFullV);
  Vector<Complex> target = svd.matrixV().col(svd.matrixV().cols() - 1);
  // Scale so the first entry of largest magnitude is 1.
  const double biggest = target.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < target.size(); ++k) {
    if (std::abs(target(k)) >= (1.0 - 1e-12) * biggest) {
      const Complex pivot = target(k);
      target /= pivot;
      break;
    }
  }

  // Pull back through layers singular-1, ..., 1: undo the activation with
  // principal r-th roots, then solve against the invertible W_j.
  for (int j = singular - 1; j >= 1; --j) {
    for (Eigen::Index k = 0; k < target.size(); ++k) {
      // +0.0 folds negative zeros so the principal branch is taken.
      const Complex z(target(k).real() + 0.0, target(k).imag() + 0.0);
      target(k) = z == Complex(0.0, 0.0) ? z : std::pow(z, 1.0 / static_cast<double>(r));
    }
    const Matrix<Complex>& W = w[static_cast<std::size_t>(j - 1)];
    const Eigen::JacobiSVD<Matrix<Complex>> solver(W, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = solver.singularValues();
    const double cond = sv(sv.size() - 1) == 0.0 ? INFINITY : sv(0) / sv(sv.size() - 1);
    if (cond > kMaxConditionNumber) {
      throw ConditioningError("W_" + std::to_string(j) + " has condition number " + std::to_string(cond));
    }
    target = solver.solve(target);
  }

  ZeroWitness out;
  out.point = target;
  out.singular_layer_index = singular;
  out.residual = evaluate_network(arch, w, out.point).cwiseAbs().maxCoeff();
  out.scale = std::max(1.0, evaluate_network(arch, w, out.point, true).cwiseAbs().maxCoeff());
  if (!(out.residual < kWitnessTolerance * out.scale)) {
    throw ConditioningError("zero witness residual " + std::to_string(out.residual) + " exceeds tolerance");
  }
  return out;
}

}  // namespace nv
