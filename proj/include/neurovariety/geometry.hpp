#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neurovariety/diffrank.hpp"
#include "neurovariety/network.hpp"
#include "neurovariety/scalar.hpp"

namespace nv {

enum class EdimBranch { ParameterCount, AmbientSpace };

std::string to_string(EdimBranch branch);

// min{ d_L + sum_i (d_i d_{i+1} - d_{i+1}),  d_L C(d_0 + r^{L-1} - 1, r^{L-1}) }
// with the side that attains the minimum (ParameterCount on ties).
struct ExpectedDimension {
  std::uint64_t value = 0;
  EdimBranch branch = EdimBranch::ParameterCount;
  std::uint64_t parameter_side = 0;
  std::uint64_t ambient_side = 0;
};

ExpectedDimension edim(const Architecture& arch);

struct DimensionOptions {
  ScalarField field = ScalarField::prime_field();
  int trials = 3;
  std::uint64_t seed = 0;
};

struct DimensionReport {
  Architecture arch;
  ScalarField field;
  std::uint64_t seed = 0;  // master seed as supplied
  int trials = 0;
  std::uint64_t params = 0;
  std::uint64_t ambient = 0;
  RankResult rank;
  std::uint64_t dim = 0;
  ExpectedDimension expected;
  std::int64_t defect = 0;     // edim - dim
  std::int64_t fiber_dim = 0;  // params - dim
  std::uint64_t hidden_width_sum = 0;
  std::optional<double> elapsed_ms;

  int degree() const { return arch.activation_degree(); }
};

// Canonical job key "<kind>|<arch>|r=<degree>" used for per-job seeds and
// the result store.
std::string job_key(const std::string& kind, const Architecture& arch);

// dim V = generic Jacobian rank. The trial seeds are derived from
// opts.seed and job_key("dim", arch), so the same (seed, arch, degree) gives
// the same answer whether it runs alone or inside a sweep.
DimensionReport dimension(const Architecture& arch, const DimensionOptions& opts);

// 8 (2 max{d_1..d_{L-1}} - 1)^2 - 1; zero when L = 1.
std::uint64_t threshold_bound(const Architecture& arch);

struct DegreeOutcome {
  int degree = 0;
  std::optional<DimensionReport> report;
  std::optional<std::string> skipped_reason;
};

struct ThresholdReport {
  Architecture arch;
  int r_max = 0;
  std::vector<DegreeOutcome> degrees;
  std::vector<int> deficient_degrees;
  int estimated_threshold = 0;
  std::uint64_t theoretical_bound = 0;
  // Largest r such that every degree 1..r produced a report.
  int verified_up_to = 0;
  bool width_hypothesis_met = false;
  ScalarField field;
  std::uint64_t seed = 0;
  int trials = 0;
};

// Runs dimension() for r = 1..r_max. Capacity failures are recorded per
// degree and do not stop the sweep. The estimate only speaks for the probed
// range.
ThresholdReport threshold_probe(const Architecture& arch, int r_max, const DimensionOptions& opts);

struct HomogeneityCheckResult {
  bool passed = true;
  int trials_run = 0;
  std::optional<std::uint64_t> failing_seed;
};

// For each trial samples w and a random group element (D, P) over the prime
// field, then compares vectorized outputs exactly. `omit_inverse_scaling`
// drops the D^{-r} compensation and serves as a negative control.
HomogeneityCheckResult homogeneity_check(const Architecture& arch, std::uint64_t seed, int trials,
                                         bool omit_inverse_scaling = false,
                                         std::uint64_t prime = ModP::kMersenne61);

struct FiberCheck {
  DimensionReport report;
  std::uint64_t lower_bound = 0;  // sum of hidden widths
  bool passed = false;
};

FiberCheck fiber_check(const Architecture& arch, const DimensionOptions& opts);

struct ZeroWitness {
  Vector<Complex> point;
  double residual = 0.0;  // max_i |p_i(point)|
  double scale = 0.0;     // the same evaluation with all entries replaced by magnitudes
  int singular_layer_index = 0;  // 1-based
};

inline constexpr double kSingularityTolerance = 1e-8;
inline constexpr double kWitnessTolerance = 1e-6;
inline constexpr double kMaxConditionNumber = 1e10;

// Smallest singular value below 1e-8 times the largest.
bool numerically_singular(const Matrix<Complex>& m);

// Evaluates the network at a point; `magnitudes` replaces every weight and
// coordinate by its absolute value.
Vector<Complex> evaluate_network(const Architecture& arch, const WeightSet<Complex>& w, const Vector<Complex>& x,
                                 bool magnitudes = false);

// For an equi-width network: a nonzero x with p_w(x) = 0 when some W_i is
// numerically singular, otherwise nullopt. Raises ConditioningError when an
// intermediate solve has condition number above 1e10 or the witness fails
// its residual check.
std::optional<ZeroWitness> zero_witness(const Architecture& arch, const WeightSet<Complex>& w);

}  // namespace nv
