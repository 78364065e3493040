#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "neurovariety/scalar.hpp"

namespace nv {

// Stable 64-bit mix of a master seed with a job key (FNV-1a over the key,
// finished with splitmix64). Used so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Deterministic sampler. Only the raw mt19937_64 stream is used (the standard
// distributions are implementation-defined), so draws are reproducible
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Uniform on [-1, 1].
  double symmetric_unit();
  // Uniform residue in the current prime field.
  ModP residue() { return ModP::from_residue(below(ModP::modulus())); }
  ModP nonzero_residue();
  // Uniform permutation of 0..n-1.
  std::vector<int> permutation(int n);

  template <typename Scalar>
  Scalar sample();

 private:
  std::mt19937_64 engine_;
};

template <>
inline ModP Rng::sample<ModP>() {
  return residue();
}

template <>
inline Complex Rng::sample<Complex>() {
  return Complex(symmetric_unit(), 0.0);
}

}  // namespace nv
