#pragma once

#include <cstdint>
#include <string_view>

namespace nv {

inline constexpr std::uint64_t kDefaultCapacityCap = 5'000'000;

// Largest basis size (number of coefficients) any single operation may
// produce. Initialised from NEUROVARIETY_CAP when set, otherwise
// kDefaultCapacityCap.
std::uint64_t capacity_cap();
void set_capacity_cap(std::uint64_t cap);

// Throws CapacityError naming `what` if `size` exceeds the cap.
void require_within_cap(std::uint64_t size, std::string_view what);

// Checked arithmetic; overflow raises CapacityError.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp);
std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k);

// RAII override of the capacity cap, for tests and the CLI.
class ScopedCapacityCap {
 public:
  explicit ScopedCapacityCap(std::uint64_t cap) : saved_(capacity_cap()) { set_capacity_cap(cap); }
  ~ScopedCapacityCap() { set_capacity_cap(saved_); }
  ScopedCapacityCap(const ScopedCapacityCap&) = delete;
  ScopedCapacityCap& operator=(const ScopedCapacityCap&) = delete;

 private:
  std::uint64_t saved_;
};

}  // namespace nv
