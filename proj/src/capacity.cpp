#include "neurovariety/capacity.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include "neurovariety/errors.hpp"

namespace nv {
namespace {

std::uint64_t initial_cap() {
  const char* env = std::getenv("NEUROVARIETY_CAP");
  if (env == nullptr || *env == '\0') return kDefaultCapacityCap;
  std::uint64_t value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return kDefaultCapacityCap;
  return value;
}

std::atomic<std::uint64_t>& cap_storage() {
  static std::atomic<std::uint64_t> cap{initial_cap()};
  return cap;
}

[[noreturn]] void overflow(const char* op) {
  throw CapacityError(std::string("integer overflow in ") + op);
}

}  // namespace

std::uint64_t capacity_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_capacity_cap(std::uint64_t cap) { cap_storage().store(cap, std::memory_order_relaxed); }

void require_within_cap(std::uint64_t size, std::string_view what) {
  const std::uint64_t cap = capacity_cap();
  if (size > cap) {
    throw CapacityError(std::string(what) + ": basis size " + std::to_string(size) +
                        " exceeds capacity cap " + std::to_string(cap));
  }
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) overflow("addition");
  return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) overflow("multiplication");
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  // Multiplicative formula; every intermediate is itself a binomial so the
  // division is exact. The product is formed in 128 bits.
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) overflow("binomial coefficient");
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace nv
