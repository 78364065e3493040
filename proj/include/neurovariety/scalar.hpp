#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace nv {

// Element of Z/pZ. The modulus is a per-thread setting (as with NTL's ZZ_p
// contexts) so that ModP stays a plain 8-byte value usable as an Eigen
// scalar. Install a modulus with ScopedModulus; the default is 2^61 - 1.
class ModP {
 public:
  static constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

  static std::uint64_t modulus() noexcept { return modulus_; }

  constexpr ModP() noexcept = default;
  ModP(std::int64_t v) noexcept;  // NOLINT(google-explicit-constructor): Eigen needs Scalar(0)
  ModP(int v) noexcept : ModP(static_cast<std::int64_t>(v)) {}  // NOLINT
  static ModP from_residue(std::uint64_t r) noexcept;

  std::uint64_t residue() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }

  ModP& operator+=(ModP o) noexcept {
    value_ += o.value_;
    if (value_ >= modulus_) value_ -= modulus_;
    return *this;
  }
  ModP& operator-=(ModP o) noexcept {
    value_ = value_ >= o.value_ ? value_ - o.value_ : value_ + (modulus_ - o.value_);
    return *this;
  }
  ModP& operator*=(ModP o) noexcept {
    value_ = mul(value_, o.value_);
    return *this;
  }
  ModP& operator/=(ModP o) { return *this *= o.inverse(); }

  friend ModP operator+(ModP a, ModP b) noexcept { return a += b; }
  friend ModP operator-(ModP a, ModP b) noexcept { return a -= b; }
  friend ModP operator*(ModP a, ModP b) noexcept { return a *= b; }
  friend ModP operator/(ModP a, ModP b) { return a /= b; }
  ModP operator-() const noexcept { return ModP{} - *this; }

  friend bool operator==(ModP a, ModP b) noexcept { return a.value_ == b.value_; }
  friend bool operator!=(ModP a, ModP b) noexcept { return a.value_ != b.value_; }

  // Throws std::domain_error on zero.
  ModP inverse() const;
  ModP pow(std::uint64_t e) const noexcept;

  friend std::ostream& operator<<(std::ostream& os, ModP a);

 private:
  friend class ScopedModulus;

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) noexcept {
    const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    if (modulus_ == kMersenne61) {
      std::uint64_t lo = static_cast<std::uint64_t>(z) & kMersenne61;
      std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
      std::uint64_t s = lo + hi;
      if (s >= kMersenne61) s -= kMersenne61;
      return s;
    }
    return static_cast<std::uint64_t>(z % modulus_);
  }

  static thread_local std::uint64_t modulus_;
  std::uint64_t value_ = 0;
};

// Installs a prime modulus for the current thread and restores the previous
// one on destruction. Throws UsageError unless `prime` is a prime below 2^63.
class ScopedModulus {
 public:
  explicit ScopedModulus(std::uint64_t prime);
  ~ScopedModulus() { ModP::modulus_ = saved_; }
  ScopedModulus(const ScopedModulus&) = delete;
  ScopedModulus& operator=(const ScopedModulus&) = delete;

 private:
  std::uint64_t saved_;
};

bool is_prime(std::uint64_t n);

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class FieldKind { ExactRational, PrimeField, ComplexFloat };

// Runtime description of the scalar field a computation runs over.
struct ScalarField {
  FieldKind kind = FieldKind::PrimeField;
  std::uint64_t prime = ModP::kMersenne61;  // meaningful for PrimeField only

  static ScalarField prime_field(std::uint64_t p = ModP::kMersenne61) {
    return {FieldKind::PrimeField, p};
  }
  static ScalarField exact() { return {FieldKind::ExactRational, 0}; }
  static ScalarField complex_float() { return {FieldKind::ComplexFloat, 0}; }

  // "fp:<prime>", "exact", "float"; used in store keys.
  std::string descriptor() const;
  // CLI spelling: fp, exact, float.
  static ScalarField parse(const std::string& name, std::uint64_t prime);

  friend bool operator==(const ScalarField&, const ScalarField&) = default;
};

std::string to_string(FieldKind kind);

// Compile-time facts about the three scalar types.
template <typename Scalar>
struct FieldTraits;

template <>
struct FieldTraits<ModP> {
  static constexpr bool exact = true;
  static constexpr FieldKind kind = FieldKind::PrimeField;
  static bool is_zero(const ModP& a) { return a.is_zero(); }
  static ModP inverse(const ModP& a) { return a.inverse(); }
};

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr FieldKind kind = FieldKind::ExactRational;
  static bool is_zero(const Rational& a) { return a.is_zero(); }
  static Rational inverse(const Rational& a) { return Rational(1) / a; }
};

template <>
struct FieldTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr FieldKind kind = FieldKind::ComplexFloat;
  static bool is_zero(const Complex& a) { return a == Complex(0.0, 0.0); }
  static Complex inverse(const Complex& a) { return 1.0 / a; }
};

template <typename Scalar>
concept ExactScalar = FieldTraits<Scalar>::exact;

// Reduction of a rational into the current prime field. Throws
// std::domain_error when the denominator vanishes mod p.
ModP reduce(const Rational& q);

// Decimal text: "12", "-3/4", "0.125".
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

}  // namespace nv

namespace Eigen {

template <>
struct NumTraits<nv::ModP> : GenericNumTraits<nv::ModP> {
  using Real = nv::ModP;
  using NonInteger = nv::ModP;
  using Nested = nv::ModP;
  using Literal = nv::ModP;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline nv::ModP epsilon() { return nv::ModP(0); }
  static inline nv::ModP dummy_precision() { return nv::ModP(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
