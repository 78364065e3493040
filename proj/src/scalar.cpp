#include "neurovariety/scalar.hpp"

#include <ostream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "neurovariety/errors.hpp"

namespace nv {

thread_local std::uint64_t ModP::modulus_ = ModP::kMersenne61;

ModP::ModP(std::int64_t v) noexcept {
  if (v >= 0) {
    value_ = static_cast<std::uint64_t>(v) % modulus_;
  } else {
    const std::uint64_t mag = (static_cast<std::uint64_t>(-(v + 1)) + 1) % modulus_;
    value_ = mag == 0 ? 0 : modulus_ - mag;
  }
}

ModP ModP::from_residue(std::uint64_t r) noexcept {
  ModP out;
  out.value_ = r % modulus_;
  return out;
}

ModP ModP::inverse() const {
  if (value_ == 0) throw std::domain_error("inverse of zero in prime field");
  // Extended Euclid on (value, p); coefficients stay within signed 128 bits.
  __int128 old_r = value_, r = modulus_;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  __int128 m = static_cast<__int128>(modulus_);
  old_s %= m;
  if (old_s < 0) old_s += m;
  return from_residue(static_cast<std::uint64_t>(old_s));
}

ModP ModP::pow(std::uint64_t e) const noexcept {
  ModP base = *this;
  ModP acc = ModP::from_residue(1);
  while (e != 0) {
    if (e & 1U) acc *= base;
    base *= base;
    e >>= 1U;
  }
  return acc;
}

std::ostream& operator<<(std::ostream& os, ModP a) { return os << a.value_; }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  return boost::multiprecision::miller_rabin_test(boost::multiprecision::cpp_int(n), 25);
}

ScopedModulus::ScopedModulus(std::uint64_t prime) : saved_(ModP::modulus_) {
  if (prime >= (std::uint64_t{1} << 63) || !is_prime(prime)) {
    throw UsageError("modulus " + std::to_string(prime) + " is not a prime below 2^63");
  }
  ModP::modulus_ = prime;
}

std::string ScalarField::descriptor() const {
  switch (kind) {
    case FieldKind::PrimeField:
      return "fp:" + std::to_string(prime);
    case FieldKind::ExactRational:
      return "exact";
    case FieldKind::ComplexFloat:
      return "float";
  }
  return "unknown";
}

ScalarField ScalarField::parse(const std::string& name, std::uint64_t prime) {
  if (name == "fp") {
    if (prime >= (std::uint64_t{1} << 63) || !is_prime(prime)) {
      throw UsageError("--prime " + std::to_string(prime) + " is not a prime below 2^63");
    }
    return prime_field(prime);
  }
  if (name == "exact") return exact();
  if (name == "float") return complex_float();
  throw UsageError("unknown field '" + name + "' (expected fp, float or exact)");
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::PrimeField:
      return "PrimeField";
    case FieldKind::ExactRational:
      return "ExactRational";
    case FieldKind::ComplexFloat:
      return "ComplexFloat";
  }
  return "unknown";
}

ModP reduce(const Rational& q) {
  const BigInt p(ModP::modulus());
  BigInt num = boost::multiprecision::numerator(q) % p;
  if (num < 0) num += p;
  BigInt den = boost::multiprecision::denominator(q) % p;
  if (den == 0) throw std::domain_error("denominator vanishes modulo the prime");
  return ModP::from_residue(num.convert_to<std::uint64_t>()) /
         ModP::from_residue(den.convert_to<std::uint64_t>());
}

namespace {

// Base-10 digit string with leading zeros removed; gmp would read a leading 0
// as an octal prefix.
BigInt parse_digits(const std::string& digits) {
  if (digits.empty()) throw std::runtime_error("empty");
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::runtime_error("not a digit");
  }
  const auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return BigInt(0);
  return BigInt(digits.substr(first));
}

}  // namespace

Rational parse_rational(const std::string& text) {
  try {
    std::string body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
      negative = body.front() == '-';
      body.erase(0, 1);
    }
    Rational out;
    if (const auto slash = body.find('/'); slash != std::string::npos) {
      const BigInt den = parse_digits(body.substr(slash + 1));
      if (den == 0) throw std::runtime_error("zero denominator");
      out = Rational(parse_digits(body.substr(0, slash)), den);
    } else if (const auto dot = body.find('.'); dot != std::string::npos) {
      const std::string frac = body.substr(dot + 1);
      BigInt den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const std::string whole = body.substr(0, dot);
      out = Rational(parse_digits((whole.empty() ? "0" : whole) + (frac.empty() ? "" : frac)), den);
    } else {
      out = Rational(parse_digits(body));
    }
    return negative ? Rational(-out) : out;
  } catch (const std::exception&) {
    throw UsageError("invalid rational literal '" + text + "'");
  }
}

std::string format_rational(const Rational& q) { return q.str(); }

}  // namespace nv
