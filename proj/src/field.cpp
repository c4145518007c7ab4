#include "plsys/field.hpp"

#include <charconv>

namespace plsys {
namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce(const mpz_class& z, std::uint64_t p) {
  const mpz_class modulus(std::to_string(p));
  mpz_class m = z % modulus;
  if (m < 0) m += modulus;
  return std::stoull(m.get_str());
}

}  // namespace

Field Field::prime(std::uint64_t p) {
  // Keep products below 2^128 and the trial division cheap.
  if (!is_prime(p) || p >= (std::uint64_t{1} << 62)) {
    throw Error("field characteristic " + std::to_string(p) + " is not a supported prime");
  }
  return Field(p);
}

Field Field::parse(std::string_view tag) {
  if (tag == "Q") return rationals();
  if (tag.size() >= 2 && tag.front() == 'F') {
    std::string_view digits = tag.substr(1);
    if (digits.size() >= 2 && digits.front() == '<' && digits.back() == '>') {
      digits = digits.substr(1, digits.size() - 2);
    }
    std::uint64_t p = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) return prime(p);
  }
  throw Error("unknown field tag '" + std::string(tag) + "' (expected Q or F<p>)");
}

std::string Field::tag() const { return is_rational() ? "Q" : "F" + std::to_string(p_); }

Scalar::Scalar(Field field, long value) : field_(field) {
  if (field.is_rational()) {
    value_ = mpq_class(value);
  } else {
    const auto p = static_cast<__int128>(field.characteristic());
    __int128 m = static_cast<__int128>(value) % p;
    if (m < 0) m += p;
    value_ = static_cast<std::uint64_t>(m);
  }
}

Scalar::Scalar(Field field, const mpq_class& value) : field_(field) {
  if (field.is_rational()) {
    value_ = value;
    return;
  }
  const std::uint64_t p = field.characteristic();
  std::uint64_t num = reduce(value.get_num(), p);
  std::uint64_t den = reduce(value.get_den(), p);
  if (den == 0) throw Error("denominator " + value.get_den().get_str() + " vanishes in " + field.tag());
  value_ = mulmod(num, powmod(den, p - 2, p), p);
}

Scalar Scalar::parse(Field field, std::string_view text) {
  mpq_class q;
  std::string s(text);
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw Error("malformed scalar '" + s + "'");
  }
  if (q.get_den() == 0) throw Error("malformed scalar '" + s + "' (zero denominator)");
  q.canonicalize();
  return Scalar(field, q);
}

bool Scalar::is_zero() const { return field_.is_rational() ? q() == 0 : r() == 0; }

bool Scalar::is_one() const { return field_.is_rational() ? q() == 1 : r() == 1; }

std::string Scalar::to_string() const {
  return field_.is_rational() ? q().get_str() : std::to_string(r());
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error("division by zero in " + field_.tag());
  Scalar out = *this;
  if (field_.is_rational()) {
    out.value_ = mpq_class(1) / q();
  } else {
    const std::uint64_t p = field_.characteristic();
    out.value_ = powmod(r(), p - 2, p);
  }
  return out;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  if (field_.is_rational()) {
    out.value_ = mpq_class(-q());
  } else if (r() != 0) {
    out.value_ = field_.characteristic() - r();
  }
  return out;
}

void Scalar::check_same(const Scalar& rhs) const {
  if (!(field_ == rhs.field_)) {
    throw Error("mixed-field arithmetic: " + field_.tag() + " vs " + rhs.field_.tag());
  }
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  check_same(rhs);
  if (field_.is_rational()) {
    std::get<mpq_class>(value_) += rhs.q();
  } else {
    const std::uint64_t p = field_.characteristic();
    std::uint64_t s = r() + rhs.r();
    value_ = s >= p ? s - p : s;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  check_same(rhs);
  if (field_.is_rational()) {
    std::get<mpq_class>(value_) -= rhs.q();
  } else {
    const std::uint64_t p = field_.characteristic();
    value_ = r() >= rhs.r() ? r() - rhs.r() : r() + (p - rhs.r());
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  check_same(rhs);
  if (field_.is_rational()) {
    std::get<mpq_class>(value_) *= rhs.q();
  } else {
    value_ = mulmod(r(), rhs.r(), field_.characteristic());
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) { return *this *= rhs.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
  if (!(a.field_ == b.field_)) return false;
  return a.field_.is_rational() ? a.q() == b.q() : a.r() == b.r();
}

}  // namespace plsys
