#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "plsys/error.hpp"

namespace plsys {

/// The coefficient field of a pipeline run: the rationals or a prime field.
class Field {
 public:
  Field() = default;  // rationals

  static Field rationals() { return Field{}; }
  /// Throws if `p` is not prime.
  static Field prime(std::uint64_t p);
  /// Accepts "Q", "F2", "F<2>" and similar.
  static Field parse(std::string_view tag);

  bool is_rational() const { return p_ == 0; }
  std::uint64_t characteristic() const { return p_; }
  std::string tag() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint64_t p_ = 0;
};

/// An exact field element. Arithmetic between elements of different fields
/// throws.
class Scalar {
 public:
  Scalar() = default;  // rational zero
  Scalar(Field field, long value);
  Scalar(Field field, const mpq_class& value);

  static Scalar zero(Field field) { return Scalar(field, 0L); }
  static Scalar one(Field field) { return Scalar(field, 1L); }
  /// Parses "3", "-3/2". Over F_p the fraction is reduced modulo p.
  static Scalar parse(Field field, std::string_view text);

  Field field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;
  std::string to_string() const;

  Scalar inverse() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  void check_same(const Scalar& rhs) const;

  const mpq_class& q() const { return std::get<mpq_class>(value_); }
  std::uint64_t r() const { return std::get<std::uint64_t>(value_); }

  Field field_;
  // residue in [0, p) over F_p, exact rational over Q
  std::variant<std::uint64_t, mpq_class> value_{mpq_class(0)};
};

}  // namespace plsys
