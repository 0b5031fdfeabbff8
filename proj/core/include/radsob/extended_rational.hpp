#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "radsob/errors.hpp"

namespace radsob {

// Exact rational number extended with the two infinities.  Arithmetic is
// exact; the indeterminate forms inf-inf, 0*inf, inf/inf and division by
// zero throw DomainError at construction time.  Serializes as "num/den"
// ("num" when den==1), "inf", "-inf".
class ExtendedRational {
public:
  using Big = boost::multiprecision::cpp_int;

  ExtendedRational() : v_(0) {}
  ExtendedRational(std::int64_t n) : v_(n) {}  // NOLINT: implicit by design
  ExtendedRational(std::int64_t num, std::int64_t den);

  static ExtendedRational infinity() { return ExtendedRational(Tag::PosInf); }
  static ExtendedRational neg_infinity() { return ExtendedRational(Tag::NegInf); }

  // Accepts "3", "-10/3", "2.5", "inf", "-inf".
  static ExtendedRational parse(std::string_view text);

  bool is_finite() const { return tag_ == Tag::Finite; }
  bool is_pos_inf() const { return tag_ == Tag::PosInf; }
  bool is_neg_inf() const { return tag_ == Tag::NegInf; }
  bool is_zero() const { return tag_ == Tag::Finite && v_ == 0; }
  int sign() const;

  Big numerator() const;
  Big denominator() const;

  ExtendedRational operator-() const;
  ExtendedRational& operator+=(const ExtendedRational& o);
  ExtendedRational& operator-=(const ExtendedRational& o);
  ExtendedRational& operator*=(const ExtendedRational& o);
  ExtendedRational& operator/=(const ExtendedRational& o);

  friend ExtendedRational operator+(ExtendedRational a, const ExtendedRational& b) { return a += b; }
  friend ExtendedRational operator-(ExtendedRational a, const ExtendedRational& b) { return a -= b; }
  friend ExtendedRational operator*(ExtendedRational a, const ExtendedRational& b) { return a *= b; }
  friend ExtendedRational operator/(ExtendedRational a, const ExtendedRational& b) { return a /= b; }

  std::strong_ordering operator<=>(const ExtendedRational& o) const;
  bool operator==(const ExtendedRational& o) const;

  std::string str() const;
  double to_double() const;

  friend std::ostream& operator<<(std::ostream& os, const ExtendedRational& x);

private:
  enum class Tag { Finite, PosInf, NegInf };
  explicit ExtendedRational(Tag t) : tag_(t) {}

  Tag tag_ = Tag::Finite;
  boost::multiprecision::cpp_rational v_;
};

ExtendedRational min(const ExtendedRational& a, const ExtendedRational& b);
ExtendedRational max(const ExtendedRational& a, const ExtendedRational& b);
ExtendedRational abs(const ExtendedRational& x);

}  // namespace radsob
