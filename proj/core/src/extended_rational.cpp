#include "radsob/extended_rational.hpp"

#include <cctype>
#include <ostream>

namespace radsob {

namespace mp = boost::multiprecision;

ExtendedRational::ExtendedRational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  // cpp_rational insists on a positive denominator; fold the sign into num.
  Big n = num, d = den;
  if (d < 0) { n = -n; d = -d; }
  v_ = mp::cpp_rational(n, d);
}

int ExtendedRational::sign() const {
  switch (tag_) {
    case Tag::PosInf: return 1;
    case Tag::NegInf: return -1;
    case Tag::Finite: break;
  }
  return v_.sign();
}

ExtendedRational::Big ExtendedRational::numerator() const {
  if (!is_finite()) throw DomainError("numerator of infinity");
  return mp::numerator(v_);
}

ExtendedRational::Big ExtendedRational::denominator() const {
  if (!is_finite()) throw DomainError("denominator of infinity");
  return mp::denominator(v_);
}

ExtendedRational ExtendedRational::operator-() const {
  switch (tag_) {
    case Tag::PosInf: return neg_infinity();
    case Tag::NegInf: return infinity();
    case Tag::Finite: break;
  }
  ExtendedRational r;
  r.v_ = -v_;
  return r;
}

ExtendedRational& ExtendedRational::operator+=(const ExtendedRational& o) {
  if (is_finite() && o.is_finite()) {
    v_ += o.v_;
    return *this;
  }
  if ((is_pos_inf() && o.is_neg_inf()) || (is_neg_inf() && o.is_pos_inf()))
    throw DomainError("indeterminate form inf - inf");
  if (o.is_finite()) return *this;
  *this = o;
  return *this;
}

ExtendedRational& ExtendedRational::operator-=(const ExtendedRational& o) { return *this += -o; }

ExtendedRational& ExtendedRational::operator*=(const ExtendedRational& o) {
  if (is_finite() && o.is_finite()) {
    v_ *= o.v_;
    return *this;
  }
  if (sign() == 0 || o.sign() == 0) throw DomainError("indeterminate form 0 * inf");
  tag_ = (sign() * o.sign() > 0) ? Tag::PosInf : Tag::NegInf;
  v_ = 0;
  return *this;
}

ExtendedRational& ExtendedRational::operator/=(const ExtendedRational& o) {
  if (!is_finite() && !o.is_finite()) throw DomainError("indeterminate form inf / inf");
  if (o.is_finite() && o.v_ == 0) throw DomainError("division by zero");
  if (is_finite() && o.is_finite()) {
    v_ /= o.v_;
    return *this;
  }
  if (!o.is_finite()) {  // finite / inf
    v_ = 0;
    tag_ = Tag::Finite;
    return *this;
  }
  tag_ = (sign() * o.sign() > 0) ? Tag::PosInf : Tag::NegInf;  // inf / finite
  v_ = 0;
  return *this;
}

std::strong_ordering ExtendedRational::operator<=>(const ExtendedRational& o) const {
  auto rank = [](Tag t) { return t == Tag::NegInf ? -1 : (t == Tag::PosInf ? 1 : 0); };
  int ra = rank(tag_), rb = rank(o.tag_);
  if (ra != rb) return ra <=> rb;
  if (tag_ != Tag::Finite) return std::strong_ordering::equal;
  if (v_ < o.v_) return std::strong_ordering::less;
  if (v_ > o.v_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool ExtendedRational::operator==(const ExtendedRational& o) const {
  return (*this <=> o) == std::strong_ordering::equal;
}

std::string ExtendedRational::str() const {
  switch (tag_) {
    case Tag::PosInf: return "inf";
    case Tag::NegInf: return "-inf";
    case Tag::Finite: break;
  }
  std::string s = mp::numerator(v_).str();
  if (mp::denominator(v_) != 1) s += "/" + mp::denominator(v_).str();
  return s;
}

double ExtendedRational::to_double() const {
  switch (tag_) {
    case Tag::PosInf: return std::numeric_limits<double>::infinity();
    case Tag::NegInf: return -std::numeric_limits<double>::infinity();
    case Tag::Finite: break;
  }
  return v_.convert_to<double>();
}

std::ostream& operator<<(std::ostream& os, const ExtendedRational& x) { return os << x.str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

ExtendedRational ExtendedRational::parse(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational literal");

  bool neg = false;
  if (text.front() == '+' || text.front() == '-') {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text == "inf") return neg ? neg_infinity() : infinity();

  ExtendedRational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("bad rational literal: " + std::string(text));
    Big n{std::string(num)}, d{std::string(den)};
    if (d == 0) throw DomainError("rational with zero denominator");
    r.v_ = mp::cpp_rational(n, d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || !all_digits(fp))
      throw ParseError("bad decimal literal: " + std::string(text));
    Big scale = 1;
    for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
    Big n = (ip.empty() ? Big(0) : Big(std::string(ip))) * scale + Big(std::string(fp));
    r.v_ = mp::cpp_rational(n, scale);
  } else {
    if (!all_digits(text)) throw ParseError("bad integer literal: " + std::string(text));
    r.v_ = mp::cpp_rational(Big(std::string(text)));
  }
  if (neg) r.v_ = -r.v_;
  return r;
}

ExtendedRational min(const ExtendedRational& a, const ExtendedRational& b) { return a < b ? a : b; }
ExtendedRational max(const ExtendedRational& a, const ExtendedRational& b) { return a > b ? a : b; }
ExtendedRational abs(const ExtendedRational& x) { return x.sign() < 0 ? -x : x; }

}  // namespace radsob
