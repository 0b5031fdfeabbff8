#include "radsob/potential.hpp"

#include <cctype>
#include <cmath>

#include "radsob/errors.hpp"

namespace radsob {

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  return out;
}

// Longest prefix of `text` that looks like a rational literal.
size_t rational_span(std::string_view text) {
  size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  while (i < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/' || text[i] == '.'))
    ++i;
  return i;
}

Rat parse_rational(std::string_view text) {
  return Rat::parse(text);  // throws ParseError on malformed input
}

// exp(...) argument: a rational multiple of r or of 1/r.
void parse_exp_arg(std::string_view arg, PotentialTerm& term) {
  if (arg.empty()) throw ParseError("empty exponential argument");
  if (arg.size() >= 2 && arg.substr(arg.size() - 2) == "/r") {
    std::string_view num = arg.substr(0, arg.size() - 2);
    if (num.empty() || num.find('r') != std::string_view::npos)
      throw ParseError("bad exponential argument: " + std::string(arg));
    term.s_inverse = term.s_inverse + parse_rational(num);
    return;
  }
  if (arg.back() == 'r') {
    std::string_view num = arg.substr(0, arg.size() - 1);
    if (!num.empty() && num.back() == '*') num.remove_suffix(1);
    if (num.find('r') != std::string_view::npos)
      throw ParseError("bad exponential argument: " + std::string(arg));
    Rat coeff(1);
    if (num == "-")
      coeff = Rat(-1);
    else if (!num.empty() && num != "+")
      coeff = parse_rational(num);
    term.s_growth = term.s_growth + coeff;
    return;
  }
  throw ParseError("exponential argument must involve r: " + std::string(arg));
}

PotentialTerm parse_term(std::string_view text) {
  if (text.empty()) throw ParseError("empty potential expression");
  PotentialTerm term;
  term.c = Rat(1);
  size_t pos = 0;
  while (pos < text.size()) {
    std::string_view rest = text.substr(pos);
    if (rest.rfind("exp(", 0) == 0) {
      size_t close = rest.find(')');
      if (close == std::string_view::npos) throw ParseError("unbalanced exp(");
      parse_exp_arg(rest.substr(4, close - 4), term);
      pos += close + 1;
    } else if (rest[0] == 'r') {
      Rat expo(1);
      size_t used = 1;
      if (rest.size() > 1 && rest[1] == '^') {
        size_t span = rational_span(rest.substr(2));
        if (span == 0) throw ParseError("missing exponent after r^");
        expo = parse_rational(rest.substr(2, span));
        used = 2 + span;
      }
      term.e = term.e + expo;
      pos += used;
    } else {
      size_t span = rational_span(rest);
      if (span == 0)
        throw ParseError("unrecognized potential factor: " + std::string(rest));
      Rat value = parse_rational(rest.substr(0, span));
      term.c = term.c * value;
      pos += span;
    }
    if (pos < text.size()) {
      if (text[pos] != '*')
        throw ParseError("expected * between potential factors: " + std::string(text));
      ++pos;
      if (pos == text.size()) throw ParseError("trailing * in potential expression");
    }
  }
  if (term.c < Rat(0)) throw DomainError("potential coefficients must be nonnegative");
  if (term.is_zero()) return PotentialTerm{};  // canonical zero
  return term;
}

}  // namespace

double PotentialTerm::eval(double r) const {
  if (is_zero()) return 0.0;
  double value = c.to_double() * std::pow(r, e.to_double());
  double arg = 0.0;
  if (!s_growth.is_zero()) arg += s_growth.to_double() * r;
  if (!s_inverse.is_zero()) arg += s_inverse.to_double() / r;
  if (arg != 0.0) value *= std::exp(arg);
  return value;
}

std::string PotentialTerm::str() const {
  if (is_zero()) return "0";
  std::string out;
  auto append = [&out](const std::string& factor) {
    if (!out.empty()) out += "*";
    out += factor;
  };
  if (c != Rat(1)) append(c.str());
  if (!e.is_zero()) append(e == Rat(1) ? "r" : "r^" + e.str());
  if (!s_growth.is_zero()) {
    std::string coeff =
        s_growth == Rat(1) ? "" : (s_growth == Rat(-1) ? "-" : s_growth.str());
    append("exp(" + coeff + "r)");
  }
  if (!s_inverse.is_zero()) append("exp(" + s_inverse.str() + "/r)");
  if (out.empty()) out = "1";
  return out;
}

PotentialSpec::PotentialSpec(std::vector<PotentialPiece> pieces,
                             std::optional<PotentialTerm> like_origin,
                             std::optional<PotentialTerm> like_infinity)
    : pieces_(std::move(pieces)), like0_(std::move(like_origin)),
      like_inf_(std::move(like_infinity)) {
  if (pieces_.empty()) throw DomainError("potential needs at least one piece");
  if (!pieces_.front().lo.is_zero())
    throw DomainError("potential pieces must start at 0");
  if (!pieces_.back().hi.is_pos_inf())
    throw DomainError("potential pieces must reach inf");
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const PotentialPiece& pc = pieces_[i];
    if (!pc.lo.is_finite() || pc.lo < Rat(0) || pc.lo >= pc.hi)
      throw DomainError("bad potential piece interval");
    if (i + 1 < pieces_.size() && pc.hi != pieces_[i + 1].lo)
      throw DomainError("potential pieces must partition (0, inf)");
    if (pc.term.c < Rat(0)) throw DomainError("potential coefficients must be nonnegative");
  }
  for (const auto& marker : {like0_, like_inf_})
    if (marker && marker->c < Rat(0))
      throw DomainError("potential coefficients must be nonnegative");
}

PotentialSpec PotentialSpec::parse(std::string_view text) {
  std::string flat = strip_spaces(text);
  if (flat.empty()) throw ParseError("empty potential");

  std::optional<PotentialTerm> like0, like_inf;
  size_t marker_pos = flat.find('~');
  std::string body = flat.substr(0, marker_pos);
  if (marker_pos != std::string::npos) {
    std::string_view rest = std::string_view(flat).substr(marker_pos);
    while (!rest.empty()) {
      if (rest[0] != '~') throw ParseError("malformed behaves-like marker");
      rest.remove_prefix(1);
      Side side;
      if (rest.rfind("inf", 0) == 0) {
        side = Side::Infinity;
        rest.remove_prefix(3);
      } else if (!rest.empty() && rest[0] == '0') {
        side = Side::Origin;
        rest.remove_prefix(1);
      } else {
        throw ParseError("behaves-like marker must be ~0 or ~inf");
      }
      size_t next = rest.find('~');
      std::string_view expr = rest.substr(0, next);
      auto& slot = side == Side::Origin ? like0 : like_inf;
      if (slot) throw ParseError("duplicate behaves-like marker");
      slot = parse_term(expr);
      rest.remove_prefix(expr.size());
    }
  }

  std::vector<PotentialPiece> pieces;
  if (body.rfind("piecewise[", 0) == 0) {
    if (body.back() != ']') throw ParseError("piecewise spec must end with ]");
    std::string_view inner = std::string_view(body).substr(10, body.size() - 11);
    if (inner.empty()) throw ParseError("empty piecewise spec");
    while (!inner.empty()) {
      size_t semi = inner.find(';');
      std::string_view piece = inner.substr(0, semi);
      if (piece.empty() || piece[0] != '(') throw ParseError("piece must start with (lo,hi)");
      size_t comma = piece.find(',');
      size_t close = piece.find(')');
      if (comma == std::string_view::npos || close == std::string_view::npos || comma > close ||
          close + 1 >= piece.size() || piece[close + 1] != ':')
        throw ParseError("piece must look like (lo,hi): expr");
      PotentialPiece out;
      out.lo = parse_rational(piece.substr(1, comma - 1));
      std::string_view hi = piece.substr(comma + 1, close - comma - 1);
      out.hi = hi == "inf" ? Rat::infinity() : parse_rational(hi);
      out.term = parse_term(piece.substr(close + 2));
      pieces.push_back(out);
      inner.remove_prefix(semi == std::string_view::npos ? inner.size() : semi + 1);
    }
  } else {
    pieces.push_back(PotentialPiece{Rat(0), Rat::infinity(), parse_term(body)});
  }
  return PotentialSpec(std::move(pieces), std::move(like0), std::move(like_inf));
}

const PotentialTerm& PotentialSpec::end_term(Side side) const {
  if (side == Side::Origin) return like0_ ? *like0_ : pieces_.front().term;
  return like_inf_ ? *like_inf_ : pieces_.back().term;
}

bool PotentialSpec::has_marker(Side side) const {
  return side == Side::Origin ? like0_.has_value() : like_inf_.has_value();
}

double PotentialSpec::eval(double r) const {
  if (!(r > 0.0)) throw DomainError("potential evaluated at r <= 0");
  // Pieces are ordered and partition (0, inf); breakpoints go right.
  for (const PotentialPiece& pc : pieces_)
    if (pc.hi.is_pos_inf() || r < pc.hi.to_double()) return pc.term.eval(r);
  return pieces_.back().term.eval(r);
}

bool PotentialSpec::positive() const {
  for (const PotentialPiece& pc : pieces_)
    if (pc.term.is_zero()) return false;
  return true;
}

bool PotentialSpec::is_zero() const {
  for (const PotentialPiece& pc : pieces_)
    if (!pc.term.is_zero()) return false;
  return true;
}

std::string PotentialSpec::str() const {
  std::string out;
  if (pieces_.size() == 1) {
    out = pieces_.front().term.str();
  } else {
    out = "piecewise[";
    for (size_t i = 0; i < pieces_.size(); ++i) {
      if (i) out += "; ";
      out += "(" + pieces_[i].lo.str() + "," + pieces_[i].hi.str() + "): " +
             pieces_[i].term.str();
    }
    out += "]";
  }
  if (like0_) out += " ~0 " + like0_->str();
  if (like_inf_) out += " ~inf " + like_inf_->str();
  return out;
}

namespace {

// Finiteness of the radial integral of r^(N-1) * term near one end.
bool integrable_near(const PotentialTerm& term, Side side, int N) {
  if (term.is_zero()) return true;
  if (side == Side::Origin) {
    if (!term.s_inverse.is_zero()) return term.s_inverse < Rat(0);
    return term.e > Rat(-N);
  }
  if (!term.s_growth.is_zero()) return term.s_growth < Rat(0);
  return term.e < Rat(-N);
}

}  // namespace

bool is_K_L1_ball(const PotentialSpec& K, const ProblemDims& dims) {
  // Pieces away from 0 are continuous on compact subintervals, so only the
  // end behavior can break integrability.
  return integrable_near(K.end_term(Side::Origin), Side::Origin, dims.N);
}

bool is_K_L1_global(const PotentialSpec& K, const ProblemDims& dims) {
  return is_K_L1_ball(K, dims) &&
         integrable_near(K.end_term(Side::Infinity), Side::Infinity, dims.N);
}

}  // namespace radsob
