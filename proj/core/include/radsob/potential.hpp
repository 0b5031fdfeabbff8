#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radsob/embedding_exponents.hpp"

namespace radsob {

// One multiplicative building block c * r^e * exp(s_growth*r + s_inverse/r)
// with c >= 0.  Every radial weight handled symbolically is piecewise of
// this form; boundedness and integrability questions reduce to comparing
// the exponential rates first and the power exponents second.
struct PotentialTerm {
  Rat c{0};
  Rat e{0};
  Rat s_growth{0};
  Rat s_inverse{0};

  bool is_zero() const { return c.is_zero(); }
  double eval(double r) const;
  std::string str() const;
  bool operator==(const PotentialTerm&) const = default;
};

struct PotentialPiece {
  Rat lo;  // finite, >= 0
  Rat hi;  // may be +inf
  PotentialTerm term;
  bool operator==(const PotentialPiece&) const = default;
};

// Radial weight built from finitely many power-times-exponential pieces
// partitioning (0, inf).  Optional behaves-like markers pin the asymptotic
// term at an end when the literal pieces only describe an equivalent of
// the true potential there (ratios tending to a positive constant change
// no admissible profile and no integrability verdict).
//
// Textual grammar (whitespace ignored):
//   spec    := body marker*
//   body    := expr | 'piecewise[' piece (';' piece)* ']'
//   piece   := '(' rational ',' (rational | 'inf') '):' expr
//   marker  := '~0' expr | '~inf' expr
//   expr    := factor ('*' factor)*
//   factor  := rational | 'r' ('^' rational)? | 'exp(' coeff ')'
//   coeff   := a rational times r ('3r', '-r', '2*r', '1/2r') or divided
//              by r ('1/r', '-3/2/r')
// Examples: "r^-2", "exp(-3r)*r^2", "exp(1/r)", "2.5",
//           "piecewise[(0,1): r^-1; (1,inf): 0]", "exp(1/r) ~inf r^3".
class PotentialSpec {
public:
  static PotentialSpec parse(std::string_view text);
  explicit PotentialSpec(std::vector<PotentialPiece> pieces,
                         std::optional<PotentialTerm> like_origin = std::nullopt,
                         std::optional<PotentialTerm> like_infinity = std::nullopt);

  const std::vector<PotentialPiece>& pieces() const { return pieces_; }
  // Term governing the behavior at the given end; a marker overrides the
  // literal end piece.
  const PotentialTerm& end_term(Side side) const;
  bool has_marker(Side side) const;

  // Pointwise value at r > 0 from the literal pieces (markers ignored).
  // Breakpoints belong to the piece on their right.
  double eval(double r) const;

  bool positive() const;  // every piece has c > 0
  bool is_zero() const;   // all pieces vanish
  std::string str() const;
  bool operator==(const PotentialSpec&) const = default;

private:
  std::vector<PotentialPiece> pieces_;
  std::optional<PotentialTerm> like0_, like_inf_;
};

// Whether K(|x|) is integrable over the unit ball resp. all of R^N,
// decided exactly from the radial integral of r^(N-1) K(r).
bool is_K_L1_ball(const PotentialSpec& K, const ProblemDims& dims);
bool is_K_L1_global(const PotentialSpec& K, const ProblemDims& dims);

}  // namespace radsob
