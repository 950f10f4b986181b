#pragma once

#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "padicl/errors.hpp"

namespace padicl {

using Digits = boost::container::small_vector<int64_t, 4>;

/// Unramified-then-Eisenstein tower O_L = Z_p[y,x]/(g(y), E(x)).
/// Precision N is counted in powers of the uniformizer x.
struct PAdicContext {
  int64_t p = 0;
  int e = 1;
  int fdeg = 1;
  int N = 1;
  std::vector<int64_t> unram;  // monic g, low to high, degree fdeg
  std::vector<int64_t> eis;    // monic Eisenstein E, low to high, degree e
  std::string id;
  int cyclo = 0;  // n when the field is Q_p(zeta_{p^n})

  int K = 0;          // residues are kept mod p^K
  int64_t pK = 0;
  std::vector<int64_t> ppow;  // p^0..p^K
  Digits eta;                 // x^e = p * eta
  Digits eta_inv;

  int degree() const { return e * fdeg; }
  int64_t residue_card() const;
};

using Ctx = std::shared_ptr<const PAdicContext>;

/// Q_p itself.
Ctx make_qp(int64_t p, int N);
/// General tower. An empty unram means fdeg=1; an empty eis means e=1.
Ctx make_context(int64_t p, int N, std::vector<int64_t> unram, std::vector<int64_t> eis,
                 std::string id = "");
/// Q_p(zeta_{p^n}) via Phi_{p^n}(X+1); N counts powers of the uniformizer.
Ctx make_cyclotomic(int64_t p, int n, int N);
/// Same field at a different working precision.
Ctx with_precision(const Ctx& c, int N);
bool same_field(const PAdicContext& a, const PAdicContext& b);

class PAdicElement {
 public:
  static constexpr int kInf = std::numeric_limits<int>::max() / 4;

  PAdicElement() = default;
  static PAdicElement zero(const Ctx& c, int prec);
  static PAdicElement zero(const Ctx& c) { return zero(c, c->N); }
  static PAdicElement from_int(const Ctx& c, int64_t n);
  static PAdicElement from_rational(const Ctx& c, int64_t num, int64_t den);
  /// Raw polynomial in y,x (coeffs[i*fdeg+l] of x^i y^l) times x^v.
  static PAdicElement from_coeffs(const Ctx& c, const Digits& coeffs, int v, int prec);
  static PAdicElement uniformizer(const Ctx& c);
  /// The generator y of the unramified part.
  static PAdicElement unram_gen(const Ctx& c);

  const Ctx& ctx() const { return ctx_; }
  bool is_zero() const { return val_ >= kInf; }
  int valuation() const { return val_; }
  int precision() const { return prec_; }
  int relprec() const { return is_zero() ? 0 : prec_ - val_; }
  const Digits& unit() const { return unit_; }

  PAdicElement operator+(const PAdicElement& o) const;
  PAdicElement operator-(const PAdicElement& o) const;
  PAdicElement operator-() const;
  PAdicElement operator*(const PAdicElement& o) const;
  PAdicElement operator/(const PAdicElement& o) const;
  PAdicElement& operator+=(const PAdicElement& o) { return *this = *this + o; }
  PAdicElement& operator-=(const PAdicElement& o) { return *this = *this - o; }
  PAdicElement& operator*=(const PAdicElement& o) { return *this = *this * o; }
  PAdicElement inverse() const;
  PAdicElement pow(int64_t n) const;
  PAdicElement mul_int(int64_t n) const;
  /// Multiply by x^s (s may be negative).
  PAdicElement shift(int s) const;
  /// Lower the absolute precision to at most prec.
  PAdicElement truncate(int prec) const;
  /// Re-express in another context of the same field.
  PAdicElement to_context(const Ctx& c) const;

  /// Equal modulo the smaller of the two precisions.
  bool equals(const PAdicElement& o) const;
  /// Bit-for-bit identical representation.
  bool identical(const PAdicElement& o) const;
  /// Value mod p^k as an integer; requires fdeg = e = 1 and v >= 0.
  int64_t to_int_mod(int k) const;
  /// Coefficient vector of the full value mod p^K (requires v >= 0).
  Digits raw() const;

  std::string str() const;

 private:
  Ctx ctx_;
  int val_ = kInf;
  int prec_ = 0;
  Digits unit_;

  friend PAdicElement normalize(const Ctx& c, Digits coeffs, int v, int prec);
};

PAdicElement normalize(const Ctx& c, Digits coeffs, int v, int prec);

/// Unique root of unity of order dividing q-1 with the given residue.
PAdicElement teichmuller(int64_t residue, const Ctx& c);
PAdicElement teichmuller(const PAdicElement& approx);

/// A fixed primitive p^n-th root of unity in a context containing one.
PAdicElement zeta_pn(const Ctx& c, int n);

struct ElementRecord {
  std::string context_id;
  int valuation;
  std::string digits;
  int precision;
};
ElementRecord serialize(const PAdicElement& a);
PAdicElement deserialize(const ElementRecord& r, const Ctx& c);

// Polynomials, coefficients low to high.
using PAdicPolynomial = std::vector<PAdicElement>;

struct Rational {
  int64_t num;
  int64_t den;
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
  bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  double value() const { return double(num) / double(den); }
};
Rational make_rational(int64_t n, int64_t d);

struct Slope {
  Rational slope;
  int multiplicity;
};

PAdicPolynomial poly_trim(const PAdicPolynomial& a);
PAdicPolynomial poly_mul(const PAdicPolynomial& a, const PAdicPolynomial& b);
PAdicPolynomial poly_add(const PAdicPolynomial& a, const PAdicPolynomial& b);
PAdicPolynomial poly_sub(const PAdicPolynomial& a, const PAdicPolynomial& b);
PAdicElement poly_eval(const PAdicPolynomial& a, const PAdicElement& x);
/// Q*(X) = X^deg Q(1/X).
PAdicPolynomial poly_reverse(const PAdicPolynomial& a);
int poly_degree(const PAdicPolynomial& a);

/// Valuations of the roots of Q (in units of v_p), with multiplicity, ascending.
std::vector<Slope> newton_polygon(const PAdicPolynomial& Q);

/// Q = P_le * P_gt with the roots of P_le* of valuation <= h and P_le(0) = 1.
std::pair<PAdicPolynomial, PAdicPolynomial> slope_le_factor(const PAdicPolynomial& Q,
                                                            Rational h);

/// Solve A x = b over the field; returns empty on a singular system.
std::vector<PAdicElement> solve_linear(std::vector<std::vector<PAdicElement>> A,
                                       std::vector<PAdicElement> b);
/// Basis of the right kernel of A (rows x cols).
std::vector<std::vector<PAdicElement>> kernel_basis(std::vector<std::vector<PAdicElement>> A,
                                                    int cols, const Ctx& c);

int64_t mod_pow(int64_t a, int64_t e, int64_t m);
int64_t mod_inv(int64_t a, int64_t m);
int valuation_int(int64_t n, int64_t p);

}  // namespace padicl
