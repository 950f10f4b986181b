#include "padicl/padic_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace padicl {

const char* err_code(Err e) {
  switch (e) {
    case Err::ContextMismatch: return "E_CONTEXT_MISMATCH";
    case Err::DivisionByZero: return "E_DIVISION_BY_ZERO";
    case Err::NotCoprime: return "E_NOT_COPRIME";
    case Err::PrecisionInsufficient: return "E_PRECISION";
    case Err::InvalidInput: return "E_INVALID_INPUT";
    case Err::FieldInconsistent: return "E_FIELD_INCONSISTENT";
    case Err::ConductorIncompatible: return "E_CONDUCTOR";
    case Err::NotParallel: return "E_NOT_PARALLEL";
    case Err::NotSigma0: return "E_NOT_SIGMA0";
    case Err::NotCritical: return "E_NOT_CRITICAL";
    case Err::SingularMatrix: return "E_SINGULAR";
    case Err::LevelUnsupported: return "E_LEVEL_UNSUPPORTED";
    case Err::NonConvergence: return "E_NON_CONVERGENCE";
    case Err::PreconditionFailed: return "E_PRECONDITION";
    case Err::ConfigError: return "E_CONFIG";
    case Err::IOError: return "E_IO";
  }
  return "E_UNKNOWN";
}

int64_t mod_pow(int64_t a, int64_t e, int64_t m) {
  __int128 r = 1 % m, b = ((a % m) + m) % m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return int64_t(r);
}

int64_t mod_inv(int64_t a, int64_t m) {
  int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1) {
    int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw Error(Err::NotCoprime, "no inverse mod " + std::to_string(m));
  return ((x % m) + m) % m;
}

int valuation_int(int64_t n, int64_t p) {
  if (n == 0) return PAdicElement::kInf;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

namespace {

inline int64_t mulm(int64_t a, int64_t b, int64_t m) {
  return int64_t((__int128)a * b % m);
}
inline int64_t addm(int64_t a, int64_t b, int64_t m) {
  int64_t s = a + b;
  return s >= m ? s - m : s;
}
inline int64_t subm(int64_t a, int64_t b, int64_t m) {
  int64_t s = a - b;
  return s < 0 ? s + m : s;
}
inline int64_t redm(int64_t a, int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

// Product in Z/p^K[y,x]/(g, E).
Digits mul_raw(const PAdicContext& c, const Digits& a, const Digits& b) {
  const int e = c.e, f = c.fdeg;
  const int64_t m = c.pK;
  if (e == 1 && f == 1) return Digits{mulm(a[0], b[0], m)};
  std::vector<int64_t> t((2 * e - 1) * (2 * f - 1), 0);
  const int W = 2 * f - 1;
  for (int i = 0; i < e; ++i)
    for (int l = 0; l < f; ++l) {
      int64_t ai = a[i * f + l];
      if (!ai) continue;
      for (int j = 0; j < e; ++j)
        for (int r = 0; r < f; ++r) {
          int64_t bj = b[j * f + r];
          if (!bj) continue;
          int64_t& slot = t[(i + j) * W + l + r];
          slot = addm(slot, mulm(ai, bj, m), m);
        }
    }
  // reduce y-degree by g
  for (int i = 0; i < 2 * e - 1; ++i)
    for (int d = 2 * f - 2; d >= f; --d) {
      int64_t cd = t[i * W + d];
      if (!cd) continue;
      t[i * W + d] = 0;
      for (int l = 0; l < f; ++l)
        t[i * W + d - f + l] = subm(t[i * W + d - f + l], mulm(cd, redm(c.unram[l], m), m), m);
    }
  // reduce x-degree by E
  for (int D = 2 * e - 2; D >= e; --D)
    for (int l = 0; l < f; ++l) {
      int64_t cd = t[D * W + l];
      if (!cd) continue;
      t[D * W + l] = 0;
      for (int i = 0; i < e; ++i)
        t[(D - e + i) * W + l] = subm(t[(D - e + i) * W + l], mulm(cd, redm(c.eis[i], m), m), m);
    }
  Digits r(e * f);
  for (int i = 0; i < e; ++i)
    for (int l = 0; l < f; ++l) r[i * f + l] = t[i * W + l];
  return r;
}

Digits add_raw(const PAdicContext& c, const Digits& a, const Digits& b) {
  Digits r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = addm(a[i], b[i], c.pK);
  return r;
}

Digits scal_raw(const PAdicContext& c, const Digits& a, int64_t s) {
  Digits r(a.size());
  int64_t sm = redm(s, c.pK);
  for (size_t i = 0; i < a.size(); ++i) r[i] = mulm(a[i], sm, c.pK);
  return r;
}

Digits one_raw(const PAdicContext& c) {
  Digits r(c.e * c.fdeg, 0);
  r[0] = 1;
  return r;
}

// Multiply by x^t for 0 <= t < e.
Digits xshift_raw(const PAdicContext& c, const Digits& a, int t) {
  if (t == 0) return a;
  Digits xt(c.e * c.fdeg, 0);
  xt[t * c.fdeg] = 1;
  return mul_raw(c, a, xt);
}

Digits pow_raw(const PAdicContext& c, Digits a, int64_t n) {
  Digits r = one_raw(c);
  while (n > 0) {
    if (n & 1) r = mul_raw(c, r, a);
    a = mul_raw(c, a, a);
    n >>= 1;
  }
  return r;
}

// Inverse of a unit via Newton iteration.
Digits inv_unit_raw(const PAdicContext& c, const Digits& u) {
  const int f = c.fdeg;
  // inverse of the residue in F_q
  Digits r0(c.e * f, 0);
  for (int l = 0; l < f; ++l) r0[l] = u[l] % c.p;
  Digits w = pow_raw(c, r0, c.residue_card() - 2);
  for (auto& d : w) d %= c.p;
  for (int i = f; i < c.e * f; ++i) w[i] = 0;
  int need = c.e * c.K + 1;
  Digits two = scal_raw(c, one_raw(c), 2);
  for (int prec = 1; prec < 2 * need; prec *= 2) {
    Digits uw = mul_raw(c, u, w);
    Digits d(uw.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = subm(two[i], uw[i], c.pK);
    w = mul_raw(c, w, d);
  }
  return w;
}

// x-adic valuation of a raw coefficient vector; kInf if it vanishes mod p^K.
int raw_valuation(const PAdicContext& c, const Digits& a) {
  int best = PAdicElement::kInf;
  for (int i = 0; i < c.e; ++i) {
    int vp = PAdicElement::kInf;
    for (int l = 0; l < c.fdeg; ++l) {
      int64_t d = a[i * c.fdeg + l];
      if (d) vp = std::min(vp, valuation_int(d, c.p));
    }
    if (vp < PAdicElement::kInf) best = std::min(best, c.e * vp + i);
  }
  return best;
}

// Divide by x^w when the valuation is at least w.
Digits xdivide_raw(const PAdicContext& c, Digits a, int w) {
  int q = w / c.e, t = w % c.e;
  if (q > 0) {
    int64_t pq = c.ppow[q];
    for (auto& d : a) d /= pq;
    a = mul_raw(c, a, pow_raw(c, c.eta_inv, q));
  }
  if (t > 0) {
    a = xshift_raw(c, a, c.e - t);
    a = mul_raw(c, a, c.eta_inv);
    for (auto& d : a) d /= c.p;
  }
  return a;
}

// Multiply by x^d, d >= 0.
Digits xmul_raw(const PAdicContext& c, Digits a, int d) {
  int q = d / c.e, t = d % c.e;
  if (q > 0) {
    if (q >= c.K) return Digits(a.size(), 0);
    a = mul_raw(c, a, pow_raw(c, c.eta, q));
    a = scal_raw(c, a, c.ppow[q]);
  }
  return xshift_raw(c, a, t);
}

void canonicalize(const PAdicContext& c, Digits& u, int R) {
  int s = R / c.e, t = R % c.e;
  for (int i = 0; i < c.e; ++i) {
    int k = std::min(c.K, s + (i < t ? 1 : 0));
    int64_t m = c.ppow[k];
    for (int l = 0; l < c.fdeg; ++l) u[i * c.fdeg + l] = redm(u[i * c.fdeg + l], m);
  }
}

void check_same(const PAdicElement& a, const PAdicElement& b) {
  if (a.ctx().get() != b.ctx().get() && !same_field(*a.ctx(), *b.ctx()))
    throw Error(Err::ContextMismatch, "elements from different fields");
}

}  // namespace

int64_t PAdicContext::residue_card() const {
  int64_t q = 1;
  for (int i = 0; i < fdeg; ++i) q *= p;
  return q;
}

bool same_field(const PAdicContext& a, const PAdicContext& b) {
  return a.p == b.p && a.unram == b.unram && a.eis == b.eis;
}

Ctx make_context(int64_t p, int N, std::vector<int64_t> unram, std::vector<int64_t> eis,
                 std::string id) {
  if (p < 2) throw Error(Err::InvalidInput, "p must be >= 2");
  if (N < 1) throw Error(Err::InvalidInput, "precision must be >= 1");
  auto c = std::make_shared<PAdicContext>();
  c->p = p;
  c->N = N;
  if (unram.empty()) unram = {0, 1};
  if (eis.empty()) eis = {-p, 1};
  if (unram.back() != 1 || eis.back() != 1)
    throw Error(Err::InvalidInput, "defining polynomials must be monic");
  c->fdeg = int(unram.size()) - 1;
  c->e = int(eis.size()) - 1;
  for (int i = 0; i < c->e; ++i)
    if (eis[i] % p != 0) throw Error(Err::InvalidInput, "Eisenstein polynomial expected");
  if ((eis[0] / p) % p == 0) throw Error(Err::InvalidInput, "Eisenstein constant term");
  c->unram = unram;
  c->eis = eis;
  c->K = (N + c->e - 1) / c->e + 2;
  c->ppow.assign(c->K + 1, 1);
  for (int i = 1; i <= c->K; ++i) {
    if (c->ppow[i - 1] > (int64_t(1) << 62) / p)
      throw Error(Err::PrecisionInsufficient, "p^K exceeds 2^62; lower the precision");
    c->ppow[i] = c->ppow[i - 1] * p;
  }
  c->pK = c->ppow[c->K];
  if (id.empty()) {
    std::ostringstream os;
    os << "Q" << p;
    if (c->fdeg > 1) {
      os << "[g=";
      for (auto v : unram) os << v << ",";
      os << "]";
    }
    if (c->e > 1) {
      os << "[E=";
      for (auto v : eis) os << v << ",";
      os << "]";
    }
    os << "@" << N;
    id = os.str();
  }
  c->id = id;
  // x^e = -sum E_i x^i = p * eta
  c->eta.assign(c->e * c->fdeg, 0);
  for (int i = 0; i < c->e; ++i) c->eta[i * c->fdeg] = redm(-eis[i] / p, c->pK);
  c->eta_inv = inv_unit_raw(*c, c->eta);
  return c;
}

Ctx make_qp(int64_t p, int N) { return make_context(p, N, {}, {}); }

Ctx make_cyclotomic(int64_t p, int n, int N) {
  if (n < 1) return make_qp(p, N);
  // Phi_{p^n}(X) = sum_{i<p} X^{i p^{n-1}}, shifted X -> X+1
  int64_t m = 1;
  for (int i = 1; i < n; ++i) m *= p;
  int deg = int((p - 1) * m);
  std::vector<__int128> phi(deg + 1, 0);
  for (int i = 0; i < p; ++i) phi[i * m] = 1;
  // Taylor shift by 1
  std::vector<__int128> sh = phi;
  for (int i = 0; i < deg; ++i)
    for (int j = deg - 1; j >= i; --j) sh[j] += sh[j + 1];
  std::vector<int64_t> eis(deg + 1);
  for (int i = 0; i <= deg; ++i) eis[i] = int64_t(sh[i]);
  std::ostringstream os;
  os << "Q" << p << "(zeta_" << p << "^" << n << ")@" << N;
  auto c = make_context(p, N, {}, eis, os.str());
  auto cc = std::const_pointer_cast<PAdicContext>(c);
  cc->cyclo = n;
  return c;
}

Ctx with_precision(const Ctx& c, int N) {
  std::string id = c->id;
  auto at = id.rfind('@');
  if (at != std::string::npos) id = id.substr(0, at);
  id += "@" + std::to_string(N);
  auto r = make_context(c->p, N, c->unram, c->eis, id);
  std::const_pointer_cast<PAdicContext>(r)->cyclo = c->cyclo;
  return r;
}

PAdicElement normalize(const Ctx& cp, Digits coeffs, int v, int prec) {
  const PAdicContext& c = *cp;
  PAdicElement r;
  r.ctx_ = cp;
  prec = std::min(prec, c.N);
  int w = raw_valuation(c, coeffs);
  if (w >= PAdicElement::kInf || v + w >= prec) {
    r.val_ = PAdicElement::kInf;
    r.prec_ = prec;
    return r;
  }
  if (w > 0) coeffs = xdivide_raw(c, std::move(coeffs), w);
  r.val_ = v + w;
  r.prec_ = std::min(prec, r.val_ + c.N);
  canonicalize(c, coeffs, r.prec_ - r.val_);
  r.unit_ = std::move(coeffs);
  return r;
}

PAdicElement PAdicElement::zero(const Ctx& c, int prec) {
  PAdicElement r;
  r.ctx_ = c;
  r.prec_ = std::min(prec, c->N);
  return r;
}

PAdicElement PAdicElement::from_int(const Ctx& c, int64_t n) {
  if (n == 0) return zero(c);
  int s = valuation_int(n, c->p);
  int64_t m = n;
  for (int i = 0; i < s; ++i) m /= c->p;
  Digits u(c->e * c->fdeg, 0);
  u[0] = redm(m, c->pK);
  if (s > 0) u = mul_raw(*c, u, pow_raw(*c, c->eta_inv, s));
  return normalize(c, u, c->e * s, c->N);
}

PAdicElement PAdicElement::from_rational(const Ctx& c, int64_t num, int64_t den) {
  if (den == 0) throw Error(Err::DivisionByZero, "zero denominator");
  return from_int(c, num) / from_int(c, den);
}

PAdicElement PAdicElement::from_coeffs(const Ctx& c, const Digits& coeffs, int v, int prec) {
  if (int(coeffs.size()) != c->e * c->fdeg)
    throw Error(Err::InvalidInput, "coefficient vector has the wrong length");
  Digits d(coeffs.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = redm(coeffs[i], c->pK);
  return normalize(c, d, v, prec);
}

PAdicElement PAdicElement::uniformizer(const Ctx& c) {
  if (c->e == 1) return from_int(c, c->p);
  Digits d(c->e * c->fdeg, 0);
  d[c->fdeg] = 1;
  return normalize(c, d, 0, c->N);
}

PAdicElement PAdicElement::unram_gen(const Ctx& c) {
  Digits d(c->e * c->fdeg, 0);
  if (c->fdeg > 1)
    d[1] = 1;
  else
    d[0] = redm(-c->unram[0], c->pK);
  return normalize(c, d, 0, c->N);
}

PAdicElement PAdicElement::operator-() const {
  if (is_zero()) return *this;
  Digits u(unit_.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = redm(-unit_[i], ctx_->pK);
  return normalize(ctx_, u, val_, prec_);
}

PAdicElement PAdicElement::operator+(const PAdicElement& o) const {
  check_same(*this, o);
  const PAdicContext& c = *ctx_;
  int prec = std::min(prec_, o.prec_);
  if (is_zero() || o.is_zero()) {
    const PAdicElement& nz = is_zero() ? o : *this;
    if (nz.is_zero() || nz.val_ >= prec) return zero(ctx_, prec);
    return normalize(ctx_, nz.unit_, nz.val_, prec);
  }
  const PAdicElement* lo = this;
  const PAdicElement* hi = &o;
  if (hi->val_ < lo->val_) std::swap(lo, hi);
  if (lo->val_ >= prec) return zero(ctx_, prec);
  int d = hi->val_ - lo->val_;
  if (lo->val_ + d >= prec) return normalize(ctx_, lo->unit_, lo->val_, prec);
  Digits s = add_raw(c, lo->unit_, xmul_raw(c, hi->unit_, d));
  return normalize(ctx_, std::move(s), lo->val_, prec);
}

PAdicElement PAdicElement::operator-(const PAdicElement& o) const { return *this + (-o); }

PAdicElement PAdicElement::operator*(const PAdicElement& o) const {
  check_same(*this, o);
  if (is_zero() || o.is_zero()) {
    int pa = is_zero() ? prec_ + (o.is_zero() ? o.prec_ : o.val_) : kInf;
    int pb = o.is_zero() ? o.prec_ + (is_zero() ? prec_ : val_) : kInf;
    return zero(ctx_, std::min(pa, pb));
  }
  int rel = std::min(relprec(), o.relprec());
  int v = val_ + o.val_;
  return normalize(ctx_, mul_raw(*ctx_, unit_, o.unit_), v, v + rel);
}

PAdicElement PAdicElement::inverse() const {
  if (is_zero()) throw Error(Err::DivisionByZero, "inverse of an element indistinguishable from zero");
  int v = -val_;
  return normalize(ctx_, inv_unit_raw(*ctx_, unit_), v, v + relprec());
}

PAdicElement PAdicElement::operator/(const PAdicElement& o) const {
  check_same(*this, o);
  if (o.is_zero()) throw Error(Err::DivisionByZero, "division by an element indistinguishable from zero");
  if (is_zero()) return zero(ctx_, prec_ - o.val_);
  return *this * o.inverse();
}

PAdicElement PAdicElement::pow(int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  PAdicElement r = from_int(ctx_, 1);
  PAdicElement b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

PAdicElement PAdicElement::mul_int(int64_t n) const { return *this * from_int(ctx_, n); }

PAdicElement PAdicElement::shift(int s) const {
  if (is_zero()) return zero(ctx_, prec_ + s);
  return normalize(ctx_, unit_, val_ + s, prec_ + s);
}

PAdicElement PAdicElement::truncate(int prec) const {
  if (prec >= prec_) return *this;
  if (is_zero()) return zero(ctx_, prec);
  return normalize(ctx_, unit_, val_, prec);
}

PAdicElement PAdicElement::to_context(const Ctx& c) const {
  if (!same_field(*ctx_, *c)) throw Error(Err::ContextMismatch, "to_context across fields");
  if (is_zero()) return zero(c, prec_);
  Digits u = unit_;
  for (auto& d : u) d = redm(d, c->pK);
  return normalize(c, u, val_, prec_);
}

bool PAdicElement::equals(const PAdicElement& o) const { return (*this - o).is_zero(); }

bool PAdicElement::identical(const PAdicElement& o) const {
  return same_field(*ctx_, *o.ctx_) && val_ == o.val_ && prec_ == o.prec_ && unit_ == o.unit_;
}

Digits PAdicElement::raw() const {
  const PAdicContext& c = *ctx_;
  if (is_zero()) return Digits(c.e * c.fdeg, 0);
  if (val_ < 0) throw Error(Err::InvalidInput, "raw() of a non-integral element");
  return xmul_raw(c, unit_, val_);
}

int64_t PAdicElement::to_int_mod(int k) const {
  const PAdicContext& c = *ctx_;
  if (c.e != 1 || c.fdeg != 1) throw Error(Err::InvalidInput, "to_int_mod needs Q_p");
  if (k > c.K) throw Error(Err::PrecisionInsufficient, "modulus beyond context");
  return raw()[0] % c.ppow[k];
}

std::string PAdicElement::str() const {
  std::ostringstream os;
  if (is_zero()) {
    os << "O(pi^" << prec_ << ")";
    return os.str();
  }
  os << "pi^" << val_ << "*[";
  for (size_t i = 0; i < unit_.size(); ++i) os << (i ? "," : "") << unit_[i];
  os << "]+O(pi^" << prec_ << ")";
  return os.str();
}

PAdicElement teichmuller(int64_t residue, const Ctx& c) {
  if (((residue % c->p) + c->p) % c->p == 0)
    throw Error(Err::NotCoprime, "teichmuller residue divisible by p");
  return teichmuller(PAdicElement::from_int(c, residue));
}

PAdicElement teichmuller(const PAdicElement& approx) {
  if (approx.is_zero() || approx.valuation() != 0)
    throw Error(Err::NotCoprime, "teichmuller input must be a unit");
  const Ctx& c = approx.ctx();
  int64_t q = c->residue_card();
  PAdicElement a = approx;
  for (int it = 0; it < c->N + 4; ++it) {
    PAdicElement b = a.pow(q);
    if (b.identical(a)) break;
    a = b;
  }
  return a;
}

PAdicElement zeta_pn(const Ctx& c, int n) {
  if (n == 0) return PAdicElement::from_int(c, 1);
  if (c->cyclo < n) throw Error(Err::InvalidInput, "context lacks the requested root of unity");
  PAdicElement z = PAdicElement::uniformizer(c) + PAdicElement::from_int(c, 1);
  return z.pow(int64_t(std::pow(double(c->p), c->cyclo - n) + 0.5));
}

ElementRecord serialize(const PAdicElement& a) {
  ElementRecord r;
  r.context_id = a.ctx()->id;
  r.precision = a.precision();
  r.valuation = a.is_zero() ? PAdicElement::kInf : a.valuation();
  std::ostringstream os;
  for (size_t i = 0; i < a.unit().size(); ++i) os << (i ? "," : "") << a.unit()[i];
  r.digits = os.str();
  return r;
}

PAdicElement deserialize(const ElementRecord& r, const Ctx& c) {
  if (r.context_id != c->id) throw Error(Err::ContextMismatch, "record context " + r.context_id);
  if (r.valuation >= PAdicElement::kInf) return PAdicElement::zero(c, r.precision);
  Digits d;
  std::istringstream is(r.digits);
  std::string tok;
  while (std::getline(is, tok, ',')) d.push_back(std::stoll(tok));
  return PAdicElement::from_coeffs(c, d, r.valuation, r.precision);
}

Rational make_rational(int64_t n, int64_t d) {
  if (d == 0) throw Error(Err::DivisionByZero, "rational with zero denominator");
  if (d < 0) n = -n, d = -d;
  int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  return {n / g, d / g};
}

PAdicPolynomial poly_trim(const PAdicPolynomial& a) {
  PAdicPolynomial r = a;
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  return r;
}

int poly_degree(const PAdicPolynomial& a) { return int(poly_trim(a).size()) - 1; }

PAdicPolynomial poly_mul(const PAdicPolynomial& a, const PAdicPolynomial& b) {
  if (a.empty() || b.empty()) return {};
  PAdicPolynomial r(a.size() + b.size() - 1, PAdicElement::zero(a[0].ctx()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

PAdicPolynomial poly_add(const PAdicPolynomial& a, const PAdicPolynomial& b) {
  const PAdicPolynomial& big = a.size() >= b.size() ? a : b;
  const PAdicPolynomial& small = a.size() >= b.size() ? b : a;
  PAdicPolynomial r = big;
  for (size_t i = 0; i < small.size(); ++i) r[i] = a.size() >= b.size() ? a[i] + b[i] : b[i] + a[i];
  return r;
}

PAdicPolynomial poly_sub(const PAdicPolynomial& a, const PAdicPolynomial& b) {
  PAdicPolynomial nb(b.size());
  for (size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
  return poly_add(a, nb);
}

PAdicElement poly_eval(const PAdicPolynomial& a, const PAdicElement& x) {
  PAdicElement r = PAdicElement::zero(x.ctx());
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

PAdicPolynomial poly_reverse(const PAdicPolynomial& a) {
  PAdicPolynomial t = poly_trim(a);
  std::reverse(t.begin(), t.end());
  return t;
}

std::vector<Slope> newton_polygon(const PAdicPolynomial& Qin) {
  PAdicPolynomial Q = poly_trim(Qin);
  if (Q.empty()) throw Error(Err::PrecisionInsufficient, "all coefficients vanish at precision");
  int e = Q[0].ctx()->e;
  std::vector<std::pair<int, int>> pts;
  for (int i = 0; i < int(Q.size()); ++i)
    if (!Q[i].is_zero()) pts.push_back({i, Q[i].valuation()});
  if (pts.front().first != 0)
    throw Error(Err::PrecisionInsufficient, "constant term indistinguishable from zero");
  // lower convex hull
  std::vector<std::pair<int, int>> hull;
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull.back();
      // drop b if it lies on or above segment a-pt
      int64_t cross = int64_t(b.first - a.first) * (pt.second - a.second) -
                      int64_t(b.second - a.second) * (pt.first - a.first);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  std::vector<Slope> out;
  for (size_t i = 1; i < hull.size(); ++i) {
    int dx = hull[i].first - hull[i - 1].first;
    int dy = hull[i - 1].second - hull[i].second;
    out.push_back({make_rational(dy, int64_t(dx) * e), dx});
  }
  std::sort(out.begin(), out.end(), [](const Slope& a, const Slope& b) { return a.slope < b.slope; });
  return out;
}

std::vector<PAdicElement> solve_linear(std::vector<std::vector<PAdicElement>> A,
                                       std::vector<PAdicElement> b) {
  int n = int(A.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!A[r][col].is_zero() && (piv < 0 || A[r][col].valuation() < A[piv][col].valuation())) piv = r;
    if (piv < 0) return {};
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    PAdicElement inv = A[col][col].inverse();
    for (int r = 0; r < n; ++r) {
      if (r == col || A[r][col].is_zero()) continue;
      PAdicElement f = A[r][col] * inv;
      for (int k = col; k < n; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<PAdicElement> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

std::vector<std::vector<PAdicElement>> kernel_basis(std::vector<std::vector<PAdicElement>> A,
                                                    int cols, const Ctx& c) {
  int rows = int(A.size());
  std::vector<int> pivcol;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!A[r][col].is_zero() && (piv < 0 || A[r][col].valuation() < A[piv][col].valuation())) piv = r;
    if (piv < 0) continue;
    std::swap(A[piv], A[rank]);
    PAdicElement inv = A[rank][col].inverse();
    for (int k = 0; k < cols; ++k) A[rank][k] = A[rank][k] * inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || A[r][col].is_zero()) continue;
      PAdicElement f = A[r][col];
      for (int k = 0; k < cols; ++k) A[r][k] -= f * A[rank][k];
    }
    pivcol.push_back(col);
    ++rank;
  }
  std::vector<bool> is_piv(cols, false);
  for (int pc : pivcol) is_piv[pc] = true;
  std::vector<std::vector<PAdicElement>> basis;
  for (int fc = 0; fc < cols; ++fc) {
    if (is_piv[fc]) continue;
    std::vector<PAdicElement> v(cols, PAdicElement::zero(c));
    v[fc] = PAdicElement::from_int(c, 1);
    for (int r = 0; r < rank; ++r) v[pivcol[r]] = -A[r][fc];
    basis.push_back(v);
  }
  return basis;
}

std::pair<PAdicPolynomial, PAdicPolynomial> slope_le_factor(const PAdicPolynomial& Qin, Rational h) {
  PAdicPolynomial Q = poly_trim(Qin);
  if (Q.empty()) throw Error(Err::PrecisionInsufficient, "zero polynomial");
  const Ctx& c = Q[0].ctx();
  if (Q[0].is_zero() || Q[0].valuation() != 0)
    throw Error(Err::PreconditionFailed, "slope factorization needs Q(0) a unit");
  PAdicElement one = PAdicElement::from_int(c, 1);
  int d = int(Q.size()) - 1;
  // roots of Q with valuation >= -h belong to P_le
  int m = 0;
  for (auto& s : newton_polygon(Q))
    if (make_rational(-h.num, h.den) <= s.slope) m += s.multiplicity;
  if (m == 0) return {PAdicPolynomial{one}, Q};
  if (m == d) return {Q, PAdicPolynomial{one}};
  // G monic of degree m from the low part, H from the high part; Newton refinement
  PAdicPolynomial G(m + 1), H(d - m + 1);
  PAdicElement qm_inv = Q[m].inverse();
  for (int i = 0; i <= m; ++i) G[i] = Q[i] * qm_inv;
  G[m] = one;
  for (int i = m; i <= d; ++i) H[i - m] = Q[i];
  for (int it = 0; it < 4 * c->N + 8; ++it) {
    PAdicPolynomial E = poly_sub(Q, poly_mul(G, H));
    E.resize(d + 1, PAdicElement::zero(c));
    bool done = true;
    for (auto& x : E)
      if (!x.is_zero()) done = false;
    if (done) break;
    // unknowns: g_0..g_{m-1}, h_0..h_{d-m-1}; equations: coefficients 0..d-1
    int n = d;
    std::vector<std::vector<PAdicElement>> A(n, std::vector<PAdicElement>(n, PAdicElement::zero(c)));
    for (int j = 0; j < m; ++j)
      for (int i = 0; i <= d - m; ++i) A[i + j][j] = H[i];
    for (int j = 0; j < d - m; ++j)
      for (int i = 0; i <= m; ++i) A[i + j][m + j] = G[i];
    std::vector<PAdicElement> rhs(E.begin(), E.begin() + n);
    auto x = solve_linear(A, rhs);
    if (x.empty()) throw Error(Err::PrecisionInsufficient, "cannot separate slope factors");
    for (int j = 0; j < m; ++j) G[j] += x[j];
    for (int j = 0; j < d - m; ++j) H[j] += x[m + j];
  }
  PAdicPolynomial check = poly_sub(Q, poly_mul(G, H));
  for (auto& x : check)
    if (!x.is_zero()) throw Error(Err::PrecisionInsufficient, "slope factorization did not converge");
  PAdicElement g0 = G[0];
  PAdicElement g0inv = g0.inverse();
  for (auto& x : G) x = x * g0inv;
  for (auto& x : H) x = x * g0;
  return {G, H};
}

}  // namespace padicl
