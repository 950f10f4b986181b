#include "padicl/field_data.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace padicl {

using json = nlohmann::json;

namespace {

int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(Err::InvalidInput, "field element overflow");
  return int64_t(v);
}

// x^n reduced mod the monic poly, coefficients low to high
std::vector<int64_t> reduce_power(const std::vector<int64_t>& poly, int n) {
  int d = int(poly.size()) - 1;
  std::vector<int64_t> r(d, 0);
  if (n < d) {
    r[n] = 1;
    return r;
  }
  std::vector<int64_t> cur(d, 0);
  cur[d - 1] = 1;  // theta^{d-1}
  for (int k = d - 1; k < n; ++k) {
    int64_t top = cur[d - 1];
    for (int i = d - 1; i > 0; --i) cur[i] = checked(__int128(cur[i - 1]) - __int128(top) * poly[i]);
    cur[0] = checked(-__int128(top) * poly[0]);
  }
  return cur;
}

mpq_class parse_q(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  mpq_class q(j.get<std::string>());
  q.canonicalize();
  return q;
}

FieldElt parse_elt(const json& j, int d) {
  FieldElt x;
  if (j.is_object()) {
    x.c = j.at("c").get<std::vector<int64_t>>();
    x.den = j.value("den", int64_t(1));
  } else {
    x.c = j.get<std::vector<int64_t>>();
  }
  x.c.resize(d, 0);
  return x;
}

mpq_class det_q(std::vector<std::vector<mpq_class>> A) {
  int n = int(A.size());
  mpq_class det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (A[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(A[piv], A[c]);
      det = -det;
    }
    det *= A[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (A[r][c] == 0) continue;
      mpq_class f = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  return det;
}

template <class T>
T eval_poly(const std::vector<int64_t>& poly, const T& x) {
  T r = T(0);
  for (int i = int(poly.size()) - 1; i >= 0; --i) r = r * x + T(poly[i]);
  return r;
}

mpq_class eval_q(const std::vector<int64_t>& c, const mpq_class& x) {
  mpq_class r = 0;
  for (int i = int(c.size()) - 1; i >= 0; --i) r = r * x + c[i];
  return r;
}

PAdicElement eval_local(const std::vector<int64_t>& c, const PAdicElement& x) {
  PAdicElement r = PAdicElement::zero(x.ctx());
  for (int i = int(c.size()) - 1; i >= 0; --i) r = r * x + PAdicElement::from_int(x.ctx(), c[i]);
  return r;
}

}  // namespace

FieldElt NumberFieldData::one() const { return from_int(1); }

FieldElt NumberFieldData::from_int(int64_t n) const {
  FieldElt x;
  x.c.assign(d, 0);
  x.c[0] = n;
  return x;
}

FieldElt NumberFieldData::mul(const FieldElt& a, const FieldElt& b) const {
  FieldElt r;
  r.c.assign(d, 0);
  r.den = checked(__int128(a.den) * b.den);
  for (int i = 0; i < d; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (b.c[j] == 0) continue;
      __int128 ab = __int128(a.c[i]) * b.c[j];
      for (int k = 0; k < d; ++k) r.c[k] = checked(r.c[k] + ab * mult[i][j][k]);
    }
  }
  return r;
}

FieldElt NumberFieldData::add(const FieldElt& a, const FieldElt& b) const {
  FieldElt r;
  r.c.assign(d, 0);
  r.den = checked(__int128(a.den) * b.den);
  for (int i = 0; i < d; ++i) r.c[i] = checked(__int128(a.c[i]) * b.den + __int128(b.c[i]) * a.den);
  return r;
}

FieldElt NumberFieldData::neg(const FieldElt& a) const {
  FieldElt r = a;
  for (auto& v : r.c) v = -v;
  return r;
}

FieldElt NumberFieldData::pow(const FieldElt& a, int n) const {
  if (n < 0) throw Error(Err::InvalidInput, "negative power of a field element");
  FieldElt r = one();
  for (int i = 0; i < n; ++i) r = mul(r, a);
  return r;
}

bool NumberFieldData::is_zero(const FieldElt& a) const {
  for (auto v : a.c)
    if (v != 0) return false;
  return true;
}

bool NumberFieldData::equal(const FieldElt& a, const FieldElt& b) const {
  return is_zero(add(a, neg(b)));
}

mpq_class NumberFieldData::norm(const FieldElt& a) const {
  std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d));
  for (int j = 0; j < d; ++j) {
    FieldElt e = from_int(0);
    e.c[j] = 1;
    FieldElt col = mul(a, e);
    for (int i = 0; i < d; ++i) M[i][j] = mpq_class(col.c[i], col.den);
  }
  for (auto& row : M)
    for (auto& v : row) v.canonicalize();
  return det_q(M);
}

mpq_class NumberFieldData::trace(const FieldElt& a) const {
  mpq_class t = 0;
  for (int j = 0; j < d; ++j) {
    FieldElt e = from_int(0);
    e.c[j] = 1;
    FieldElt col = mul(a, e);
    mpq_class v(col.c[j], col.den);
    v.canonicalize();
    t += v;
  }
  return t;
}

std::complex<long double> NumberFieldData::embed_complex(const FieldElt& a, int sigma) const {
  std::complex<long double> r = 0, pw = 1;
  for (int i = 0; i < d; ++i) {
    r += (long double)a.c[i] * pw;
    pw *= emb[sigma].value;
  }
  return r / (long double)a.den;
}

NumberFieldData parse_field(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& ex) {
    throw Error(Err::FieldInconsistent, std::string("unparseable field file: ") + ex.what());
  }
  NumberFieldData F;
  try {
    if (j.at("schema").get<int>() != 1) throw Error(Err::FieldInconsistent, "unsupported schema version");
    F.id = j.at("id").get<std::string>();
    F.name = j.value("name", F.id);
    F.d = j.at("degree").get<int>();
    auto sig = j.at("signature").get<std::vector<int>>();
    if (sig.size() != 2) throw Error(Err::FieldInconsistent, "signature must be [r1, r2]");
    F.r1 = sig[0];
    F.r2 = sig[1];
    F.poly = j.at("polynomial").get<std::vector<int64_t>>();
    for (auto& e : j.at("embeddings")) {
      Embedding em;
      em.label = e.at("label").get<std::string>();
      auto kind = e.at("type").get<std::string>();
      if (kind == "real")
        em.kind = EmbKind::Real;
      else if (kind == "complex")
        em.kind = EmbKind::Complex;
      else if (kind == "conj")
        em.kind = EmbKind::Conj;
      else
        throw Error(Err::FieldInconsistent, "unknown embedding type " + kind);
      auto ap = e.at("approx").get<std::vector<long double>>();
      em.value = {ap.at(0), ap.size() > 1 ? ap[1] : 0.0L};
      if (em.kind == EmbKind::Real) {
        em.lo = parse_q(e.at("interval").at(0));
        em.hi = parse_q(e.at("interval").at(1));
      }
      F.emb.push_back(em);
    }
    F.conj = j.at("conjugation").get<std::vector<int>>();
    F.mult = j.at("mult_table").get<std::vector<std::vector<std::vector<int64_t>>>>();
    F.disc = j.at("discriminant").get<int64_t>();
    F.different = parse_elt(j.at("different"), F.d);
    auto& u = j.at("units");
    F.torsion_order = u.at("torsion_order").get<int>();
    F.torsion_gen = parse_elt(u.at("torsion_generator"), F.d);
    for (auto& x : u.at("fundamental")) F.fundamental_units.push_back(parse_elt(x, F.d));
    for (auto& x : u.at("totally_positive")) F.pos_units.push_back(parse_elt(x, F.d));
    F.narrow_h = j.at("narrow_class_number").get<int>();
    for (auto& x : j.at("ideal_representatives")) F.ideal_reps.push_back(parse_elt(x, F.d));
    for (auto& [key, arr] : j.at("primes").items()) {
      std::vector<LocalPrime> lps;
      for (auto& e : arr) {
        LocalPrime lp;
        lp.label = e.at("label").get<std::string>();
        lp.e = e.at("e").get<int>();
        lp.f = e.at("f").get<int>();
        lp.unram = e.value("unram", std::vector<int64_t>{});
        lp.eis = e.value("eis", std::vector<int64_t>{});
        for (auto v : e.at("theta").get<std::vector<int64_t>>()) lp.theta_approx.push_back(v);
        if (e.at("uniformizer").is_string()) {
          lp.uniformizer.c.clear();  // filled with p in set_prime
        } else {
          lp.uniformizer = parse_elt(e.at("uniformizer"), F.d);
        }
        for (auto& s : e.at("embeddings")) {
          auto lab = s.get<std::string>();
          int idx = -1;
          for (int i = 0; i < int(F.emb.size()); ++i)
            if (F.emb[i].label == lab) idx = i;
          if (idx < 0) throw Error(Err::FieldInconsistent, "unknown embedding label " + lab);
          lp.sigmas.push_back(idx);
        }
        lps.push_back(lp);
      }
      F.prime_spec[key] = lps;
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(Err::FieldInconsistent, std::string("malformed field file: ") + ex.what());
  }
  // refine complex approximations by Newton
  for (auto& em : F.emb) {
    std::vector<int64_t> dp;
    for (size_t i = 1; i < F.poly.size(); ++i) dp.push_back(int64_t(i) * F.poly[i]);
    auto z = em.value;
    for (int it = 0; it < 60; ++it) {
      auto fz = eval_poly<std::complex<long double>>(F.poly, z);
      auto dz = eval_poly<std::complex<long double>>(dp, z);
      if (std::abs(dz) == 0) break;
      z -= fz / dz;
    }
    if (em.kind == EmbKind::Real) z = {z.real(), 0};
    em.value = z;
  }
  auto problems = validate_field(F);
  if (!problems.empty()) {
    std::string msg = F.id + ":";
    for (auto& s : problems) msg += " " + s + ";";
    throw Error(Err::FieldInconsistent, msg);
  }
  return F;
}

NumberFieldData load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::IOError, "cannot open field file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_field(ss.str());
}

std::vector<std::string> validate_field(const NumberFieldData& F) {
  std::vector<std::string> bad;
  int d = F.d;
  if (F.r1 < 0 || F.r2 < 0 || F.r1 + 2 * F.r2 != d) bad.push_back("r1 + 2 r2 != degree");
  if (int(F.poly.size()) != d + 1 || F.poly.back() != 1) bad.push_back("polynomial must be monic of the field degree");
  if (int(F.emb.size()) != d) bad.push_back("embedding count differs from degree");
  if (int(F.conj.size()) != d) bad.push_back("conjugation has the wrong length");
  if (!bad.empty()) return bad;
  int nr = 0, nc = 0, ncc = 0;
  for (int i = 0; i < d; ++i) {
    int c = F.conj[i];
    if (c < 0 || c >= d || F.conj[c] != i) {
      bad.push_back("conjugation is not an involution");
      break;
    }
    switch (F.emb[i].kind) {
      case EmbKind::Real:
        ++nr;
        if (c != i) bad.push_back("conjugation moves a real embedding");
        if (std::abs(F.emb[i].value.imag()) > 1e-9L) bad.push_back("real embedding with imaginary part");
        break;
      case EmbKind::Complex:
        ++nc;
        if (F.emb[c].kind != EmbKind::Conj) bad.push_back("conjugation does not swap Sigma(C) and c Sigma(C)");
        break;
      case EmbKind::Conj:
        ++ncc;
        break;
    }
  }
  if (nr != F.r1 || nc != F.r2 || ncc != F.r2) bad.push_back("embedding kinds disagree with the signature");
  // embeddings are distinct roots
  for (int i = 0; i < d; ++i) {
    if (std::abs(eval_poly<std::complex<long double>>(F.poly, F.emb[i].value)) > 1e-9L)
      bad.push_back("embedding " + F.emb[i].label + " is not a root");
    for (int k = 0; k < i; ++k)
      if (std::abs(F.emb[i].value - F.emb[k].value) < 1e-9L) bad.push_back("embeddings coincide");
  }
  for (int i = 0; i < d; ++i) {
    int c = F.conj[i];
    if (std::abs(F.emb[c].value - std::conj(F.emb[i].value)) > 1e-9L)
      bad.push_back("conjugation does not match complex conjugation");
  }
  // isolating intervals
  for (int i = 0; i < d; ++i) {
    if (F.emb[i].kind != EmbKind::Real) continue;
    auto& em = F.emb[i];
    if (!(em.lo < em.hi) || sgn(eval_q(F.poly, em.lo)) * sgn(eval_q(F.poly, em.hi)) >= 0)
      bad.push_back("interval for " + em.label + " does not isolate a sign change");
    else if (em.value.real() < em.lo.get_d() - 1e-12 || em.value.real() > em.hi.get_d() + 1e-12)
      bad.push_back("approximation for " + em.label + " outside its interval");
  }
  // multiplication table
  if (int(F.mult.size()) != d) {
    bad.push_back("multiplication table has the wrong shape");
    return bad;
  }
  for (int i = 0; i < d; ++i) {
    if (int(F.mult[i].size()) != d) {
      bad.push_back("multiplication table has the wrong shape");
      return bad;
    }
    for (int k = 0; k < d; ++k) {
      if (int(F.mult[i][k].size()) != d) {
        bad.push_back("multiplication table has the wrong shape");
        return bad;
      }
      if (F.mult[i][k] != reduce_power(F.poly, i + k)) {
        bad.push_back("multiplication table disagrees with the polynomial");
        return bad;
      }
    }
  }
  // discriminant of the power basis
  std::vector<std::vector<mpq_class>> T(d, std::vector<mpq_class>(d));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      FieldElt e = F.from_int(0);
      e.c = reduce_power(F.poly, i + k);
      T[i][k] = F.trace(e);
    }
  mpq_class disc = det_q(T);
  if (disc != mpq_class(F.disc)) bad.push_back("discriminant mismatch");
  if (abs(F.norm(F.different)) != abs(mpq_class(F.disc))) bad.push_back("different generator has the wrong norm");
  // units
  auto unit_ok = [&](const FieldElt& u) { return abs(F.norm(u)) == 1 && u.den == 1; };
  if (!unit_ok(F.torsion_gen)) bad.push_back("torsion generator is not a unit");
  if (F.torsion_order < 1 || !F.equal(F.pow(F.torsion_gen, F.torsion_order), F.one()))
    bad.push_back("torsion generator has the wrong order");
  for (int k = 1; k < F.torsion_order; ++k)
    if (F.torsion_order % k == 0 && F.equal(F.pow(F.torsion_gen, k), F.one()))
      bad.push_back("torsion generator order is smaller than declared");
  if (int(F.fundamental_units.size()) != F.r1 + F.r2 - 1) bad.push_back("wrong number of fundamental units");
  for (auto& u : F.fundamental_units)
    if (!unit_ok(u)) bad.push_back("fundamental unit has norm != +-1");
  for (auto& u : F.pos_units) {
    if (!unit_ok(u)) bad.push_back("totally positive generator is not a unit");
    else if (!is_totally_positive(F, u)) bad.push_back("declared totally positive unit is not");
  }
  if (F.narrow_h < 1 || int(F.ideal_reps.size()) != F.narrow_h)
    bad.push_back("ideal representatives do not match the narrow class number");
  // primes above p
  for (auto& [key, lps] : F.prime_spec) {
    int tot = 0;
    std::vector<int> seen(d, 0);
    for (auto& lp : lps) {
      tot += lp.e * lp.f;
      if (int(lp.sigmas.size()) != lp.e * lp.f) bad.push_back("fiber of " + lp.label + " has size != e f");
      for (int s : lp.sigmas) seen[s]++;
      if (int(lp.theta_approx.size()) != lp.e * lp.f) bad.push_back("local theta of " + lp.label + " has wrong length");
    }
    if (tot != d) bad.push_back("sum of e f over primes above " + key + " != degree");
    for (int s = 0; s < d; ++s)
      if (seen[s] != 1) bad.push_back("embeddings not partitioned by primes above " + key);
  }
  if (F.prime_spec.empty()) bad.push_back("no prime data");
  return bad;
}

void set_prime(NumberFieldData& F, int64_t p, int N) {
  auto it = F.prime_spec.find(std::to_string(p));
  bool generic = false;
  if (it == F.prime_spec.end()) {
    it = F.prime_spec.find("*");
    generic = true;
    if (it == F.prime_spec.end()) throw Error(Err::FieldInconsistent, F.id + " has no data for p=" + std::to_string(p));
  }
  F.p = p;
  F.N = N;
  F.primes = it->second;
  std::vector<int64_t> dp;
  for (size_t i = 1; i < F.poly.size(); ++i) dp.push_back(int64_t(i) * F.poly[i]);
  for (auto& lp : F.primes) {
    if (generic && (lp.e != 1 || lp.f != 1 || F.d != 1))
      throw Error(Err::FieldInconsistent, "generic prime data only for F = Q");
    std::vector<int64_t> eis = lp.eis;
    if (!eis.empty() && eis.size() > 1) {
      // Eisenstein polynomials in the file are given for the declared p
      for (size_t i = 0; i + 1 < eis.size(); ++i)
        if (eis[i] % p != 0) throw Error(Err::FieldInconsistent, lp.label + ": Eisenstein polynomial not at p");
    }
    lp.ctx = make_context(p, N, lp.unram, eis, F.id + ":" + lp.label + "@" + std::to_string(N));
    if (lp.uniformizer.c.empty()) {
      lp.uniformizer = F.from_int(p);
    }
    PAdicElement th = PAdicElement::from_coeffs(lp.ctx, lp.theta_approx, 0, N);
    if (th.valuation() < 0) throw Error(Err::FieldInconsistent, "local theta must be integral");
    for (int k = 0; k < 2 * N + 8; ++k) {
      PAdicElement fv = eval_local(F.poly, th);
      if (fv.is_zero()) break;
      PAdicElement dv = eval_local(dp, th);
      if (dv.is_zero()) throw Error(Err::FieldInconsistent, lp.label + ": derivative vanishes at theta");
      PAdicElement nt = th - fv / dv;
      th = nt.truncate(N);
    }
    if (!eval_local(F.poly, th).is_zero())
      throw Error(Err::FieldInconsistent, lp.label + ": theta does not lift to a root");
    lp.theta = th;
    // local image of the uniformizer
    PAdicElement pi = PAdicElement::zero(lp.ctx);
    PAdicElement pw = PAdicElement::from_int(lp.ctx, 1);
    for (int i = 0; i < F.d; ++i) {
      pi += pw.mul_int(lp.uniformizer.c[i]);
      pw = pw * th;
    }
    pi = pi / PAdicElement::from_int(lp.ctx, lp.uniformizer.den);
    if (pi.valuation() != 1) throw Error(Err::FieldInconsistent, lp.label + ": declared uniformizer has valuation != 1");
    lp.pi = pi;
  }
}

OFpElement embed_global(const NumberFieldData& F, const FieldElt& x) {
  if (F.primes.empty()) throw Error(Err::PreconditionFailed, "set_prime has not been called");
  OFpElement out;
  for (auto& lp : F.primes) {
    PAdicElement r = PAdicElement::zero(lp.ctx);
    PAdicElement pw = PAdicElement::from_int(lp.ctx, 1);
    for (int i = 0; i < F.d; ++i) {
      if (x.c[i] != 0) r += pw.mul_int(x.c[i]);
      pw = pw * lp.theta;
    }
    if (x.den != 1) r = r / PAdicElement::from_int(lp.ctx, x.den);
    out.push_back(r);
  }
  return out;
}

OFpElement ofp_mul(const OFpElement& a, const OFpElement& b) {
  OFpElement r;
  for (size_t i = 0; i < a.size(); ++i) r.push_back(a[i] * b[i]);
  return r;
}

OFpElement ofp_add(const OFpElement& a, const OFpElement& b) {
  OFpElement r;
  for (size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
  return r;
}

OFpElement ofp_one(const NumberFieldData& F) {
  OFpElement r;
  for (auto& lp : F.primes) r.push_back(PAdicElement::from_int(lp.ctx, 1));
  return r;
}

int real_sign(const NumberFieldData& F, const FieldElt& x, int sigma) {
  if (F.emb[sigma].kind != EmbKind::Real) throw Error(Err::InvalidInput, "sign at a complex embedding");
  if (F.is_zero(x)) throw Error(Err::InvalidInput, "sign of zero");
  mpq_class lo = F.emb[sigma].lo, hi = F.emb[sigma].hi;
  int slo = sgn(eval_q(F.poly, lo));
  std::vector<int64_t> dx;
  for (size_t i = 1; i < x.c.size(); ++i) dx.push_back(int64_t(i) * x.c[i]);
  for (int it = 0; it < 4000; ++it) {
    mpq_class mid = (lo + hi) / 2;
    mpq_class v = eval_q(x.c, mid);
    // |x(t) - x(mid)| <= sum |i c_i| R^{i-1} * (hi - lo) / 2
    mpq_class R = std::max(abs(lo), abs(hi));
    mpq_class bound = 0, pw = 1;
    for (size_t i = 0; i < dx.size(); ++i) {
      bound += abs(mpq_class(dx[i])) * pw;
      pw *= R;
    }
    bound *= (hi - lo) / 2;
    if (abs(v) > bound) return sgn(v) * (x.den > 0 ? 1 : -1);
    int smid = sgn(eval_q(F.poly, mid));
    if (smid == 0) {
      lo = hi = mid;
      return sgn(eval_q(x.c, mid)) * (x.den > 0 ? 1 : -1);
    }
    if (smid == slo)
      lo = mid;
    else
      hi = mid;
  }
  throw Error(Err::PrecisionInsufficient, "sign refinement did not terminate");
}

bool is_totally_positive(const NumberFieldData& F, const FieldElt& x) {
  for (int s = 0; s < F.d; ++s)
    if (F.emb[s].kind == EmbKind::Real && real_sign(F, x, s) <= 0) return false;
  return true;
}

OFpElement uniformizer_power(const NumberFieldData& F, const std::vector<int>& n) {
  if (n.size() != F.primes.size()) throw Error(Err::InvalidInput, "modulus has the wrong number of primes");
  OFpElement r;
  for (size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 0) throw Error(Err::InvalidInput, "negative modulus exponent");
    r.push_back(F.primes[i].pi.pow(n[i]));
  }
  return r;
}

PAdicElement lift_rational_part(const PAdicElement& a, const Ctx& L) {
  const Ctx& c = a.ctx();
  if (c->e != 1 || c->fdeg != 1) throw Error(Err::InvalidInput, "only Q_p elements can be lifted");
  if (c->p != L->p) throw Error(Err::ContextMismatch, "different primes");
  int eL = L->e;
  if (a.is_zero()) return PAdicElement::zero(L, a.precision() >= PAdicElement::kInf / eL ? L->N : a.precision() * eL);
  int64_t u = a.unit()[0];
  PAdicElement r = PAdicElement::from_int(L, u).truncate(a.relprec() * eL);
  if (eL == 1) return r.shift(a.valuation());
  PAdicElement pv = PAdicElement::from_int(L, c->p).pow(std::abs(a.valuation()));
  return a.valuation() >= 0 ? r * pv : r / pv;
}

PAdicElement scalar_image(const NumberFieldData& F, const OFpElement& x, const std::vector<int64_t>& m,
                          const Ctx& L) {
  if (int(m.size()) != F.d) throw Error(Err::InvalidInput, "exponent vector has the wrong length");
  PAdicElement r = PAdicElement::from_int(L, 1);
  for (size_t i = 0; i < F.primes.size(); ++i) {
    auto& lp = F.primes[i];
    for (int s : lp.sigmas) {
      if (m[s] == 0) continue;
      if (lp.e * lp.f != 1) throw Error(Err::InvalidInput, "scalar image needs e = f = 1 at " + lp.label);
      r = r * lift_rational_part(x[i], L).pow(m[s]);
    }
  }
  return r;
}

PAdicElement local_norm(const PAdicElement& a) {
  const Ctx& c = a.ctx();
  int n = c->e * c->fdeg;
  int qprec = (a.precision() + c->e - 1) / c->e;
  Ctx Q = make_qp(c->p, std::max(1, std::min(qprec + 2, c->K)));
  if (n == 1) {
    if (a.is_zero()) return PAdicElement::zero(Q, qprec);
    return PAdicElement::from_int(Q, a.unit()[0]).truncate(a.relprec()).shift(a.valuation());
  }
  // scale by a power of p to an integral element, take det of multiplication, rescale
  int sh = 0;
  if (!a.is_zero() && a.valuation() < 0) sh = (-a.valuation() + c->e - 1) / c->e;
  PAdicElement b = a.shift(sh * c->e) * PAdicElement::from_int(c, 1);
  int prec_int = b.precision() / c->e;
  std::vector<std::vector<PAdicElement>> M(n, std::vector<PAdicElement>(n));
  for (int j = 0; j < n; ++j) {
    Digits e(n, 0);
    e[j] = 1;
    Digits col = (b * PAdicElement::from_coeffs(c, e, 0, c->N)).raw();
    for (int i = 0; i < n; ++i) M[i][j] = PAdicElement::from_int(Q, col[i]).truncate(prec_int);
  }
  PAdicElement det = PAdicElement::from_int(Q, 1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!M[r][col].is_zero() && (piv < 0 || M[r][col].valuation() < M[piv][col].valuation())) piv = r;
    if (piv < 0) return PAdicElement::zero(Q, 0);
    if (piv != col) {
      std::swap(M[piv], M[col]);
      det = -det;
    }
    det = det * M[col][col];
    PAdicElement inv = M[col][col].inverse();
    for (int r = col + 1; r < n; ++r) {
      PAdicElement f = M[r][col] * inv;
      for (int k = col; k < n; ++k) M[r][k] -= f * M[col][k];
    }
  }
  if (sh) det = det.shift(-sh * n);
  return det;
}

}  // namespace padicl
