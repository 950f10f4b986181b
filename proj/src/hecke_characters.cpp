#include "padicl/hecke_characters.hpp"

#include <cmath>
#include <json.hpp>
#include <numeric>

namespace padicl {

bool is_admissible_infinity_type(const NumberFieldData& F, const InfinityType& r) {
  if (int(r.size()) != F.d) throw Error(Err::InvalidInput, "infinity type has the wrong length");
  std::vector<FieldElt> units = F.fundamental_units;
  units.push_back(F.torsion_gen);
  int bound = 2 * F.torsion_order * 12;
  for (auto& u : units) {
    // eps^r through the complex embeddings, in log-polar form
    long double logabs = 0, arg = 0;
    for (int s = 0; s < F.d; ++s) {
      auto z = F.embed_complex(u, s);
      logabs += (long double)r[s] * std::log(std::abs(z));
      arg += (long double)r[s] * std::arg(z);
    }
    if (std::fabs(logabs) > 1e-9L) return false;
    bool root = false;
    for (int n = 1; n <= bound && !root; ++n) {
      long double t = arg * n / (2 * M_PIl);
      if (std::fabs(t - std::round(t)) < 1e-9L) root = true;
    }
    if (!root) return false;
  }
  return true;
}

Rational bracket(const NumberFieldData& F, const InfinityType& r) {
  if (int(r.size()) != F.d) throw Error(Err::InvalidInput, "infinity type has the wrong length");
  int64_t s = r[0] + r[F.conj[0]];
  for (int i = 1; i < F.d; ++i)
    if (r[i] + r[F.conj[i]] != s) throw Error(Err::NotParallel, "r + cr is not parallel");
  return make_rational(s, 2);
}

int64_t primitive_root_mod(int64_t p, int n) {
  if (p == 2) throw Error(Err::InvalidInput, "(Z/2^n)^x is not cyclic in general");
  int64_t m = 1;
  for (int i = 0; i < n; ++i) m *= p;
  int64_t phi = m / p * (p - 1);
  std::vector<int64_t> fac;
  int64_t t = phi;
  for (int64_t q = 2; q * q <= t; ++q)
    if (t % q == 0) {
      fac.push_back(q);
      while (t % q == 0) t /= q;
    }
  if (t > 1) fac.push_back(t);
  for (int64_t g = 2; g < m; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (auto q : fac)
      if (mod_pow(g, phi / q, m) == 1) ok = false;
    if (ok) return g;
  }
  return 1;
}

PAdicElement root_of_unity(const Ctx& L, int64_t m) {
  int64_t p = L->p;
  int a = 0;
  int64_t mp = m;
  while (mp % p == 0) {
    mp /= p;
    ++a;
  }
  if ((p - 1) % mp != 0) throw Error(Err::InvalidInput, "root of unity order not supported by the residue field");
  PAdicElement w = p == 2 ? PAdicElement::from_int(L, 1) : teichmuller(primitive_root_mod(p, 1), L);
  PAdicElement z = w.pow((p - 1) / mp);
  if (a > 0) z = z * zeta_pn(L, a);
  return z;
}

PAdicElement HeckeCharacter::chi(const Residue& b) const {
  PAdicElement v = PAdicElement::from_int(L, 1);
  for (size_t i = 0; i < mods.size(); ++i) {
    if (mods[i] == 1) continue;
    int64_t x = ((b[i] % mods[i]) + mods[i]) % mods[i];
    int64_t k = dlog[i][size_t(x)];
    if (k < 0) throw Error(Err::NotCoprime, "character evaluated at a non-unit");
    v = v * gen_value[i].pow(k);
  }
  return v;
}

PAdicElement HeckeCharacter::chi_global(const FieldElt& x) const { return chi(residue_of(*F, x, mods)); }

int HeckeCharacter::eps_of(const FieldElt& x) const {
  int s = 1, k = 0;
  for (int i = 0; i < F->d; ++i) {
    if (F->emb[i].kind != EmbKind::Real) continue;
    if (real_sign(*F, x, i) < 0) s *= eps[size_t(k)];
    ++k;
  }
  return s;
}

PAdicElement HeckeCharacter::power_r(const FieldElt& x) const { return scalar_image(*F, embed_global(*F, x), r, L); }

PAdicElement HeckeCharacter::power_r_local(const OFpElement& x) const { return scalar_image(*F, x, r, L); }

PAdicElement HeckeCharacter::ideal_value(const FieldElt& alpha) const {
  PAdicElement v = chi_global(alpha) * power_r(alpha);
  if (eps_of(alpha) < 0) v = -v;
  return v.inverse();
}

PAdicElement HeckeCharacter::eps_phi_f(const FieldElt& alpha) const { return ideal_value(alpha); }

bool HeckeCharacter::is_trivial_finite() const {
  PAdicElement one = PAdicElement::from_int(L, 1);
  for (auto& v : gen_value)
    if (!v.equals(one)) return false;
  return true;
}

bool HeckeCharacter::is_primitive() const {
  PAdicElement one = PAdicElement::from_int(L, 1);
  for (size_t i = 0; i < mods.size(); ++i) {
    if (cond[i] == 0) continue;
    Residue b(mods.size(), 1);
    for (size_t k = 0; k < mods.size(); ++k) b[k] = 1 % mods[k];
    if (cond[i] == 1) {
      b[i] = gen[i];
    } else {
      b[i] = 1 + mods[i] / F->p;
    }
    if (chi(b).equals(one)) return false;
  }
  return true;
}

int HeckeCharacter::max_cond() const {
  int m = 0;
  for (int c : cond) m = std::max(m, c);
  return m;
}

HeckeCharacter make_character(const NumberFieldData& F, const std::vector<int>& cond, const InfinityType& r,
                              const std::vector<CharValueSpec>& values, const std::vector<int>& eps, int digits,
                              const std::string& id) {
  if (cond.size() != F.primes.size()) throw Error(Err::InvalidInput, "conductor needs one exponent per prime above p");
  if (int(r.size()) != F.d) throw Error(Err::InvalidInput, "infinity type has the wrong length");
  if (int(eps.size()) != F.r1) throw Error(Err::InvalidInput, "eps needs one sign per real place");
  if (values.size() != cond.size()) throw Error(Err::InvalidInput, "one generator value per prime above p");
  HeckeCharacter phi;
  phi.id = id;
  phi.F = &F;
  phi.cond = cond;
  phi.r = r;
  phi.eps = eps;
  int n = 0;
  for (int c : cond) n = std::max(n, c);
  int64_t p = F.p;
  int e = 1;
  for (int i = 1; i < n; ++i) e *= int(p);
  e *= int(p - 1);
  phi.L = n == 0 ? make_qp(p, digits) : make_cyclotomic(p, n, digits * e);
  for (size_t i = 0; i < cond.size(); ++i) {
    int64_t m = 1;
    for (int k = 0; k < cond[i]; ++k) m *= p;
    phi.mods.push_back(m);
    if (cond[i] > 0 && (F.primes[i].e != 1 || F.primes[i].f != 1))
      throw Error(Err::LevelUnsupported, "characters need e = f = 1 at ramified primes");
    int64_t g = cond[i] > 0 ? primitive_root_mod(p, cond[i]) : 1;
    phi.gen.push_back(g);
    int64_t grp = m / p * (p - 1);
    if (cond[i] == 0) grp = 1;
    if (values[i].order < 1 || grp % values[i].order != 0)
      throw Error(Err::InvalidInput, "value order does not divide the group order");
    phi.spec.push_back(values[i]);
    phi.gen_value.push_back(root_of_unity(phi.L, values[i].order).pow(values[i].exponent));
    std::vector<int64_t> tab(size_t(m), -1);
    if (m > 1) {
      int64_t x = 1;
      for (int64_t k = 0; k < grp; ++k) {
        tab[size_t(x)] = k;
        x = int64_t(__int128(x) * g % m);
      }
    } else {
      tab[0] = 0;
    }
    phi.dlog.push_back(tab);
  }
  // well defined on Cl^+(f): trivial on totally positive units
  PAdicElement one = PAdicElement::from_int(phi.L, 1);
  for (auto& u : F.pos_units)
    if (!(phi.chi_global(u) * phi.power_r(u)).equals(one))
      throw Error(Err::ConductorIncompatible, "character is not trivial on a totally positive unit");
  // eps data agrees with phi(u) = 1 for all units
  std::vector<FieldElt> units = F.fundamental_units;
  units.push_back(F.torsion_gen);
  for (auto& u : units) {
    PAdicElement v = phi.chi_global(u) * phi.power_r(u);
    if (phi.eps_of(u) < 0) v = -v;
    if (!v.equals(one)) throw Error(Err::ConductorIncompatible, "eps data inconsistent with the unit relation");
  }
  return phi;
}

HeckeCharacter character_from_json(const NumberFieldData& F, const std::string& text, int digits) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    std::vector<CharValueSpec> vals;
    for (auto& v : j.at("values")) vals.push_back({v.at("order").get<int64_t>(), v.at("exponent").get<int64_t>()});
    return make_character(F, j.at("conductor").get<std::vector<int>>(), j.at("infinity_type").get<InfinityType>(),
                          vals, j.value("eps", std::vector<int>{}), digits, j.value("id", std::string()));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(Err::ConfigError, std::string("malformed character: ") + ex.what());
  }
}

PAdicElement p_adic_avatar(const HeckeCharacter& phi, const FieldElt& alpha, const OFpElement& u) {
  Residue b(phi.mods.size());
  for (size_t i = 0; i < phi.mods.size(); ++i) {
    if (phi.mods[i] == 1) {
      b[i] = 0;
      continue;
    }
    if (u[i].is_zero() || u[i].valuation() != 0) throw Error(Err::NotCoprime, "avatar needs a unit at p");
    b[i] = u[i].to_int_mod(phi.cond[i]);
  }
  return phi.ideal_value(alpha) * phi.chi(b) * phi.power_r_local(u);
}

PAdicElement phi_of_prime(const HeckeCharacter& phi, int i) {
  const NumberFieldData& F = *phi.F;
  if (phi.cond.at(size_t(i)) != 0) throw Error(Err::ConductorIncompatible, "prime divides the conductor");
  const FieldElt& pi = F.primes[size_t(i)].uniformizer;
  mpq_class nm = abs(F.norm(pi));
  mpq_class q = 1;
  for (int k = 0; k < F.primes[size_t(i)].f; ++k) q *= F.p;
  if (nm != q) throw Error(Err::InvalidInput, "declared uniformizer does not generate the prime");
  return phi.ideal_value(pi);
}

PAdicElement avatar_at_uniformizer(const HeckeCharacter& phi, int i) {
  const NumberFieldData& F = *phi.F;
  PAdicElement v = phi_of_prime(phi, i);
  auto& lp = F.primes[size_t(i)];
  for (int s : lp.sigmas) v = v * lift_rational_part(lp.pi, phi.L).pow(phi.r[size_t(s)]);
  return v;
}

DifferentIdele default_different(const NumberFieldData& F) { return {F.different, 0}; }

namespace {

PAdicElement sum_core(const HeckeCharacter& phi, const FieldElt* zeta, const DifferentIdele& d) {
  const NumberFieldData& F = *phi.F;
  const Ctx& L = phi.L;
  size_t np = phi.mods.size();
  // local residues of delta^{-1} w^{-n} (pi = p w) and zeta
  std::vector<int64_t> scale(np, 1), z(np, 1);
  OFpElement dl = embed_global(F, d.delta);
  OFpElement zl;
  if (zeta) zl = embed_global(F, *zeta);
  for (size_t i = 0; i < np; ++i) {
    if (phi.mods[i] == 1) continue;
    int n = phi.cond[i];
    PAdicElement w = F.primes[i].pi / PAdicElement::from_int(F.primes[i].ctx, F.p);
    PAdicElement s = w.pow(-n);
    if (d.ell == 0) {
      if (dl[i].is_zero() || dl[i].valuation() != 0) throw Error(Err::NotCoprime, "different idele not a unit at p");
      s = s / dl[i];
    }
    scale[i] = s.to_int_mod(n);
    if (zeta) z[i] = zl[i].is_zero() ? 0 : (zl[i].valuation() >= n ? 0 : zl[i].to_int_mod(n));
  }
  std::vector<PAdicElement> zp(np);
  for (size_t i = 0; i < np; ++i)
    if (phi.mods[i] > 1) zp[i] = zeta_pn(L, phi.cond[i]);
  PAdicElement total = PAdicElement::zero(L);
  // enumerate (O/f)^x
  int64_t count = 1;
  for (auto m : phi.mods) count *= m;
  for (int64_t idx = 0; idx < count; ++idx) {
    Residue b(np);
    int64_t t = idx;
    bool unit = true;
    for (int i = int(np) - 1; i >= 0; --i) {
      b[size_t(i)] = t % phi.mods[size_t(i)];
      t /= phi.mods[size_t(i)];
      if (phi.mods[size_t(i)] > 1 && b[size_t(i)] % F.p == 0) unit = false;
    }
    if (!unit) continue;
    PAdicElement term = phi.chi(b);
    for (size_t i = 0; i < np; ++i) {
      if (phi.mods[i] == 1) continue;
      int64_t m = phi.mods[i];
      int64_t c = int64_t(__int128(b[i]) * scale[i] % m * z[i] % m);
      term = term * zp[i].pow((m - c) % m);
    }
    total += term;
  }
  PAdicElement pre = phi.power_r(d.delta);
  if (phi.eps_of(d.delta) < 0) pre = -pre;
  if (d.ell != 0) pre = pre * phi.chi_global(d.delta);
  return pre * total;
}

}  // namespace

PAdicElement gauss_sum(const HeckeCharacter& phi, const DifferentIdele& d) { return sum_core(phi, nullptr, d); }
PAdicElement gauss_sum(const HeckeCharacter& phi) { return gauss_sum(phi, default_different(*phi.F)); }

PAdicElement twisted_gauss_sum(const HeckeCharacter& phi, const FieldElt& zeta, const DifferentIdele& d) {
  return sum_core(phi, &zeta, d);
}
PAdicElement twisted_gauss_sum(const HeckeCharacter& phi, const FieldElt& zeta) {
  return twisted_gauss_sum(phi, zeta, default_different(*phi.F));
}

}  // namespace padicl
