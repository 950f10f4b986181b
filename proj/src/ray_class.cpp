#include "padicl/ray_class.hpp"

#include <algorithm>
#include <set>

namespace padicl {

Residue residue_of(const NumberFieldData& F, const FieldElt& x, const std::vector<int64_t>& mods) {
  Residue r(mods.size(), 0);
  OFpElement loc = embed_global(F, x);
  for (size_t i = 0; i < mods.size(); ++i) {
    if (mods[i] == 1) continue;
    if (loc[i].is_zero() || loc[i].valuation() != 0) throw Error(Err::NotCoprime, "element not coprime to p");
    int n = valuation_int(mods[i], F.p);
    r[i] = loc[i].to_int_mod(n);
  }
  return r;
}

int RayClassGroup::index_of(const Residue& r) const {
  int64_t idx = 0;
  for (size_t i = 0; i < mods.size(); ++i) idx = idx * mods[i] + ((r[i] % mods[i]) + mods[i]) % mods[i];
  return int(idx);
}

Residue RayClassGroup::reduce(const Residue& r) const {
  Residue o(r.size());
  for (size_t i = 0; i < r.size(); ++i) o[i] = ((r[i] % mods[i]) + mods[i]) % mods[i];
  return o;
}

Residue RayClassGroup::mul(const Residue& a, const Residue& b) const {
  Residue o(a.size());
  for (size_t i = 0; i < a.size(); ++i) o[i] = int64_t((__int128(a[i]) * b[i]) % mods[i]);
  return reduce(o);
}

Residue RayClassGroup::inv(const Residue& a) const {
  Residue o(a.size());
  for (size_t i = 0; i < a.size(); ++i) o[i] = mods[i] == 1 ? 0 : mod_inv(a[i], mods[i]);
  return o;
}

int RayClassGroup::class_of_residue(const Residue& r) const {
  Residue rr = reduce(r);
  for (size_t i = 0; i < rr.size(); ++i)
    if (mods[i] > 1 && rr[i] % F->p == 0) throw Error(Err::NotCoprime, "residue not a unit");
  // map the full residue index to the position in units_mod
  int64_t idx = 0;
  for (size_t i = 0; i < mods.size(); ++i) idx = idx * mods[i] + rr[i];
  int ci = class_index.at(size_t(idx));
  if (ci < 0) throw Error(Err::NotCoprime, "residue not a unit");
  return ci;
}

int RayClassGroup::class_of_idele(const FieldElt& alpha, const Residue& u) const {
  Residue a = residue_of(*F, alpha, mods);
  return class_of_residue(mul(inv(a), u));
}

std::vector<int64_t> RayClassGroup::invariant_factors() const {
  int n = order();
  if (n == 1) return {};
  // class of the identity
  Residue one(mods.size(), 1);
  int e = class_of_residue(reduce(one));
  auto cls_pow = [&](int y, int64_t k) {
    Residue base = units_mod[classes[y][0]];
    Residue r = reduce(one);
    for (int64_t i = 0; i < k; ++i) r = mul(r, base);
    return class_of_residue(r);
  };
  std::vector<std::pair<int64_t, std::vector<int>>> primary;  // prime -> exponents
  int64_t m = n;
  for (int64_t l = 2; l <= m; ++l) {
    if (m % l) continue;
    int a = 0;
    while (m % l == 0) {
      m /= l;
      ++a;
    }
    // counts c_k = #{x : x^{l^k} = 1}; number of cyclic factors with exponent >= k is log_l(c_k / c_{k-1})
    std::vector<int> ge;
    int64_t prev = 1, lk = 1;
    for (int k = 1; k <= a; ++k) {
      lk *= l;
      int64_t cnt = 0;
      for (int y = 0; y < n; ++y)
        if (cls_pow(y, lk) == e) ++cnt;
      int64_t ratio = cnt / prev;
      int r = 0;
      while (ratio > 1) {
        ratio /= l;
        ++r;
      }
      ge.push_back(r);
      prev = cnt;
    }
    std::vector<int> exps;
    for (int k = 0; k < a; ++k) {
      int next = k + 1 < a ? ge[k + 1] : 0;
      for (int t = 0; t < ge[k] - next; ++t) exps.push_back(k + 1);
    }
    std::sort(exps.rbegin(), exps.rend());
    primary.push_back({l, exps});
  }
  size_t len = 0;
  for (auto& pr : primary) len = std::max(len, pr.second.size());
  std::vector<int64_t> inv(len, 1);
  for (auto& [l, ex] : primary)
    for (size_t i = 0; i < ex.size(); ++i)
      for (int t = 0; t < ex[i]; ++t) inv[i] *= l;
  std::sort(inv.begin(), inv.end());
  return inv;
}

namespace {

void fill_group(RayClassGroup& G) {
  const NumberFieldData& F = *G.F;
  int64_t total = 1;
  for (auto m : G.mods) total *= m;
  if (total > 200000) throw Error(Err::LevelUnsupported, "modulus too large for enumeration");
  G.class_index.assign(size_t(total), -1);
  G.units_mod.clear();
  std::vector<int> pos(size_t(total), -1);
  for (int64_t idx = 0; idx < total; ++idx) {
    Residue r(G.mods.size());
    int64_t t = idx;
    bool unit = true;
    for (int i = int(G.mods.size()) - 1; i >= 0; --i) {
      r[i] = t % G.mods[i];
      t /= G.mods[i];
      if (G.mods[i] > 1 && r[i] % F.p == 0) unit = false;
    }
    if (!unit) continue;
    pos[size_t(idx)] = int(G.units_mod.size());
    G.units_mod.push_back(r);
  }
  // image of the totally positive units
  std::set<int> img;
  Residue one(G.mods.size(), 1);
  one = G.reduce(one);
  img.insert(G.index_of(one));
  std::vector<Residue> gens;
  for (auto& u : F.pos_units) gens.push_back(residue_of(F, u, G.mods));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(img.begin(), img.end());
    for (int c : cur)
      for (auto& g : gens) {
        int k = G.index_of(G.mul(G.units_mod[pos[size_t(c)]], g));
        if (img.insert(k).second) grew = true;
      }
  }
  G.unit_image.clear();
  for (int c : img) G.unit_image.push_back(G.units_mod[pos[size_t(c)]]);
  // cosets
  G.classes.clear();
  std::vector<int> cls(G.units_mod.size(), -1);
  for (size_t i = 0; i < G.units_mod.size(); ++i) {
    if (cls[i] >= 0) continue;
    std::vector<int> members;
    for (auto& h : G.unit_image) {
      int k = pos[size_t(G.index_of(G.mul(G.units_mod[i], h)))];
      if (cls[size_t(k)] < 0) {
        cls[size_t(k)] = int(G.classes.size());
        members.push_back(k);
      }
    }
    std::sort(members.begin(), members.end());
    G.classes.push_back(members);
  }
  for (int64_t idx = 0; idx < total; ++idx)
    if (pos[size_t(idx)] >= 0) G.class_index[size_t(idx)] = cls[size_t(pos[size_t(idx)])];
}

void find_representatives(RayClassGroup& G) {
  const NumberFieldData& F = *G.F;
  int n = G.order();
  G.reps.assign(n, FieldElt{});
  G.rep_residue.assign(n, Residue{});
  int found = 0;
  for (int H = 1; H <= 400 && found < n; ++H) {
    // all vectors with max |c_i| == H, in a fixed order
    std::vector<int64_t> c(F.d, -H);
    while (true) {
      int64_t mx = 0;
      for (auto v : c) mx = std::max<int64_t>(mx, v < 0 ? -v : v);
      if (mx == H) {
        FieldElt x;
        x.c = c;
        bool ok = is_totally_positive(F, x);
        if (ok) {
          OFpElement loc = embed_global(F, x);
          for (auto& l : loc)
            if (l.is_zero() || l.valuation() != 0) ok = false;
        }
        if (ok) {
          Residue r = G.inv(residue_of(F, x, G.mods));
          int y = G.class_of_residue(r);
          if (G.reps[y].c.empty()) {
            G.reps[y] = x;
            G.rep_residue[y] = G.reduce(r);
            ++found;
          }
        }
      }
      int i = 0;
      while (i < F.d && c[i] == H) c[i++] = -H;
      if (i == F.d) break;
      ++c[i];
    }
  }
  if (found < n) throw Error(Err::FieldInconsistent, "could not find class representatives");
}

}  // namespace

RayClassGroup build_ray_class_group(const NumberFieldData& F, const std::vector<int>& exps) {
  if (F.primes.empty()) throw Error(Err::PreconditionFailed, "field has no local data; call set_prime");
  if (exps.size() != F.primes.size()) throw Error(Err::InvalidInput, "modulus must give one exponent per prime above p");
  if (F.narrow_h != 1) throw Error(Err::LevelUnsupported, "narrow class number > 1 is not supported");
  RayClassGroup G;
  G.F = &F;
  G.exps = exps;
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0) throw Error(Err::InvalidInput, "negative modulus exponent");
    if (exps[i] > 0 && (F.primes[i].e != 1 || F.primes[i].f != 1))
      throw Error(Err::LevelUnsupported, "ray classes need e = f = 1 at " + F.primes[i].label);
    if (exps[i] > F.N) throw Error(Err::PrecisionInsufficient, "modulus exponent beyond field precision");
    int64_t m = 1;
    for (int k = 0; k < exps[i]; ++k) m *= F.p;
    G.mods.push_back(m);
  }
  fill_group(G);
  find_representatives(G);
  return G;
}

RayClassGroup alternate_table(const RayClassGroup& G, int64_t shift) {
  RayClassGroup H = G;
  int64_t step = 1;
  for (auto m : G.mods) step = std::max(step, m);
  if (step == 1) step = G.F->p;
  for (int y = 0; y < H.order(); ++y) {
    FieldElt a = H.reps[y];
    a.c[0] += shift * step;
    if (!is_totally_positive(*G.F, a)) throw Error(Err::InvalidInput, "shifted representative not totally positive");
    if (G.class_of_idele(a, Residue(G.mods.size(), 1)) != y)
      throw Error(Err::FieldInconsistent, "shifted representative changed class");
    H.reps[y] = a;
  }
  return H;
}

std::vector<Residue> compatible_representatives(const RayClassGroup& Gf, int prime_index) {
  const NumberFieldData& F = *Gf.F;
  for (auto e : Gf.exps)
    if (e < 1) throw Error(Err::ConductorIncompatible, "modulus must be divisible by every prime above p");
  std::vector<int> e2 = Gf.exps;
  e2.at(size_t(prime_index)) += 1;
  RayClassGroup G2 = build_ray_class_group(F, e2);
  // residues mod fP congruent to 1 mod f
  std::vector<Residue> U;
  for (auto& r : G2.units_mod) {
    bool ok = true;
    for (size_t i = 0; i < r.size(); ++i)
      if (r[i] % Gf.mods[i] != 1 % Gf.mods[i]) ok = false;
    if (ok) U.push_back(r);
  }
  std::vector<Residue> E;
  for (auto& h : G2.unit_image) {
    bool ok = true;
    for (size_t i = 0; i < h.size(); ++i)
      if (h[i] % Gf.mods[i] != 1 % Gf.mods[i]) ok = false;
    if (ok) E.push_back(h);
  }
  std::vector<Residue> out;
  std::set<int> used;
  for (auto& u : U) {
    if (used.count(G2.index_of(u))) continue;
    out.push_back(u);
    for (auto& e : E) used.insert(G2.index_of(G2.mul(u, e)));
  }
  // full and duplicate free
  std::set<int> seen;
  for (int y = 0; y < Gf.order(); ++y)
    for (auto& u : out) seen.insert(G2.class_of_idele(Gf.reps[y], u));
  if (int(seen.size()) != G2.order() || int(out.size()) * Gf.order() != G2.order())
    throw Error(Err::FieldInconsistent, "compatible representatives do not cover Cl^+(fP)");
  return out;
}

int project_class(const RayClassGroup& fine, int y, const RayClassGroup& coarse) {
  for (size_t i = 0; i < fine.mods.size(); ++i)
    if (fine.mods[i] % coarse.mods[i] != 0) throw Error(Err::InvalidInput, "moduli do not divide");
  return coarse.class_of_residue(fine.units_mod[fine.classes[y][0]]);
}

RepFactorization factor_representatives(const RayClassGroup& G, const FieldElt& alpha, const FieldElt& alpha2) {
  const NumberFieldData& F = *G.F;
  RepFactorization r;
  r.gamma_num = alpha2;
  r.gamma_den = alpha;
  OFpElement a = embed_global(F, alpha), b = embed_global(F, alpha2);
  for (size_t i = 0; i < a.size(); ++i) r.u.push_back(a[i] / b[i]);
  // r = alpha / alpha' at infinity: totally positive iff alpha * alpha' is
  r.r_totally_positive = is_totally_positive(F, F.mul(alpha, alpha2));
  return r;
}

}  // namespace padicl
