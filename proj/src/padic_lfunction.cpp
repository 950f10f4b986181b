#include "padicl/padic_lfunction.hpp"

#include <numeric>

namespace padicl {

namespace {

LocalMatrix lm(const Ctx& c, int64_t a, int64_t b, int64_t cc, int64_t d) { return local_matrix(c, a, b, cc, d); }

void require_q(const NumberFieldData& F) {
  if (F.d != 1) throw Error(Err::InvalidInput, "evaluation maps are implemented over Q");
}

PAdicElement to_L(const PAdicElement& x, const Ctx& L) { return lift_rational_part(x, L); }

int64_t rep_integer(const FieldElt& a) {
  if (a.den != 1 || a.c.size() != 1 || a.c[0] <= 0) throw Error(Err::InvalidInput, "representative must be a positive integer");
  return a.c[0];
}

// infinity type r = j + v with 0 <= j <= k
int critical_j(const HeckeCharacter& phi, const Weight& w) {
  int64_t j = phi.r[0] - w.v[0];
  if (j < 0 || j > w.k[0]) throw Error(Err::NotCritical, "infinity type outside the critical range");
  return int(j);
}

}  // namespace

int64_t modulus_generator(const RayClassGroup& G) {
  require_q(*G.F);
  return G.mods[0];
}

int64_t inverse_rep(int64_t a, int64_t f0, int64_t b_lift) {
  if (f0 == 1) return b_lift;
  return mod_inv(((a % f0) + f0) % f0, f0) + b_lift * f0;
}

MomentDistribution coset_distribution(const DistSymbol& psi, int64_t f0, int64_t b) {
  const SymbolSpace& S = *psi.S;
  if (f0 % S.p != 0) throw Error(Err::ConductorIncompatible, "modulus must be divisible by p");
  int64_t g = std::gcd(b, f0);
  auto D = psi.S->divisor(Cusp{b / g, f0 / g}, Cusp{1, 0});
  auto mu = evaluate(psi, D);
  return act_D(mu, lm(mu.ctx, 1, b, 0, f0)).truncated();
}

MomentDistribution ev_overconvergent(const DistSymbol& psi, int64_t f0, int64_t a, int64_t b_lift) {
  const SymbolSpace& S = *psi.S;
  if (f0 % S.p != 0) throw Error(Err::ConductorIncompatible, "modulus must be divisible by p");
  int64_t b = inverse_rep(a, f0, b_lift);
  int64_t g = std::gcd(b, f0);
  auto D = S.divisor(Cusp{b / g, f0 / g}, Cusp{1, 0});
  auto mu = evaluate(psi, D);
  return act_D(mu, lm(mu.ctx, a * b, 1, a * f0, 0)).truncated();
}

PAdicElement ev_classical_2(const ClassicalSymbol& phi, int64_t f0, int j, int64_t a, int64_t b_lift) {
  int64_t k = phi.w.k[0];
  if (j < 0 || j > k) throw Error(Err::InvalidInput, "j out of range");
  const SymbolSpace& S = *phi.S;
  int64_t b = inverse_rep(a, f0, b_lift);
  int64_t g = std::gcd(b, f0);
  auto P = evaluate(phi, S.divisor(Cusp{b / g, f0 / g}, Cusp{1, 0}));
  const Ctx& c = P.ctx;
  return act_dual(P, lm(c, a * b, 1, a * f0, 0)).val[size_t(j)];
}

PAdicElement ev_classical_1(const ClassicalSymbol& phi, int64_t f0, int j, int64_t a, int64_t b_lift) {
  int64_t k = phi.w.k[0];
  if (j < 0 || j > k) throw Error(Err::InvalidInput, "j out of range");
  const SymbolSpace& S = *phi.S;
  int64_t b = inverse_rep(a, f0, b_lift);
  int64_t g = std::gcd(b, f0);
  auto P = evaluate(phi, S.divisor(Cusp{b / g, f0 / g}, Cusp{1, 0}));
  const Ctx& c = P.ctx;
  // (ab/f0, 1; a, 0) has a rational entry; act through the integral matrix and rescale
  auto M = v_action_matrix_q(mpq_class(a * b, f0), 1, a, 0, k, phi.w.v[0]);
  PAdicElement s = PAdicElement::zero(c);
  for (size_t t = 0; t < M[size_t(j)].size(); ++t)
    if (M[size_t(j)][t] != 0) s += padic_from_mpq(c, M[size_t(j)][t]) * P.val[t];
  return s;
}

PAdicElement ev_phi(const ClassicalSymbol& phisym, const HeckeCharacter& phi, const RayClassGroup& G, int normalization,
                    int64_t b_lift) {
  require_q(*G.F);
  if (phi.cond[0] > G.exps[0]) throw Error(Err::ConductorIncompatible, "character conductor does not divide the modulus");
  int j = critical_j(phi, phisym.w);
  int64_t f0 = modulus_generator(G);
  const Ctx& L = phi.L;
  PAdicElement s = PAdicElement::zero(L);
  for (int y = 0; y < G.order(); ++y) {
    int64_t a = rep_integer(G.reps[size_t(y)]);
    PAdicElement e = normalization == 1 ? ev_classical_1(phisym, f0, j, a, b_lift)
                                        : ev_classical_2(phisym, f0, j, a, b_lift);
    s += phi.eps_phi_f(G.reps[size_t(y)]) * to_L(e, L);
  }
  return s;
}

UnramifiedIdentity unramified_extension_identity(const ClassicalSymbol& phisym, const HeckeCharacter& phi,
                                                 const EigenData& eig, const RayClassGroup& G1,
                                                 const RayClassGroup& Gp) {
  if (phi.cond[0] != 0) throw Error(Err::ConductorIncompatible, "the prime divides the conductor");
  if (G1.exps[0] != 0 || Gp.exps[0] != 1) throw Error(Err::InvalidInput, "expected the moduli (1) and (p)");
  const SymbolSpace& S = *phisym.S;
  const Ctx& c = phisym.val[0].ctx;
  PAdicElement lam = eig.lambda.at(0).to_context(c);
  if (!equals(act_hecke(phisym, S.p), scale(phisym, lam))) throw Error(Err::PreconditionFailed, "symbol is not a U_p eigensymbol");
  const Ctx& L = phi.L;
  UnramifiedIdentity r;
  r.lhs = ev_phi(phisym, phi, Gp, 1);
  r.rhs = (phi_of_prime(phi, 0) * to_L(lam, L) - PAdicElement::from_int(L, 1)) * ev_phi(phisym, phi, G1, 1);
  return r;
}

RayClassDistribution build_mu(const DistSymbol& psi, const EigenData& eig, const RayClassGroup& G, int64_t b_lift) {
  require_q(*G.F);
  if (G.exps[0] < 1) throw Error(Err::ConductorIncompatible, "modulus must be divisible by p");
  const Ctx& c = psi.val[0].ctx;
  RayClassDistribution mu;
  mu.psi = psi;
  mu.f0 = modulus_generator(G);
  mu.n = G.exps[0];
  mu.w = psi.val[0].w;
  PAdicElement lam = eig.lambda.at(0).to_context(c);
  mu.lambda_f = lam.pow(mu.n);
  mu.lambda_f_inv = mu.lambda_f.inverse();
  for (int y = 0; y < G.order(); ++y) {
    int64_t a = rep_integer(G.reps[size_t(y)]);
    int64_t b = inverse_rep(a, mu.f0, b_lift);
    mu.a.push_back(a);
    mu.b.push_back(b);
    mu.ev.push_back(ev_overconvergent(psi, mu.f0, a, b_lift));
    mu.coset.push_back(coset_distribution(psi, mu.f0, b));
  }
  return mu;
}

PAdicElement evaluate_mu(const RayClassDistribution& mu, const HeckeCharacter& phi) {
  if (phi.cond[0] > mu.n) throw Error(Err::ConductorIncompatible, "character conductor does not divide the modulus");
  const Weight& w = mu.w;
  critical_j(phi, w);
  const Ctx& L = phi.L;
  auto req = star_twist(w, PAdicElement::from_int(L, 1), phi.r);
  int m = int(req.exponent[0]);
  PAdicElement s = PAdicElement::zero(L);
  for (size_t y = 0; y < mu.a.size(); ++y)
    s += phi.eps_phi_f(FieldElt{{mu.a[y]}, 1}) * to_L(mu.ev[y].mom[size_t(m)], L);
  return to_L(mu.lambda_f_inv, L) * s;
}

PAdicElement mu_coset_monomial(const RayClassDistribution& mu, int64_t b, int m) {
  int64_t r = ((b % mu.f0) + mu.f0) % mu.f0;
  for (size_t y = 0; y < mu.b.size(); ++y)
    if (((mu.b[y] % mu.f0) + mu.f0) % mu.f0 == r) return mu.lambda_f_inv * mu.coset[y].mom[size_t(m)];
  throw Error(Err::NotCoprime, "coset is not a unit class");
}

PAdicElement interpolation_multiplier(const HeckeCharacter& phi, const EigenData& eig, const std::set<int>& B) {
  const Ctx& L = phi.L;
  PAdicElement z = PAdicElement::from_int(L, 1);
  for (int i : B) {
    if (phi.cond.at(size_t(i)) != 0) throw Error(Err::ConductorIncompatible, "ramified prime in the multiplier set");
    PAdicElement lam = to_L(eig.lambda.at(size_t(i)), L);
    z = z * avatar_at_uniformizer(phi, i) * (PAdicElement::from_int(L, 1) - (lam * phi_of_prime(phi, i)).inverse());
  }
  return z;
}

int interpolation_sign(const NumberFieldData& F, const Weight& w, const std::vector<int64_t>& j) {
  int64_t R = 0;
  for (int s = 0; s < F.d; ++s) {
    if (F.emb[size_t(s)].kind == EmbKind::Real) R += w.k[size_t(s)] + j[size_t(s)];
    else if (F.emb[size_t(s)].kind == EmbKind::Complex) R += w.k[size_t(s)];
  }
  return R % 2 == 0 ? 1 : -1;
}

}  // namespace padicl
