#include "padicl/overconvergent_lift.hpp"

#include <algorithm>
#include <random>

namespace padicl {

namespace {

LocalMatrix lm(const Ctx& c, const IntMat& m) { return local_matrix(c, m.a, m.b, m.c, m.d); }

int min_valuation(const MomentDistribution& d) {
  int v = PAdicElement::kInf;
  for (size_t i = 0; i < d.mom.size(); ++i) {
    auto x = d.mom[i].truncate(d.profile(d.degree(i)));
    if (!x.is_zero()) v = std::min(v, x.valuation());
  }
  return v;
}

PAdicElement random_element(std::mt19937_64& rng, const Ctx& c, int prec) {
  int64_t bound = c->ppow[size_t(std::min(prec, c->K))];
  return PAdicElement::from_int(c, int64_t(rng() % uint64_t(bound))).truncate(prec);
}

}  // namespace

int lift_working_precision(int64_t p, int M, int N) {
  int extra = 0;
  for (int64_t q = p; q <= M; q *= p) ++extra;
  return N + 2 + extra;
}

std::vector<PAdicElement> solve_boundary(const std::vector<PAdicElement>& s, int count) {
  if (s.empty() || int(s.size()) < count + 1) throw Error(Err::InvalidInput, "boundary solve needs count + 1 moments");
  const Ctx& c = s[0].ctx();
  if (!s[0].is_zero()) throw Error(Err::PreconditionFailed, "boundary datum has nonzero total mass");
  auto B = bernoulli_plus(count + 1);
  std::vector<PAdicElement> W;
  for (int n = 0; n < count; ++n) {
    PAdicElement acc = PAdicElement::zero(c);
    for (int k = 0; k <= n + 1; ++k) {
      mpq_class coef = mpq_class(q_binom(n + 1, k)) * B[size_t(k)];
      if (coef == 0) continue;
      acc += padic_from_mpq(c, coef) * s[size_t(n + 1 - k)];
    }
    W.push_back(-(acc * padic_from_mpq(c, mpq_class(1, n + 1))));
  }
  return W;
}

DistSymbol naive_lift(const ClassicalSymbol& phi, int M, int N, uint64_t seed) {
  const SymbolSpace& S = *phi.S;
  const Weight& w = phi.w;
  if (w.d() != 1) throw Error(Err::InvalidInput, "distribution symbols are implemented over Q");
  int k = int(w.k[0]);
  if (M <= k + 1) throw Error(Err::InvalidInput, "need more than k + 1 moments");
  const Ctx& c0 = phi.val[0].ctx;
  int Nw = lift_working_precision(c0->p, M, N);
  Ctx c = with_precision(c0, Nw);
  int Mi = M + 2;
  std::mt19937_64 rng(seed);
  size_t G = size_t(S.num_gens());
  std::vector<MomentDistribution> v(G, MomentDistribution::zero(w, c, Mi, Nw));
  for (int g = 0; g < S.num_free(); ++g) {
    auto& mu = v[size_t(g)];
    for (int m = 0; m <= k; ++m) mu.mom[size_t(m)] = phi.val[size_t(g)].val[size_t(k - m)].to_context(c);
    if (seed != 0)
      for (int m = k + 1; m < Mi; ++m) mu.mom[size_t(m)] = random_element(rng, c, Nw);
  }
  std::vector<DistActionMatrix> D;
  for (int i = 0; i < S.num_free(); ++i) D.push_back(dist_action_matrix(w, lm(c, S.delta[size_t(i)]), Mi));
  auto boundary = [&]() {
    MomentDistribution s = MomentDistribution::zero(w, c, Mi, Nw);
    for (int i = 0; i < S.num_free(); ++i) s = s + (v[size_t(i)] - apply(D[size_t(i)], v[size_t(i)]));
    return s;
  };
  // moment k+1 of one free generator fixes W(k)
  PAdicElement target = phi.val[size_t(S.w_gen())].val[0].to_context(c);
  auto s = boundary();
  PAdicElement cur = solve_boundary(s.mom, k + 1)[size_t(k)];
  if (!(cur - target).is_zero()) {
    int best = -1, bv = PAdicElement::kInf;
    for (int i = 0; i < S.num_free(); ++i) {
      auto a = PAdicElement::from_int(c, 1) - D[size_t(i)].A[0][size_t(k + 1)][size_t(k + 1)];
      if (!a.is_zero() && a.valuation() < bv) {
        bv = a.valuation();
        best = i;
      }
    }
    if (best < 0) throw Error(Err::PrecisionInsufficient, "no generator can absorb the boundary correction");
    auto a = PAdicElement::from_int(c, 1) - D[size_t(best)].A[0][size_t(k + 1)][size_t(k + 1)];
    auto delta = (target - cur) * PAdicElement::from_int(c, -(k + 1)) / a;
    v[size_t(best)].mom[size_t(k + 1)] += delta;
    s = boundary();
  }
  auto W = solve_boundary(s.mom, Mi - 1);
  auto& wv = v[size_t(S.w_gen())];
  for (int m = 0; m < Mi - 1; ++m) wv.mom[size_t(m)] = W[size_t(m)];
  DistSymbol out;
  out.S = &S;
  for (auto& mu : v) {
    MomentDistribution t = MomentDistribution::zero(w, c, M, N);
    for (int m = 0; m < M; ++m) t.mom[size_t(m)] = mu.mom[size_t(m)];
    out.val.push_back(t.truncated());
  }
  return out;
}

int residual_valuation(const DistSymbol& a, const DistSymbol& b) {
  int v = PAdicElement::kInf;
  for (size_t i = 0; i < a.val.size(); ++i) v = std::min(v, min_valuation(a.val[i] - b.val[i]));
  return v;
}

int residual_valuation(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  int v = PAdicElement::kInf;
  for (size_t i = 0; i < a.val.size(); ++i)
    for (size_t j = 0; j < a.val[i].val.size(); ++j) {
      auto d = a.val[i].val[j] - b.val[i].val[j];
      if (!d.is_zero()) v = std::min(v, d.valuation());
    }
  return v;
}

std::pair<DistSymbol, LiftReport> iterate_control(const DistSymbol& psi0, const ClassicalSymbol& phi,
                                                  const EigenData& eig, int budget) {
  const SymbolSpace& S = *psi0.S;
  const auto& proto = psi0.val[0];
  const Ctx& c = proto.ctx;
  if (eig.lambda.size() != 1) throw Error(Err::InvalidInput, "one eigenvalue per prime above p");
  if (budget < 0) budget = proto.M + proto.N;
  PAdicElement lam = eig.lambda[0].to_context(c);
  if (lam.is_zero()) throw Error(Err::DivisionByZero, "zero eigenvalue");
  PAdicElement lam_inv = lam.inverse();
  auto U = compile(S.hecke_program(S.p), S, proto.w, c, proto.M);
  LiftReport R;
  DistSymbol psi = psi0;
  for (int it = 1; it <= budget; ++it) {
    DistSymbol next = scale(apply(U, psi), lam_inv);
    bool meets = true;
    for (auto& mu : next.val) meets = meets && mu.meets_profile();
    bool same = equals(next, psi);
    psi = next;
    R.iterations = it;
    if (same && meets) {
      R.converged = true;
      break;
    }
  }
  if (!R.converged) throw Error(Err::NonConvergence, "lift did not stabilise within " + std::to_string(budget) + " iterations");
  int margin = PAdicElement::kInf;
  for (auto& mu : psi.val) margin = std::min(margin, mu.precision_margin());
  R.filtration_depth = proto.N + std::min(margin, 0);
  R.specialisation_residual = residual_valuation(specialise(psi), phi);
  DistSymbol up = apply(U, psi);
  R.eigen_residual.push_back(residual_valuation(up, scale(psi, lam)));
  R.relation_residual = min_valuation(relation_residual(psi));
  return {psi, R};
}

}  // namespace padicl
