#include <doctest.h>

#include <random>

#include "padicl/padic_lfunction.hpp"

using namespace padicl;

namespace {

struct Fixture {
  NumberFieldData F;
  SymbolSpace S;
  ClassicalSpace V;
  EigenSymbolResult R;
  EigenData eig;
  DistSymbol psi;
  RayClassGroup G0, G1, G2;
  int64_t k = 0;
};

Fixture make_fixture(int64_t level, int64_t k, std::map<int64_t, int64_t> a_ell) {
  Fixture x{load_field(std::string(PADICL_CONFIG_DIR) + "/fields/Q.json"), build_symbol_space(level, 5), {}, {}, {}, {}, {}, {}, {}, k};
  set_prime(x.F, 5, 12);
  x.V = classical_space(x.S, k);
  x.R = eigensymbol(x.V, a_ell, make_qp(5, 16));
  x.eig = EigenData{{x.R.lambda}, {}};
  x.psi = iterate_control(naive_lift(x.R.theta, 12, 10), x.R.theta, x.eig).first;
  x.G0 = build_ray_class_group(x.F, {0});
  x.G1 = build_ray_class_group(x.F, {1});
  x.G2 = build_ray_class_group(x.F, {2});
  return x;
}

Fixture& fx55() {
  static Fixture f = make_fixture(55, 0, {{2, -2}, {3, -1}, {7, -2}});
  return f;
}

Fixture& fx35() {
  static Fixture f = make_fixture(35, 2, {{2, -1}, {3, -2}});
  return f;
}

std::vector<Fixture*> fixtures() { return {&fx55(), &fx35()}; }

// eps(-1) chi(-1) (-1)^j = 1 fixes the sign
HeckeCharacter character(const Fixture& x, int n, int64_t order, int64_t expo, int j) {
  int64_t chi_m1 = 1;
  if (n > 0) {
    // -1 = g^{phi(5^n)/2}; its value is zeta_order^{expo phi/2}
    int64_t half = (n == 1 ? 4 : 20) / 2;
    chi_m1 = ((expo * half) % order == 0) ? 1 : -1;
  }
  int sgn = int(chi_m1 * ((j % 2) ? -1 : 1));
  return make_character(x.F, {n}, {j}, {{order, expo}}, {sgn}, 12);
}

// phi({0} - {inf}) at X^j Y^{k-j}, read off directly
PAdicElement period_at_zero(const ClassicalSymbol& phi, int j) {
  auto P = evaluate(phi, phi.S->divisor(Cusp{0, 1}, Cusp{1, 0}));
  return P.val[size_t(phi.w.k[0] - j)];
}

}  // namespace

TEST_CASE("zero inputs give zero") {
  auto& x = fx55();
  auto z = x.psi;
  for (auto& mu : z.val) mu = MomentDistribution::zero(mu.w, mu.ctx, mu.M, mu.N);
  auto ev = ev_overconvergent(z, 5, 2);
  CHECK(ev.is_zero());
  auto mu = build_mu(z, x.eig, x.G1);
  auto chi = character(x, 1, 2, 1, 0);
  CHECK(evaluate_mu(mu, chi).is_zero());
  auto zc = classical_zero(x.S, x.R.theta.w, x.R.theta.val[0].ctx);
  CHECK(ev_classical_2(zc, 25, 0, 3).is_zero());
  CHECK_THROWS_AS(ev_classical_2(x.R.theta, 25, 1, 3), Error);
  CHECK_THROWS_AS(ev_overconvergent(x.psi, 7, 2), Error);
}

TEST_CASE("overconvergent evaluation commutes with specialisation") {
  for (auto* x : fixtures()) {
    for (auto* G : {&x->G1, &x->G2}) {
      int64_t f0 = modulus_generator(*G);
      for (int y = 0; y < G->order(); ++y) {
        int64_t a = G->reps[size_t(y)].c[0];
        auto ev = ev_overconvergent(x->psi, f0, a);
        for (int j = 0; j <= x->k; ++j) {
          CHECK(ev.mom[size_t(x->k - j)].equals(ev_classical_2(x->R.theta, f0, j, a)));
          auto e1 = ev_classical_1(x->R.theta, f0, j, a);
          CHECK(ev_classical_2(x->R.theta, f0, j, a).equals(e1 * PAdicElement::from_int(e1.ctx(), f0).pow(j)));
        }
      }
    }
  }
  // total mass at f = (p), a = 1, k = 0
  auto& x = fx55();
  CHECK(ev_overconvergent(x.psi, 5, 1).mom[0].equals(ev_classical_2(x.R.theta, 5, 0, 1)));
}

TEST_CASE("classical evaluation is linear") {
  auto& x = fx35();
  std::mt19937_64 rng(4);
  const Ctx& c = x.R.theta.val[0].ctx;
  for (int t = 0; t < 10; ++t) {
    auto s1 = PAdicElement::from_int(c, int64_t(rng() % 1000));
    auto s2 = PAdicElement::from_int(c, int64_t(rng() % 1000));
    auto comb = scale(x.R.plus, s1) + scale(x.R.minus, s2);
    int64_t a = 1 + int64_t(rng() % 24);
    if (a % 5 == 0) ++a;
    int j = int(rng() % 3);
    auto lhs = ev_classical_2(comb, 25, j, a);
    auto rhs = s1 * ev_classical_2(x.R.plus, 25, j, a) + s2 * ev_classical_2(x.R.minus, 25, j, a);
    CHECK(lhs.equals(rhs));
  }
}

TEST_CASE("mu is compatible across moduli") {
  for (auto* x : fixtures()) {
    auto mu1 = build_mu(x->psi, x->eig, x->G1);
    auto mu2 = build_mu(x->psi, x->eig, x->G2);
    int count = 0;
    for (int64_t b = 1; b < 5; ++b)
      for (int m = 0; m < 8; ++m) {
        auto lhs = mu_coset_monomial(mu1, b, m);
        auto rhs = PAdicElement::zero(lhs.ctx());
        for (int64_t t = 0; t < 5; ++t) rhs += mu_coset_monomial(mu2, b + 5 * t, m);
        CHECK(lhs.equals(rhs));
        ++count;
      }
    CHECK(count >= 20);
    for (int j = 0; j <= x->k; ++j) {
      auto triv = character(*x, 0, 1, 0, j);
      CHECK(evaluate_mu(mu1, triv).equals(evaluate_mu(mu2, triv)));
      for (auto [ord, e] : {std::pair<int64_t, int64_t>{2, 1}, {4, 1}, {4, 3}}) {
        auto chi = character(*x, 1, ord, e, j);
        CHECK(evaluate_mu(mu1, chi).equals(evaluate_mu(mu2, chi)));
      }
    }
  }
}

TEST_CASE("values do not depend on representatives") {
  for (auto* x : fixtures()) {
    for (auto* G : {&x->G1, &x->G2}) {
      auto H = alternate_table(*G, 3);
      auto muA = build_mu(x->psi, x->eig, *G);
      auto muB = build_mu(x->psi, x->eig, H, 2);
      for (int j = 0; j <= x->k; ++j)
        for (auto [ord, e] : {std::pair<int64_t, int64_t>{1, 0}, {2, 1}, {4, 1}}) {
          auto chi = character(*x, G->exps[0] == 1 ? 1 : 2, ord, e, j);
          if (ord == 1) chi = character(*x, 0, 1, 0, j);
          CHECK(evaluate_mu(muA, chi).equals(evaluate_mu(muB, chi)));
          CHECK(ev_phi(x->R.theta, chi, *G, 1).equals(ev_phi(x->R.theta, chi, H, 1, 1)));
          CHECK(ev_phi(x->R.theta, chi, *G, 2).equals(ev_phi(x->R.theta, chi, H, 2, 4)));
        }
    }
  }
}

TEST_CASE("interpolation at conductors p and p^2") {
  for (auto* x : fixtures()) {
    for (int n : {1, 2}) {
      auto& G = n == 1 ? x->G1 : x->G2;
      auto mu = build_mu(x->psi, x->eig, G);
      for (int j = 0; j <= x->k; ++j)
        for (auto [ord, e] : n == 1 ? std::vector<std::pair<int64_t, int64_t>>{{2, 1}, {4, 1}, {4, 3}}
                                    : std::vector<std::pair<int64_t, int64_t>>{{5, 1}, {10, 1}, {20, 1}, {20, 3}}) {
          auto chi = character(*x, n, ord, e, j);
          CHECK(chi.is_primitive());
          auto lamf = lift_rational_part(x->R.lambda, chi.L).pow(n);
          CHECK(evaluate_mu(mu, chi).equals(ev_phi(x->R.theta, chi, G, 2) / lamf));
        }
    }
  }
}

TEST_CASE("unramified multipliers") {
  for (auto* x : fixtures()) {
    auto mu = build_mu(x->psi, x->eig, x->G1);
    for (int j = 0; j <= x->k; ++j) {
      auto phi = character(*x, 0, 1, 0, j);
      const Ctx& L = phi.L;
      auto lam = lift_rational_part(x->R.lambda, L);
      auto one = PAdicElement::from_int(L, 1);
      auto period = lift_rational_part(period_at_zero(x->R.theta, j), L);
      // phi = |.|^j: 1 - p^j / lambda
      auto Z = one - PAdicElement::from_int(L, 5).pow(j) / lam;
      CHECK(interpolation_multiplier(phi, x->eig, {0}).equals(Z));
      CHECK(evaluate_mu(mu, phi).equals(Z * period));
      CHECK(ev_phi(x->R.theta, phi, x->G0, 1).equals(period));
      if (j == 0) CHECK(evaluate_mu(mu, phi).equals((one - lam.inverse()) * period));
      auto U = unramified_extension_identity(x->R.theta, phi, x->eig, x->G0, x->G1);
      CHECK(U.lhs.equals(U.rhs));
    }
    auto phi = character(*x, 0, 1, 0, 0);
    CHECK(interpolation_multiplier(phi, x->eig, {}).equals(PAdicElement::from_int(phi.L, 1)));
    auto chi = character(*x, 1, 2, 1, 0);
    CHECK_THROWS_AS(interpolation_multiplier(chi, x->eig, {0}), Error);
    CHECK_THROWS_AS(unramified_extension_identity(x->R.theta, chi, x->eig, x->G0, x->G1), Error);
    // a basis symbol is not a U_p eigensymbol
    auto stray = to_padic(x->S, x->k, x->V.basis[0], x->R.theta.val[0].ctx);
    CHECK_THROWS_AS(unramified_extension_identity(stray, phi, x->eig, x->G0, x->G1), Error);
  }
  // a forced trivial zero: lambda = phi(p)^{-1}
  auto& x = fx55();
  auto phi = character(x, 0, 1, 0, 0);
  EigenData one{{PAdicElement::from_int(x.R.lambda.ctx(), 1)}, {}};
  CHECK(interpolation_multiplier(phi, one, {0}).is_zero());
}

TEST_CASE("Weyl parity") {
  for (auto* x : fixtures()) {
    auto flipped = act_weyl(x->R.theta);
    for (int j = 0; j <= x->k; ++j)
      for (auto [ord, e] : {std::pair<int64_t, int64_t>{2, 1}, {4, 1}}) {
        auto chi = character(*x, 1, ord, e, j);
        int s = chi.eps[0];
        auto base = ev_phi(x->R.theta, chi, x->G1, 1);
        CHECK(ev_phi(flipped, chi, x->G1, 1).equals(base * PAdicElement::from_int(chi.L, s)));
        // the opposite sign component contributes nothing
        auto& wrong = s == 1 ? x->R.minus : x->R.plus;
        CHECK(ev_phi(wrong, chi, x->G1, 1).is_zero());
      }
  }
}

TEST_CASE("critical range and sign") {
  auto& x = fx55();
  auto mu = build_mu(x.psi, x.eig, x.G1);
  auto bad = make_character(x.F, {0}, {1}, {{1, 0}}, {-1}, 12);
  CHECK_THROWS_AS(evaluate_mu(mu, bad), Error);
  auto w = make_weight({2}, {0});
  CHECK(interpolation_sign(x.F, w, {1}) == -1);
  CHECK(interpolation_sign(x.F, w, {2}) == 1);
}
