#include <doctest.h>

#include <random>
#include <set>
#include <tuple>

#include "padicl/hecke_characters.hpp"

using namespace padicl;

namespace {

NumberFieldData field(const std::string& id, int64_t p, int N) {
  auto F = load_field(std::string(PADICL_CONFIG_DIR) + "/fields/" + id + ".json");
  set_prime(F, p, N);
  return F;
}

// character mod p^n over Q by brute-force discrete logs
PAdicElement brute_chi(const HeckeCharacter& phi, int64_t b) {
  int64_t m = phi.mods[0];
  b = ((b % m) + m) % m;
  int64_t g = 2;
  while (true) {
    std::set<int64_t> seen;
    int64_t x = 1;
    do {
      seen.insert(x);
      x = x * g % m;
    } while (x != 1);
    if (int64_t(seen.size()) == m / phi.F->p * (phi.F->p - 1)) break;
    ++g;
  }
  int64_t x = 1, k = 0;
  while (x != b) {
    x = x * g % m;
    ++k;
  }
  return phi.gen_value[0].pow(k);
}

PAdicElement brute_gauss_Q(const HeckeCharacter& phi) {
  int64_t m = phi.mods[0];
  auto z = zeta_pn(phi.L, phi.cond[0]);
  PAdicElement s = PAdicElement::zero(phi.L);
  for (int64_t b = 1; b < m; ++b)
    if (b % phi.F->p) s += brute_chi(phi, b) * z.pow(m - b);
  return s;
}

}  // namespace

TEST_CASE("roots of unity have exact order") {
  auto L = make_cyclotomic(3, 2, 24);
  auto one = PAdicElement::from_int(L, 1);
  for (int64_t m : {1, 2, 3, 6, 9, 18}) {
    auto z = root_of_unity(L, m);
    CHECK(z.pow(m).equals(one));
    for (int64_t d = 1; d < m; ++d)
      if (m % d == 0) CHECK(!z.pow(d).equals(one));
  }
  CHECK(primitive_root_mod(5, 1) == 2);
  CHECK(primitive_root_mod(3, 2) == 2);
  CHECK(primitive_root_mod(7, 1) == 3);
}

TEST_CASE("finite part is multiplicative and agrees with brute force") {
  auto F = field("Q", 3, 10);
  auto phi = make_character(F, {2}, {0}, {{6, 1}}, {-1}, 6);
  for (int64_t a = 1; a < 9; ++a)
    for (int64_t b = 1; b < 9; ++b) {
      if (a % 3 == 0 || b % 3 == 0) continue;
      CHECK(phi.chi({a * b % 9}).equals(phi.chi({a}) * phi.chi({b})));
      CHECK(phi.chi({a}).equals(brute_chi(phi, a)));
    }
  CHECK(phi.is_primitive());
  auto sq = make_character(F, {2}, {0}, {{2, 1}}, {-1}, 6);
  CHECK(!sq.is_primitive());
}

TEST_CASE("unit relations reject inconsistent data") {
  auto F = field("Q", 5, 10);
  // quadratic mod 5 is even; an odd sign must fail
  CHECK_NOTHROW(make_character(F, {1}, {0}, {{2, 1}}, {1}, 6));
  try {
    make_character(F, {1}, {0}, {{2, 1}}, {-1}, 6);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Err::ConductorIncompatible);
  }
  auto Fi = field("Qi", 5, 10);
  CHECK_NOTHROW(make_character(Fi, {1, 0}, {1, 0}, {{4, 3}, {1, 0}}, {}, 6));
  CHECK_THROWS_AS(make_character(Fi, {1, 0}, {1, 0}, {{4, 1}, {1, 0}}, {}, 6), Error);
}

TEST_CASE("Gauss sums over Q against direct summation") {
  for (auto [p, n, ord, ex, eps] : std::vector<std::tuple<int64_t, int, int64_t, int64_t, int>>{
           {3, 1, 2, 1, -1}, {5, 1, 4, 1, -1}, {5, 1, 2, 1, 1}, {3, 2, 6, 1, -1}, {3, 2, 6, 5, -1}}) {
    auto F = field("Q", p, 10);
    auto phi = make_character(F, {n}, {0}, {{ord, ex}}, {eps}, 8);
    auto g = gauss_sum(phi);
    CHECK(g.equals(brute_gauss_Q(phi)));
    // tau(chi) tau(chi^{-1}) = chi(-1) p^n
    auto inv = make_character(F, {n}, {0}, {{ord, ord - ex}}, {eps}, 8);
    auto expect = PAdicElement::from_int(phi.L, eps * phi.mods[0]);
    CHECK((g * gauss_sum(inv)).equals(expect));
  }
  auto F = field("Q", 5, 10);
  auto quad = make_character(F, {1}, {0}, {{2, 1}}, {1}, 8);
  CHECK(gauss_sum(quad).pow(2).equals(PAdicElement::from_int(quad.L, 5)));
}

TEST_CASE("Gauss sum does not depend on the generator of the different") {
  auto F = field("Q", 5, 10);
  auto phi = make_character(F, {1}, {0}, {{4, 1}}, {-1}, 8);
  auto a = gauss_sum(phi, {F.from_int(1), 0});
  auto b = gauss_sum(phi, {F.from_int(-1), 0});
  CHECK(a.equals(b));
  auto Fi = field("Qi", 5, 10);
  auto psi = make_character(Fi, {1, 0}, {1, 0}, {{4, 3}, {1, 0}}, {}, 8);
  auto c = gauss_sum(psi, {Fi.from_int(2), 0});
  auto d = gauss_sum(psi, {Fi.from_int(2), 2});
  CHECK(c.equals(d));
  CHECK(!c.is_zero());
}

TEST_CASE("twisted Gauss sums") {
  std::mt19937_64 rng(17);
  auto F = field("Q", 5, 10);
  auto phi = make_character(F, {2}, {0}, {{20, 3}}, {-1}, 6);
  auto tau = gauss_sum(phi);
  for (int t = 0; t < 50; ++t) {
    int64_t z = int64_t(rng() % 200) - 100;
    if (z == 0) z = 5;
    auto tw = twisted_gauss_sum(phi, F.from_int(z));
    if (z % 5 == 0)
      CHECK(tw.is_zero());
    else
      CHECK(tw.equals(phi.chi_global(F.from_int(z)).inverse() * tau));
  }
}

TEST_CASE("admissible infinity types") {
  auto Fs = field("Qsqrt2", 7, 6);
  for (int a = -6; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b) CHECK(is_admissible_infinity_type(Fs, {a, b}) == (a == b));
  auto Fi = field("Qi", 5, 6);
  for (int a = -6; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b) CHECK(is_admissible_infinity_type(Fi, {a, b}));
  CHECK(bracket(Fi, {3, 1}) == make_rational(2, 1));
  CHECK(bracket(Fs, {2, 2}) == make_rational(2, 1));
  try {
    bracket(Fs, {1, 2});
    FAIL("not parallel accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotParallel);
  }
}

TEST_CASE("values at primes outside the conductor") {
  auto F = field("Q", 5, 10);
  auto triv = make_character(F, {0}, {2}, {{1, 0}}, {1}, 8);
  auto L = triv.L;
  CHECK(phi_of_prime(triv, 0).equals(PAdicElement::from_rational(L, 1, 25)));
  CHECK(avatar_at_uniformizer(triv, 0).equals(PAdicElement::from_int(L, 1)));
  auto Fi = field("Qi", 5, 10);
  auto psi = make_character(Fi, {1, 0}, {1, 0}, {{4, 3}, {1, 0}}, {}, 8);
  auto v = phi_of_prime(psi, 1);
  // phi(P2) phi(P2bar) ... ideal (2+i): value equals the inverse of chi(2+i) (2+i)^r
  FieldElt pi{{2, 1}, 1};
  CHECK(v.equals((psi.chi_global(pi) * psi.power_r(pi)).inverse()));
  auto u = embed_global(Fi, FieldElt{{1, 1}, 1});
  auto w = p_adic_avatar(psi, Fi.one(), u);
  CHECK(w.equals(psi.chi_global(FieldElt{{1, 1}, 1}) * psi.power_r(FieldElt{{1, 1}, 1})));
}
