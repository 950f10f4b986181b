#include <doctest.h>

#include <random>

#include "padicl/modular_symbols.hpp"

using namespace padicl;

namespace {

// mu = N prod (1 + 1/l)
int64_t index_formula(int64_t N) {
  int64_t mu = N, n = N;
  for (int64_t l = 2; l * l <= n; ++l)
    if (n % l == 0) {
      mu = mu / l * (l + 1);
      while (n % l == 0) n /= l;
    }
  if (n > 1) mu = mu / n * (n + 1);
  return mu;
}

// P^1(Z/N) by brute force
int64_t p1_count(int64_t N) {
  int64_t cnt = 0;
  for (int64_t c = 0; c < N; ++c)
    for (int64_t d = 0; d < N; ++d) {
      if (std::gcd(std::gcd(c, d), N) != 1) continue;
      bool first = true;
      for (int64_t u = 1; u < N && first; ++u)
        if (std::gcd(u, N) == 1) {
          int64_t c2 = u * c % N, d2 = u * d % N;
          if (c2 * N + d2 < c * N + d) first = false;
        }
      if (first) ++cnt;
    }
  return cnt;
}

// lower hull slopes of the points (i, v_i), counted with multiplicity, <= h
int hull_count(const std::vector<int>& v, double h) {
  int n = int(v.size()) - 1, cnt = 0, i = 0;
  while (i < n) {
    int best = -1;
    double s = 1e18;
    for (int j = i + 1; j <= n; ++j) {
      if (v[size_t(j)] > 1000) continue;
      double t = double(v[size_t(j)] - v[size_t(i)]) / (j - i);
      if (t <= s + 1e-12) {
        s = t;
        best = j;
      }
    }
    if (s <= h + 1e-12) cnt += best - i;
    i = best;
  }
  return cnt;
}

int vp(const mpq_class& q, int64_t p) {
  if (q == 0) return 100000;
  mpz_class n = q.get_num(), d = q.get_den();
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

Cusp random_cusp(std::mt19937_64& rng) {
  int64_t den = int64_t(rng() % 40);
  int64_t num = int64_t(rng() % 200) - 100;
  if (den == 0) return {1, 0};
  int64_t g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

}  // namespace

TEST_CASE("Farey domains and dimensions") {
  for (int64_t N : {11, 35, 55, 77, 15}) {
    auto S = build_symbol_space(N, 0);
    CHECK(S.index() == index_formula(N));
    CHECK(S.index() == p1_count(N));
    CHECK(int(S.arcs.size()) * 3 == S.index());
    for (int64_t k : {0, 2}) {
      auto V = classical_space(S, k);
      int64_t mu = index_formula(N);
      CHECK(int64_t(V.dim()) == (k == 0 ? mu / 6 + 1 : (k + 1) * mu / 6));
    }
  }
  CHECK_THROWS_AS(build_symbol_space(13, 0), Error);
  CHECK_THROWS_AS(build_symbol_space(7, 0), Error);
}

TEST_CASE("symbols respect additivity and the group action") {
  std::mt19937_64 rng(8);
  auto S = build_symbol_space(55, 5);
  auto c = make_qp(5, 12);
  auto w = make_weight({2}, {0});
  auto V = classical_space(S, 2);
  QVec coeffs(V.dim());
  for (auto& x : coeffs) x = int64_t(rng() % 21) - 10;
  auto phi = to_padic(S, 2, from_coordinates(V, coeffs), c);
  for (auto& r : relation_residual(phi).val) CHECK(r.is_zero());
  for (int t = 0; t < 40; ++t) {
    auto a = random_cusp(rng), b = random_cusp(rng), e = random_cusp(rng);
    auto lhs = evaluate(phi, S.divisor(a, b)) + evaluate(phi, S.divisor(b, e));
    CHECK(equals(lhs, evaluate(phi, S.divisor(a, e))));
  }
  for (int t = 0; t < 40; ++t) {
    // gamma in Gamma0(55) from a random bottom row
    int64_t cc = 55 * (int64_t(rng() % 7) + 1), d = int64_t(rng() % 200) + 1;
    if (std::gcd(cc, d) != 1) continue;
    int64_t a = 0, b = 0;
    for (int64_t x = 1; x < cc * 2; ++x)
      if ((x * d - 1) % cc == 0) {
        a = x;
        b = (a * d - 1) / cc;
        break;
      }
    IntMat g{a, b, cc, d};
    REQUIRE(g.det() == 1);
    auto r = random_cusp(rng), s = random_cusp(rng);
    auto act = [&](const Cusp& x) {
      int64_t n = g.a * x.num + g.b * x.den, m = g.c * x.num + g.d * x.den;
      if (m < 0 || (m == 0 && n < 0)) {
        n = -n;
        m = -m;
      }
      int64_t q = std::gcd(n, m);
      return m == 0 ? Cusp{1, 0} : Cusp{n / q, m / q};
    };
    auto lhs = evaluate(phi, S.divisor(act(r), act(s)));
    auto rhs = act_dual(evaluate(phi, S.divisor(r, s)), local_matrix(c, g.d, -g.b, -g.c, g.a));
    CHECK(equals(lhs, rhs));
  }
}

TEST_CASE("Hecke operators at level 11") {
  auto S = build_symbol_space(11, 11);
  auto V = classical_space(S, 0);
  auto cp = q_charpoly(operator_matrix(V, S.hecke_program(2)));
  // (X - 3)(X + 2)^2
  CHECK(cp == QVec{-12, -8, 1, 1});
  auto cp3 = q_charpoly(operator_matrix(V, S.hecke_program(3)));
  // (X - 4)(X + 1)^2
  CHECK(cp3 == QVec{-4, -7, -2, 1});
}

TEST_CASE("Hecke operators commute and preserve relations") {
  auto S = build_symbol_space(55, 5);
  for (int64_t k : {0, 2}) {
    auto V = classical_space(S, k);
    auto T2 = operator_matrix(V, S.hecke_program(2));
    auto T3 = operator_matrix(V, S.hecke_program(3));
    auto U5 = operator_matrix(V, S.hecke_program(5));
    auto I = operator_matrix(V, S.weyl_program());
    CHECK(q_mul(T2, T3) == q_mul(T3, T2));
    CHECK(q_mul(T2, U5) == q_mul(U5, T2));
    CHECK(q_mul(I, T3) == q_mul(T3, I));
    CHECK(q_mul(I, I) == q_identity(V.dim()));
  }
}

TEST_CASE("ordinary eigensymbol of conductor 11 at level 55") {
  auto S = build_symbol_space(55, 5);
  auto V = classical_space(S, 0);
  auto c = make_qp(5, 14);
  auto R = eigensymbol(V, {{2, -2}, {3, -1}, {7, -2}}, c);
  CHECK(R.kernel_dim == 4);
  // (X^2 - X + 5)^2
  CHECK(R.up_charpoly == QVec{25, -10, 11, -2, 1});
  CHECK(R.a_p == 1);
  CHECK(R.lambda.valuation() == 0);
  CHECK((R.lambda * R.lambda - R.lambda + PAdicElement::from_int(c, 5)).is_zero());
  CHECK(equals(act_hecke(R.theta, 5), scale(R.theta, R.lambda)));
  CHECK(equals(act_weyl(R.plus), R.plus));
  CHECK(equals(act_weyl(R.minus), scale(R.minus, PAdicElement::from_int(c, -1))));
  CHECK(equals(act_hecke(R.plus, 2), scale(R.plus, PAdicElement::from_int(c, -2))));
  for (auto& r : relation_residual(R.theta).val) CHECK(r.is_zero());
}

TEST_CASE("weight four eigensymbol at level 35") {
  auto S = build_symbol_space(35, 5);
  auto V = classical_space(S, 2);
  auto c = make_qp(5, 16);
  auto R = eigensymbol(V, {{2, -1}, {3, -2}}, c);
  CHECK(R.kernel_dim == 4);
  CHECK(R.a_p == 16);
  CHECK(R.lambda.valuation() == 0);
  CHECK(equals(act_hecke(R.theta, 5), scale(R.theta, R.lambda)));
  CHECK(is_small_slope_q(2, R.lambda));
}

TEST_CASE("slope subspaces match the Newton polygon") {
  struct Case {
    int64_t N, p, k;
  };
  for (Case cs : {Case{55, 5, 0}, Case{35, 5, 0}, Case{11, 11, 2}, Case{15, 5, 0}}) {
    auto S = build_symbol_space(cs.N, cs.p);
    auto c = make_qp(cs.p, 14);
    auto V = classical_space(S, cs.k);
    auto U = operator_matrix(V, S.hecke_program(cs.p));
    auto cp = q_charpoly(U);
    // det(1 - UX) has coefficients cp reversed
    std::vector<int> v;
    for (size_t i = 0; i < cp.size(); ++i) v.push_back(vp(cp[cp.size() - 1 - i], cs.p));
    for (int hn = 0; hn <= int(cs.k) + 1; ++hn) {
      auto B = slope_le_subspace(U, cs.p, make_rational(hn, 1), c);
      CHECK(int(B.size()) == hull_count(v, hn));
      if (B.empty()) continue;
      // invariance: [B | UB] has rank |B|
      size_t d = U.size(), m = B.size();
      std::vector<std::vector<PAdicElement>> A(d, std::vector<PAdicElement>(2 * m, PAdicElement::zero(c)));
      for (size_t j = 0; j < m; ++j)
        for (size_t i = 0; i < d; ++i) {
          A[i][j] = B[j][i];
          for (size_t t = 0; t < d; ++t) A[i][m + j] += padic_from_mpq(c, U[i][t]) * B[j][t];
        }
      CHECK(kernel_basis(A, int(2 * m), c).size() == m);
    }
    CHECK(slope_le_subspace(U, cs.p, make_rational(-1, 2), c).empty());
  }
  auto S = build_symbol_space(55, 5);
  auto V = classical_space(S, 2);
  auto U = operator_matrix(V, S.hecke_program(5));
  CHECK_THROWS_AS(slope_le_subspace(U, 5, make_rational(1, 1), make_qp(5, 20)), Error);
}

TEST_CASE("small slope predicate") {
  auto c = make_qp(5, 10);
  CHECK(is_small_slope_q(0, PAdicElement::from_int(c, 2)));
  CHECK(!is_small_slope_q(0, PAdicElement::from_int(c, 5)));
  CHECK(is_small_slope_q(2, PAdicElement::from_int(c, 25)));
  CHECK(!is_small_slope_q(2, PAdicElement::from_int(c, 125)));
  auto F = load_field(std::string(PADICL_CONFIG_DIR) + "/fields/Qi.json");
  set_prime(F, 5, 10);
  auto w = make_weight(F, {2, 2}, {0, 0});
  EigenData e{{PAdicElement::from_int(c, 25), PAdicElement::from_int(c, 1)}, {}};
  CHECK(is_small_slope(F, w, e));
  e.lambda[0] = PAdicElement::from_int(c, 125);
  CHECK(!is_small_slope(F, w, e));
}
