#include <doctest.h>

#include <chrono>
#include <limits>
#include <random>

#include "padicl/overconvergent_lift.hpp"

using namespace padicl;

namespace {

struct Fixture {
  SymbolSpace S;
  ClassicalSpace V;
  EigenSymbolResult R;
};

Fixture& level55() {
  static Fixture f = [] {
    Fixture x{build_symbol_space(55, 5), {}, {}};
    x.V = classical_space(x.S, 0);
    x.R = eigensymbol(x.V, {{2, -2}, {3, -1}, {7, -2}}, make_qp(5, 16));
    return x;
  }();
  return f;
}

Fixture& level35() {
  static Fixture f = [] {
    Fixture x{build_symbol_space(35, 5), {}, {}};
    x.V = classical_space(x.S, 2);
    x.R = eigensymbol(x.V, {{2, -1}, {3, -2}}, make_qp(5, 16));
    return x;
  }();
  return f;
}

EigenData eig_of(const EigenSymbolResult& R) { return EigenData{{R.lambda}, {}}; }

// (w|T^{-1})(z^n) = w((z - 1)^n), solved degree by degree
std::vector<PAdicElement> recursion_oracle(const std::vector<PAdicElement>& s, int count) {
  const Ctx& c = s[0].ctx();
  std::vector<PAdicElement> W;
  for (int n = 0; n < count; ++n) {
    PAdicElement acc = -s[size_t(n + 1)];
    for (int i = 0; i < n; ++i) {
      mpz_class b = q_binom(n + 1, i);
      if ((n + 1 - i) % 2) b = -b;
      acc += padic_from_mpq(c, mpq_class(b)) * W[size_t(i)];
    }
    W.push_back(acc * padic_from_mpq(c, mpq_class(1, n + 1)));
  }
  return W;
}

}  // namespace

TEST_CASE("boundary solve matches the difference recursion") {
  auto c = make_qp(5, 14);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PAdicElement> s{PAdicElement::zero(c)};
    for (int i = 1; i <= 9; ++i) s.push_back(PAdicElement::from_int(c, int64_t(rng() % 100000) - 50000));
    auto W = solve_boundary(s, 8);
    auto O = recursion_oracle(s, 8);
    for (int i = 0; i < 8; ++i) CHECK(W[size_t(i)].truncate(10).equals(O[size_t(i)].truncate(10)));
    // w|(T^{-1} - 1) = s through the distribution action
    auto w = make_weight({0}, {0});
    auto mu = MomentDistribution::zero(w, c, 8, 10);
    for (int i = 0; i < 8; ++i) mu.mom[size_t(i)] = W[size_t(i)];
    auto d = act_D(mu, local_matrix(c, 1, -1, 0, 1)) - mu;
    for (int i = 0; i < 8; ++i) CHECK(d.mom[size_t(i)].truncate(9).equals(s[size_t(i)].truncate(9)));
  }
  std::vector<PAdicElement> bad{PAdicElement::from_int(c, 1), PAdicElement::zero(c)};
  CHECK_THROWS_AS(solve_boundary(bad, 1), Error);
}

TEST_CASE("naive lifts specialise to the classical symbol") {
  auto& F = level55();
  auto zero = classical_zero(F.S, F.R.theta.w, F.R.theta.val[0].ctx);
  auto z = naive_lift(zero, 10, 10);
  for (auto& mu : z.val) CHECK(mu.is_zero());
  auto A = naive_lift(F.R.theta, 10, 10);
  auto B = naive_lift(F.R.theta, 10, 10, 77);
  CHECK(residual_valuation(specialise(A), F.R.theta) == PAdicElement::kInf);
  CHECK(residual_valuation(specialise(B), F.R.theta) == PAdicElement::kInf);
  CHECK(relation_residual(A).is_zero());
  CHECK(relation_residual(B).is_zero());
  // the two lifts differ only above degree k
  bool differs = false;
  for (size_t g = 0; g < A.val.size(); ++g) {
    auto d = A.val[g] - B.val[g];
    CHECK(d.mom[0].truncate(d.profile(0)).is_zero());
    for (size_t i = 1; i < d.mom.size(); ++i)
      if (!d.mom[i].truncate(d.profile(int(i))).is_zero()) differs = true;
  }
  CHECK(differs);
  auto& G = level35();
  auto C = naive_lift(G.R.theta, 12, 8, 5);
  CHECK(residual_valuation(specialise(C), G.R.theta) == PAdicElement::kInf);
  CHECK(relation_residual(C).is_zero());
}

TEST_CASE("control theorem for the ordinary fixture") {
  auto& F = level55();
  auto t0 = std::chrono::steady_clock::now();
  auto [psiA, RA] = iterate_control(naive_lift(F.R.theta, 10, 10), F.R.theta, eig_of(F.R));
  auto [psiB, RB] = iterate_control(naive_lift(F.R.theta, 10, 10, 123), F.R.theta, eig_of(F.R));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(RA.converged);
  CHECK(RA.iterations <= 20);
  CHECK(RA.specialisation_residual == PAdicElement::kInf);
  CHECK(RA.eigen_residual[0] == PAdicElement::kInf);
  CHECK(RA.relation_residual == PAdicElement::kInf);
  CHECK(RA.filtration_depth == 10);
  CHECK(RB.converged);
  CHECK(equals(psiA, psiB));
  CHECK(secs < 120.0);
  // a fixed point is returned after one pass
  auto [psiC, RC] = iterate_control(psiA, F.R.theta, eig_of(F.R));
  CHECK(RC.iterations == 1);
  CHECK(equals(psiC, psiA));
}

TEST_CASE("successive iterates contract above degree k") {
  auto& F = level55();
  auto psi = naive_lift(F.R.theta, 10, 10, 9);
  auto U = compile(F.S.hecke_program(5), F.S, psi.val[0].w, psi.val[0].ctx, 10);
  auto li = F.R.lambda.to_context(psi.val[0].ctx).inverse();
  int prev = std::numeric_limits<int>::min() / 2;
  for (int it = 0; it < 12; ++it) {
    auto next = scale(apply(U, psi), li);
    int v = residual_valuation(next, psi);
    if (v == PAdicElement::kInf) break;
    CHECK(v >= prev + 1);
    prev = v;
    psi = next;
  }
}

TEST_CASE("slope at the critical bound does not converge") {
  auto& F = level55();
  auto c = F.R.lambda.ctx();
  EigenData bad{{F.R.lambda * PAdicElement::from_int(c, 5)}, {}};
  CHECK(!is_small_slope_q(0, bad.lambda[0]));
  try {
    iterate_control(naive_lift(F.R.theta, 10, 10), F.R.theta, bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NonConvergence);
  }
}

TEST_CASE("weight two lift at level 35") {
  auto& G = level35();
  CHECK(G.R.a_p == 16);
  auto [psi, R] = iterate_control(naive_lift(G.R.theta, 12, 8), G.R.theta, eig_of(G.R));
  CHECK(R.converged);
  CHECK(R.specialisation_residual == PAdicElement::kInf);
  CHECK(R.eigen_residual[0] == PAdicElement::kInf);
  CHECK(R.relation_residual == PAdicElement::kInf);
}
