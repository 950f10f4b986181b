#include "padicl/suites.hpp"

#include <functional>
#include <random>
#include <set>

#include "padicl/rational_linalg.hpp"

namespace padicl {

bool SuiteReport::pass() const {
  for (auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

json SuiteReport::to_json() const {
  json j{{"suite", suite}, {"pass", pass()}};
  j["checks"] = json::array();
  for (auto& c : checks) j["checks"].push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"diagram", "independence", "compatibility", "gauss", "control", "interpolation"};
  return names;
}

namespace {

// Runs body; an exception becomes a failing check carrying its code.
void run(SuiteReport& r, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    r.checks.push_back({name, ok, detail});
  } catch (const Error& e) {
    r.checks.push_back({name, false, e.what()});
  }
}

std::string ratio(int good, int total) { return std::to_string(good) + "/" + std::to_string(total); }

NumberFieldData field_at(const std::string& id, int64_t p, int N) {
  auto F = load_field(std::string(PADICL_CONFIG_DIR) + "/fields/" + id + ".json");
  set_prime(F, p, N);
  return F;
}

// eps chosen so that eps(-1) chi(-1) (-1)^j = 1
HeckeCharacter q_character(const NumberFieldData& F, int n, int64_t order, int64_t expo, int64_t j, int digits) {
  int64_t chi_m1 = 1;
  if (n > 0) {
    int64_t phi = F.p - 1;
    for (int i = 1; i < n; ++i) phi *= F.p;
    chi_m1 = (expo * (phi / 2)) % order == 0 ? 1 : -1;
  }
  int sgn = int(chi_m1 * ((j % 2) ? -1 : 1));
  return make_character(F, {n}, {j}, {{order, expo}}, {sgn}, digits);
}

// primitive (order, exponent) pairs of conductor p^n over Q, at most four
std::vector<std::pair<int64_t, int64_t>> primitive_specs(int64_t p, int n) {
  std::vector<std::pair<int64_t, int64_t>> out;
  for (int64_t d = 2; d <= p - 1 && out.size() < 4; ++d) {
    if ((p - 1) % d) continue;
    int64_t ord = n == 1 ? d : d * p;
    out.push_back({ord, 1});
    if (std::gcd(ord - 1, ord) == 1 && ord - 1 != 1 && out.size() < 4) out.push_back({ord, ord - 1});
  }
  if (n == 2 && out.size() < 4) out.insert(out.begin(), {p, 1});
  if (out.size() > 4) out.resize(4);
  return out;
}

int64_t level_k(Session& s) { return s.config().k; }

// direct summation over (Z/p^n)^x with brute-force discrete logs
PAdicElement brute_chi(const HeckeCharacter& phi, int64_t b) {
  int64_t m = phi.mods[0], p = phi.F->p;
  b = ((b % m) + m) % m;
  int64_t g = 2;
  for (;; ++g) {
    std::set<int64_t> seen;
    int64_t x = 1;
    do {
      seen.insert(x);
      x = x * g % m;
    } while (x != 1);
    if (int64_t(seen.size()) == m / p * (p - 1)) break;
  }
  int64_t x = 1, e = 0;
  while (x != b) {
    x = x * g % m;
    ++e;
  }
  return phi.gen_value[0].pow(e);
}

PAdicElement brute_gauss_Q(const HeckeCharacter& phi) {
  int64_t m = phi.mods[0];
  auto z = zeta_pn(phi.L, phi.cond[0]);
  auto s = PAdicElement::zero(phi.L);
  for (int64_t b = 1; b < m; ++b)
    if (b % phi.F->p) s += brute_chi(phi, b) * z.pow(m - b);
  return s;
}

int vp(const mpq_class& q, int64_t p) {
  if (q == 0) return PAdicElement::kInf;
  mpz_class n = q.get_num(), d = q.get_den();
  int v = 0;
  for (; n % p == 0; n /= p) ++v;
  for (; d % p == 0; d /= p) --v;
  return v;
}

// lower hull of the points (i, v_i): number of slopes <= h counted with multiplicity
int hull_count(const std::vector<int>& v, double h) {
  int n = int(v.size()) - 1, cnt = 0, i = 0;
  while (i < n) {
    int best = -1;
    double s = 1e18;
    for (int j = i + 1; j <= n; ++j) {
      if (v[size_t(j)] >= PAdicElement::kInf) continue;
      double t = double(v[size_t(j)] - v[size_t(i)]) / (j - i);
      if (t <= s + 1e-12) {
        s = t;
        best = j;
      }
    }
    if (best < 0) break;
    if (s <= h + 1e-12) cnt += best - i;
    i = best;
  }
  return cnt;
}

SuiteReport diagram(Session& s) {
  SuiteReport r{"diagram", {}};
  const auto& psi = s.lift();
  const auto& theta = s.eigen().theta;
  int64_t k = level_k(s);
  for (int n : {1, 2}) {
    auto G = build_ray_class_group(s.field(), {n});
    int64_t f0 = modulus_generator(G);
    run(r, "overconvergent evaluation specialises, f = p^" + std::to_string(n), [&] {
      int good = 0, total = 0;
      for (int y = 0; y < G.order(); ++y) {
        int64_t a = G.reps[size_t(y)].c[0];
        auto ev = ev_overconvergent(psi, f0, a);
        for (int64_t j = 0; j <= k; ++j, ++total)
          good += ev.mom[size_t(k - j)].equals(ev_classical_2(theta, f0, int(j), a));
      }
      return std::pair{good == total, ratio(good, total)};
    });
    run(r, "Ev2 = f^j Ev1, f = p^" + std::to_string(n), [&] {
      int good = 0, total = 0;
      for (int y = 0; y < G.order(); ++y) {
        int64_t a = G.reps[size_t(y)].c[0];
        for (int64_t j = 0; j <= k; ++j, ++total) {
          auto e1 = ev_classical_1(theta, f0, int(j), a);
          good += ev_classical_2(theta, f0, int(j), a).equals(e1 * PAdicElement::from_int(e1.ctx(), f0).pow(j));
        }
      }
      return std::pair{good == total, ratio(good, total)};
    });
  }
  return r;
}

SuiteReport independence(Session& s) {
  SuiteReport r{"independence", {}};
  const auto& cfg = s.config();
  auto& F = s.field();
  int64_t k = level_k(s);
  for (int n : {1, 2}) {
    auto G = build_ray_class_group(F, {n});
    auto H = alternate_table(G, 3);
    auto muA = build_mu(s.lift(), s.eig(), G);
    auto muB = build_mu(s.lift(), s.eig(), H, 2);
    std::vector<HeckeCharacter> chars;
    for (int64_t j = 0; j <= k; ++j) {
      chars.push_back(q_character(F, 0, 1, 0, j, cfg.precision + 2));
      for (auto [o, e] : primitive_specs(cfg.p, n)) chars.push_back(q_character(F, n, o, e, j, cfg.precision + 2));
    }
    std::string tag = ", f = p^" + std::to_string(n);
    run(r, "mu values under a second representative table" + tag, [&] {
      int good = 0;
      for (auto& chi : chars) good += evaluate_mu(muA, chi).equals(evaluate_mu(muB, chi));
      return std::pair{good == int(chars.size()), ratio(good, int(chars.size()))};
    });
    run(r, "Ev_phi under changed inverse lifts" + tag, [&] {
      int good = 0, total = 0;
      for (auto& chi : chars)
        for (auto [norm, bl] : {std::pair{1, int64_t(1)}, {2, int64_t(4)}}) {
          good += ev_phi(s.eigen().theta, chi, G, norm).equals(ev_phi(s.eigen().theta, chi, H, norm, bl));
          ++total;
        }
      return std::pair{good == total, ratio(good, total)};
    });
  }
  return r;
}

SuiteReport compatibility(Session& s) {
  SuiteReport r{"compatibility", {}};
  const auto& cfg = s.config();
  auto& F = s.field();
  int64_t p = cfg.p, k = level_k(s);
  auto G1 = build_ray_class_group(F, {1});
  auto G2 = build_ray_class_group(F, {2});
  auto mu1 = build_mu(s.lift(), s.eig(), G1);
  auto mu2 = build_mu(s.lift(), s.eig(), G2);
  run(r, "coset monomials sum over the finer cosets", [&] {
    int good = 0, total = 0;
    for (int64_t b = 1; b < p; ++b)
      for (int m = 0; m < std::min(8, cfg.moments); ++m, ++total) {
        auto lhs = mu_coset_monomial(mu1, b, m);
        auto rhs = PAdicElement::zero(lhs.ctx());
        for (int64_t t = 0; t < p; ++t) rhs += mu_coset_monomial(mu2, b + p * t, m);
        good += lhs.equals(rhs);
      }
    return std::pair{good == total && total >= 20, ratio(good, total)};
  });
  run(r, "character values agree across moduli", [&] {
    int good = 0, total = 0;
    for (int64_t j = 0; j <= k; ++j) {
      std::vector<HeckeCharacter> chars{q_character(F, 0, 1, 0, j, cfg.precision + 2)};
      for (auto [o, e] : primitive_specs(p, 1)) chars.push_back(q_character(F, 1, o, e, j, cfg.precision + 2));
      for (auto& chi : chars) {
        good += evaluate_mu(mu1, chi).equals(evaluate_mu(mu2, chi));
        ++total;
      }
    }
    return std::pair{good == total, ratio(good, total)};
  });
  return r;
}

SuiteReport gauss(Session& s) {
  SuiteReport r{"gauss", {}};
  int digits = s.config().precision;
  for (auto [p, n] : std::vector<std::pair<int64_t, int>>{{3, 1}, {5, 1}, {3, 2}}) {
    run(r, "Q conductor " + std::to_string(p) + "^" + std::to_string(n) + " against direct summation", [&] {
      auto F = field_at("Q", p, digits + 2);
      int64_t phi = (p - 1) * (n == 2 ? p : 1);
      int good = 0, total = 0;
      for (int64_t ord = 2; ord <= phi; ++ord) {
        if (phi % ord) continue;
        if (n == 2 && ord % p) continue;
        for (int64_t ex = 1; ex < ord; ++ex) {
          if (std::gcd(ex, ord) != 1) continue;
          int eps = (ex * (phi / 2)) % ord == 0 ? 1 : -1;
          auto chi = make_character(F, {n}, {0}, {{ord, ex}}, {eps}, digits);
          auto g = gauss_sum(chi);
          auto inv = make_character(F, {n}, {0}, {{ord, ord - ex}}, {eps}, digits);
          good += g.equals(brute_gauss_Q(chi));
          good += (g * gauss_sum(inv)).equals(PAdicElement::from_int(chi.L, eps * chi.mods[0]));
          total += 2;
        }
      }
      return std::pair{good == total && total > 0, ratio(good, total)};
    });
  }
  run(r, "quadratic sum squares to 5", [&] {
    auto F = field_at("Q", 5, digits + 2);
    auto quad = make_character(F, {1}, {0}, {{2, 1}}, {1}, digits);
    return std::pair{gauss_sum(quad).pow(2).equals(PAdicElement::from_int(quad.L, 5)), std::string()};
  });
  run(r, "50 twisted sums", [&] {
    std::mt19937_64 rng(s.config().seed);
    auto F = field_at("Q", 5, digits + 2);
    auto chi = make_character(F, {2}, {0}, {{20, 3}}, {-1}, digits);
    auto tau = gauss_sum(chi);
    int good = 0;
    for (int t = 0; t < 50; ++t) {
      int64_t z = int64_t(rng() % 200) - 100;
      if (z == 0) z = 5;
      auto tw = twisted_gauss_sum(chi, F.from_int(z));
      good += z % 5 == 0 ? tw.is_zero() : tw.equals(chi.chi_global(F.from_int(z)).inverse() * tau);
    }
    return std::pair{good == 50, ratio(good, 50)};
  });
  run(r, "Q(i) at a split prime above 5", [&] {
    auto Fi = field_at("Qi", 5, digits + 2);
    auto a = make_character(Fi, {1, 0}, {1, 0}, {{4, 3}, {1, 0}}, {}, digits);
    auto b = make_character(Fi, {1, 0}, {-1, 0}, {{4, 1}, {1, 0}}, {}, digits);
    auto ta = gauss_sum(a), tb = gauss_sum(b);
    auto sign = a.chi_global(Fi.from_int(-1));
    bool prod = (ta * tb).equals(sign * PAdicElement::from_int(a.L, 5));
    bool diff = gauss_sum(a, {Fi.from_int(2), 0}).equals(gauss_sum(a, {Fi.from_int(2), 2}));
    return std::pair{prod && diff && !ta.is_zero(), std::string(prod ? "" : "product ") + (diff ? "" : "different")};
  });
  return r;
}

SuiteReport control(Session& s) {
  SuiteReport r{"control", {}};
  const auto& cfg = s.config();
  run(r, "lift converges to the requested profile", [&] {
    const auto& rep = s.report();
    bool eig_ok = true;
    for (int v : rep.eigen_residual) eig_ok = eig_ok && v >= cfg.precision;
    bool ok = rep.converged && rep.filtration_depth == cfg.precision && rep.specialisation_residual >= cfg.precision &&
              rep.relation_residual >= cfg.precision && eig_ok && rep.iterations <= 2 * cfg.precision;
    return std::pair{ok, "iterations " + std::to_string(rep.iterations) + ", depth " +
                             std::to_string(rep.filtration_depth)};
  });
  run(r, "critical slope eigenvalue is refused", [&] {
    const auto& R = s.eigen();
    auto bad = R.lambda * PAdicElement::from_int(R.lambda.ctx(), cfg.p).pow(cfg.k + 1 - R.lambda.valuation());
    EigenData e{{bad}, {}};
    try {
      iterate_control(naive_lift(R.theta, cfg.moments, cfg.precision), R.theta, e);
    } catch (const Error& err) {
      return std::pair{err.code() == Err::NonConvergence, std::string(err_code(err.code()))};
    }
    return std::pair{false, std::string("converged")};
  });
  return r;
}

SuiteReport interpolation(Session& s) {
  SuiteReport r{"interpolation", {}};
  const auto& cfg = s.config();
  auto& F = s.field();
  int64_t k = level_k(s);
  const auto& R = s.eigen();
  for (int n : {1, 2}) {
    auto G = build_ray_class_group(F, {n});
    auto mu = build_mu(s.lift(), s.eig(), G);
    run(r, "conductor p^" + std::to_string(n), [&] {
      int good = 0, total = 0;
      for (int64_t j = 0; j <= k; ++j)
        for (auto [o, e] : primitive_specs(cfg.p, n)) {
          auto chi = q_character(F, n, o, e, j, cfg.precision + 2);
          if (!chi.is_primitive()) continue;
          auto lamf = lift_rational_part(R.lambda, chi.L).pow(n);
          good += evaluate_mu(mu, chi).equals(ev_phi(R.theta, chi, G, 2) / lamf);
          ++total;
        }
      return std::pair{good == total && total > 0, ratio(good, total)};
    });
  }
  auto G0 = build_ray_class_group(F, {0});
  auto G1 = build_ray_class_group(F, {1});
  auto mu = build_mu(s.lift(), s.eig(), G1);
  run(r, "unramified multiplier", [&] {
    int good = 0, total = 0;
    for (int64_t j = 0; j <= k; ++j) {
      auto phi = q_character(F, 0, 1, 0, j, cfg.precision + 2);
      const Ctx& L = phi.L;
      auto lam = lift_rational_part(R.lambda, L);
      auto one = PAdicElement::from_int(L, 1);
      auto period = ev_phi(R.theta, phi, G0, 1);
      auto Z = one - PAdicElement::from_int(L, cfg.p).pow(j) / lam;
      good += interpolation_multiplier(phi, s.eig(), {0}).equals(Z);
      good += evaluate_mu(mu, phi).equals(Z * period);
      total += 2;
      if (j == 0) {
        good += evaluate_mu(mu, phi).equals((one - lam.inverse()) * period);
        ++total;
      }
    }
    return std::pair{good == total, ratio(good, total)};
  });
  run(r, "unramified extension identity", [&] {
    int good = 0, total = 0;
    for (int64_t j = 0; j <= k; ++j, ++total) {
      auto U = unramified_extension_identity(R.theta, q_character(F, 0, 1, 0, j, cfg.precision + 2), s.eig(), G0, G1);
      good += U.lhs.equals(U.rhs);
    }
    return std::pair{good == total, ratio(good, total)};
  });
  return r;
}

SuiteReport slopes(Session& s) {
  SuiteReport r{"slopes", {}};
  const auto& cfg = s.config();
  run(r, "Newton polygon of 100 polynomials with known root valuations", [&] {
    std::mt19937_64 rng(cfg.seed);
    int good = 0;
    for (int t = 0; t < 100; ++t) {
      int64_t p = std::vector<int64_t>{2, 3, 5, 7}[rng() % 4];
      auto c = make_qp(p, 20);
      auto I = [&](int64_t n) { return PAdicElement::from_int(c, n); };
      int deg = 1 + int(rng() % 6);
      PAdicPolynomial Q = {I(1 + int64_t(rng() % uint64_t(p - 1)))};
      std::map<std::pair<int64_t, int64_t>, int> expect;
      for (int left = deg; left > 0;) {
        int m = 1 + int(rng() % uint64_t(std::min(left, 3)));
        int a = int(rng() % 4);
        int64_t u = 1 + int64_t(rng() % 40);
        if (u % p == 0) ++u;
        // X^m - p^a u has all roots of valuation a/m
        PAdicPolynomial f(size_t(m + 1), PAdicElement::zero(c));
        f[0] = -(I(p).pow(a) * I(u));
        f[size_t(m)] = I(1);
        Q = poly_mul(Q, f);
        auto q = make_rational(a, m);
        expect[{q.num, q.den}] += m;
        left -= m;
      }
      std::map<std::pair<int64_t, int64_t>, int> got;
      for (auto& x : newton_polygon(Q)) got[{x.slope.num, x.slope.den}] += x.multiplicity;
      good += got == expect;
    }
    return std::pair{good == 100, ratio(good, 100)};
  });
  const auto& V = s.classical();
  auto U = operator_matrix(V, s.space().hecke_program(cfg.p));
  auto cp = q_charpoly(U);
  std::vector<int> v;
  for (size_t i = 0; i < cp.size(); ++i) v.push_back(vp(cp[cp.size() - 1 - i], cfg.p));
  // the largest precision whose residues fit in 62 bits
  int top = 0;
  for (__int128 q = cfg.p * cfg.p; q * cfg.p < (__int128(1) << 62); q *= cfg.p) ++top;
  auto c = make_qp(cfg.p, top);
  run(r, "slope subspace dimensions follow the Newton polygon", [&] {
    int good = 0, total = 0;
    std::string detail;
    for (int64_t h = 0; h <= cfg.k + 1; ++h, ++total) {
      int got = int(slope_le_subspace(U, cfg.p, make_rational(h, 1), c).size());
      int want = hull_count(v, double(h));
      good += got == want;
      detail += "h=" + std::to_string(h) + ":" + std::to_string(got) + "/" + std::to_string(want) + " ";
    }
    return std::pair{good == total, detail};
  });
  run(r, "negative slope bound gives the zero subspace", [&] {
    return std::pair{slope_le_subspace(U, cfg.p, make_rational(-1, 2), c).empty(), std::string()};
  });
  return r;
}

SuiteReport admissibility(Session&) {
  SuiteReport r{"admissibility", {}};
  run(r, "Q(sqrt 2) accepts exactly the parallel types", [&] {
    auto F = field_at("Qsqrt2", 7, 6);
    int good = 0, total = 0;
    for (int64_t a = -6; a <= 6; ++a)
      for (int64_t b = -6; b <= 6; ++b, ++total) good += is_admissible_infinity_type(F, {a, b}) == (a == b);
    return std::pair{good == total, ratio(good, total)};
  });
  run(r, "Q(i) accepts every type", [&] {
    auto F = field_at("Qi", 5, 6);
    int good = 0, total = 0;
    for (int64_t a = -6; a <= 6; ++a)
      for (int64_t b = -6; b <= 6; ++b, ++total) good += is_admissible_infinity_type(F, {a, b});
    return std::pair{good == total, ratio(good, total)};
  });
  return r;
}

}  // namespace

SuiteReport run_suite(const std::string& name, Session& s) {
  if (name == "diagram") return diagram(s);
  if (name == "independence") return independence(s);
  if (name == "compatibility") return compatibility(s);
  if (name == "gauss") return gauss(s);
  if (name == "control") return control(s);
  if (name == "interpolation") return interpolation(s);
  if (name == "slopes") return slopes(s);
  if (name == "admissibility") return admissibility(s);
  throw Error(Err::InvalidInput, "unknown suite " + name);
}

}  // namespace padicl
