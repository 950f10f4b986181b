#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "padicl/field_data.hpp"

using namespace padicl;

namespace {

std::string field_path(const std::string& id) { return std::string(PADICL_CONFIG_DIR) + "/fields/" + id + ".json"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FieldElt random_elt(std::mt19937_64& rng, int d) {
  FieldElt x;
  for (int i = 0; i < d; ++i) x.c.push_back(int64_t(rng() % 41) - 20);
  return x;
}

// sqrt(-1) mod 5^k by integer Newton steps
int64_t hensel_i(int k) {
  int64_t m = 1;
  for (int i = 0; i < k; ++i) m *= 5;
  int64_t x = 2;
  for (int it = 0; it < 8; ++it) {
    int64_t f = int64_t((__int128(x) * x + 1) % m);
    x = int64_t(((__int128(x) - __int128(f) * mod_inv(2 * x % m, m)) % m + m) % m);
  }
  return x;
}

}  // namespace

TEST_CASE("shipped fields load and validate") {
  std::map<std::string, int64_t> disc{{"Q", 1}, {"Qi", -4}, {"Qsqrtm11", -11}, {"Qsqrt2", 8}, {"Qcbrt2", -108}};
  for (auto& [id, D] : disc) {
    auto F = load_field(field_path(id));
    CHECK(F.disc == D);
    CHECK(validate_field(F).empty());
  }
}

TEST_CASE("local root of x^2+1 matches integer Hensel lifting") {
  auto F = load_field(field_path("Qi"));
  set_prime(F, 5, 12);
  REQUIRE(F.primes.size() == 2);
  int64_t r = hensel_i(12);
  CHECK(F.primes[0].theta.to_int_mod(12) == r);
  int64_t m = 244140625;
  CHECK(F.primes[1].theta.to_int_mod(12) == m - r);
  CHECK(F.primes[0].pi.valuation() == 1);
}

TEST_CASE("embedding at p is a ring homomorphism") {
  std::mt19937_64 rng(5);
  for (auto [id, p] : std::vector<std::pair<std::string, int64_t>>{{"Qi", 5}, {"Qsqrtm11", 3}, {"Qsqrt2", 7}, {"Qcbrt2", 5}, {"Qi", 3}, {"Qi", 2}}) {
    auto F = load_field(field_path(id));
    set_prime(F, p, 10);
    for (int t = 0; t < 100; ++t) {
      auto a = random_elt(rng, F.d), b = random_elt(rng, F.d);
      auto ea = embed_global(F, a), eb = embed_global(F, b);
      auto prod = embed_global(F, F.mul(a, b));
      auto sum = embed_global(F, F.add(a, b));
      auto m = ofp_mul(ea, eb), s = ofp_add(ea, eb);
      for (size_t i = 0; i < F.primes.size(); ++i) {
        CHECK(prod[i].equals(m[i]));
        CHECK(sum[i].equals(s[i]));
      }
    }
  }
}

TEST_CASE("product of local norms is the global norm") {
  std::mt19937_64 rng(9);
  for (auto [id, p] : std::vector<std::pair<std::string, int64_t>>{{"Qi", 5}, {"Qi", 3}, {"Qsqrt2", 7}, {"Qcbrt2", 5}, {"Qsqrtm11", 5}}) {
    auto F = load_field(field_path(id));
    set_prime(F, p, 12);
    auto qp = make_qp(p, 12);
    for (int t = 0; t < 30; ++t) {
      auto a = random_elt(rng, F.d);
      if (F.is_zero(a)) continue;
      auto loc = embed_global(F, a);
      PAdicElement prod = PAdicElement::from_int(qp, 1);
      for (auto& x : loc) prod = prod * lift_rational_part(local_norm(x), qp);
      mpq_class n = F.norm(a);
      auto expect = PAdicElement::from_rational(qp, n.get_num().get_si(), n.get_den().get_si());
      CHECK(prod.equals(expect));
    }
  }
}

TEST_CASE("certified signs agree with floating embeddings") {
  std::mt19937_64 rng(3);
  auto F = load_field(field_path("Qsqrt2"));
  for (int t = 0; t < 100; ++t) {
    auto a = random_elt(rng, 2);
    if (F.is_zero(a)) continue;
    for (int s = 0; s < 2; ++s) {
      long double v = F.embed_complex(a, s).real();
      CHECK(real_sign(F, a, s) == (v > 0 ? 1 : -1));
    }
  }
  FieldElt u{{3, 2}, 1};
  CHECK(is_totally_positive(F, u));
  CHECK(!is_totally_positive(F, FieldElt{{1, 1}, 1}));
}

TEST_CASE("corrupted field data is rejected") {
  auto j = nlohmann::json::parse(slurp(field_path("Qi")));
  j["mult_table"][1][1][0] = 1;
  try {
    parse_field(j.dump());
    FAIL("accepted a bad multiplication table");
  } catch (const Error& e) {
    CHECK(e.code() == Err::FieldInconsistent);
  }
  auto k = nlohmann::json::parse(slurp(field_path("Qi")));
  k["discriminant"] = -3;
  CHECK_THROWS_AS(parse_field(k.dump()), Error);
  auto u = nlohmann::json::parse(slurp(field_path("Qsqrt2")));
  u["units"]["fundamental"][0] = {2, 1};
  CHECK_THROWS_AS(parse_field(u.dump()), Error);
}

TEST_CASE("uniformizer powers and scalar images") {
  auto F = load_field(field_path("Qi"));
  set_prime(F, 5, 10);
  auto up = uniformizer_power(F, {2, 1});
  CHECK(up[0].valuation() == 2);
  CHECK(up[1].valuation() == 1);
  auto L = make_qp(5, 10);
  FieldElt x{{3, 4}, 1};
  auto img = scalar_image(F, embed_global(F, x), {1, 1}, L);
  CHECK(img.equals(PAdicElement::from_int(L, 25)));
  auto F3 = load_field(field_path("Qi"));
  set_prime(F3, 3, 8);
  CHECK_THROWS_AS(scalar_image(F3, embed_global(F3, x), {1, 0}, make_qp(3, 8)), Error);
}

TEST_CASE("rational elements lift into ramified extensions") {
  auto L = make_cyclotomic(5, 1, 24);
  auto c = make_qp(5, 10);
  for (int64_t n : {75, 3, -250, 1}) {
    auto x = lift_rational_part(PAdicElement::from_int(c, n), L);
    CHECK(x.equals(PAdicElement::from_int(L, n)));
  }
  auto q = lift_rational_part(PAdicElement::from_rational(c, 2, 25), L);
  CHECK((q * PAdicElement::from_int(L, 25)).equals(PAdicElement::from_int(L, 2)));
}
