#include <doctest.h>

#include <numeric>
#include <set>

#include "padicl/ray_class.hpp"

using namespace padicl;

namespace {

NumberFieldData field(const std::string& id, int64_t p, int N) {
  auto F = load_field(std::string(PADICL_CONFIG_DIR) + "/fields/" + id + ".json");
  set_prime(F, p, N);
  return F;
}

int64_t totient_pp(int64_t p, int n) {
  if (n == 0) return 1;
  int64_t m = p - 1;
  for (int i = 1; i < n; ++i) m *= p;
  return m;
}

// multiplicative order of x mod m
int64_t order_mod(int64_t x, int64_t m) {
  int64_t y = x % m, k = 1;
  while (y != 1 % m) {
    y = y * x % m;
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("ray class orders over Q are totients") {
  for (int64_t p : {3, 5, 7}) {
    auto F = field("Q", p, 6);
    for (int n = 0; n <= 3; ++n) {
      auto G = build_ray_class_group(F, {n});
      CHECK(G.order() == totient_pp(p, n));
    }
  }
  auto F = field("Q", 5, 6);
  auto G = build_ray_class_group(F, {2});
  CHECK(G.invariant_factors() == std::vector<int64_t>{20});
}

TEST_CASE("ray class orders over Q(i) from the unit image") {
  auto F = field("Qi", 5, 6);
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      auto G = build_ray_class_group(F, {a, b});
      int64_t units = totient_pp(5, a) * totient_pp(5, b);
      // i has order 4 in (O/f)^x as soon as f != 1
      int64_t image = (a + b) > 0 ? 4 : 1;
      CHECK(G.order() == units / image);
    }
  auto G = build_ray_class_group(F, {1, 1});
  CHECK(G.invariant_factors() == std::vector<int64_t>{4});
}

TEST_CASE("ray class orders over Q(sqrt2) at a split prime") {
  auto F = field("Qsqrt2", 7, 6);
  // totally positive units generated by 3+2t; t = 3, 4 mod 7
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
    auto G = build_ray_class_group(F, {a, b});
    int64_t m1 = a ? (a == 1 ? 7 : 49) : 1, m2 = b ? (b == 1 ? 7 : 49) : 1;
    auto r = residue_of(F, FieldElt{{3, 2}, 1}, {m1, m2});
    int64_t o1 = m1 > 1 ? order_mod(r[0], m1) : 1, o2 = m2 > 1 ? order_mod(r[1], m2) : 1;
    int64_t image = std::lcm(o1, o2);
    CHECK(G.order() == totient_pp(7, a) * totient_pp(7, b) / image);
  }
}

TEST_CASE("representatives are totally positive and land in their class") {
  auto F = field("Qi", 5, 6);
  auto G = build_ray_class_group(F, {2, 1});
  for (int y = 0; y < G.order(); ++y) {
    CHECK(G.class_of_idele(G.reps[y], Residue{1, 1}) == y);
  }
  auto H = alternate_table(G, 3);
  for (int y = 0; y < G.order(); ++y) {
    CHECK(!F.equal(H.reps[y], G.reps[y]));
    CHECK(G.class_of_idele(H.reps[y], Residue{1, 1}) == y);
  }
  auto Fs = field("Qsqrt2", 7, 6);
  auto Gs = build_ray_class_group(Fs, {1, 1});
  for (auto& a : Gs.reps) CHECK(is_totally_positive(Fs, a));
}

TEST_CASE("compatible representatives for p = 3") {
  auto F = field("Q", 3, 6);
  auto G = build_ray_class_group(F, {1});
  auto u = compatible_representatives(G, 0);
  std::set<int64_t> got;
  for (auto& r : u) got.insert(r[0]);
  CHECK(got == std::set<int64_t>{1, 4, 7});
  auto Fi = field("Qi", 5, 6);
  auto Gi = build_ray_class_group(Fi, {1, 1});
  CHECK(compatible_representatives(Gi, 0).size() == 5);
  auto G0 = build_ray_class_group(Fi, {0, 1});
  CHECK_THROWS_AS(compatible_representatives(G0, 0), Error);
}

TEST_CASE("projection is a homomorphism onto the coarser group") {
  auto F = field("Qi", 5, 6);
  auto fine = build_ray_class_group(F, {2, 1});
  auto coarse = build_ray_class_group(F, {1, 1});
  std::set<int> hit;
  for (int y = 0; y < fine.order(); ++y) hit.insert(project_class(fine, y, coarse));
  CHECK(int(hit.size()) == coarse.order());
}

TEST_CASE("unsupported moduli are refused") {
  auto F = field("Qi", 3, 6);
  try {
    build_ray_class_group(F, {1});
    FAIL("inert prime accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Err::LevelUnsupported);
  }
}
