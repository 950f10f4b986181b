#pragma once

#include <gmpxx.h>
#include <memory>
#include <vector>

#include "padicl/field_data.hpp"

namespace padicl {

/// lambda = (k, v), one entry per coordinate of O_F (x) Z_p.
struct Weight {
  std::vector<int64_t> k, v;
  int d() const { return int(k.size()); }
  int64_t parallel() const { return k[0] + 2 * v[0]; }
  int64_t total_k() const;
};
/// Checks k >= 0 and k + 2v parallel.
Weight make_weight(std::vector<int64_t> k, std::vector<int64_t> v);
/// Checks k = ck as well.
Weight make_weight(const NumberFieldData& F, std::vector<int64_t> k, std::vector<int64_t> v);
/// k_P^0 = min k_sigma over sigma ~ P.
int64_t k0_at(const NumberFieldData& F, const Weight& w, int prime_index);
/// v_P = sum of v_sigma over sigma ~ P.
int64_t v_at(const NumberFieldData& F, const Weight& w, int prime_index);

/// Componentwise 2x2 matrix over L.
struct LocalMatrix {
  OFpElement a, b, c, d;
  int dim() const { return int(a.size()); }
  bool is_sigma0() const;
};
LocalMatrix local_matrix(const Ctx& L, int64_t a, int64_t b, int64_t c, int64_t d, int dim = 1);
LocalMatrix operator*(const LocalMatrix& x, const LocalMatrix& y);
/// Throws InvalidInput unless c = 0 mod p and a is a unit in every coordinate.
void check_sigma0(const LocalMatrix& g);

using MultiIndex = std::vector<int>;
/// 0 <= j <= k, last coordinate fastest.
std::vector<MultiIndex> box_indices(const std::vector<int64_t>& k);
/// Total degree < M, graded.
std::vector<MultiIndex> total_degree_indices(int d, int M);

/// Element of V_lambda(L)^*: value on X^{k-j} Y^j per multidegree j.
struct DualPolySymbol {
  Weight w;
  Ctx ctx;
  std::vector<PAdicElement> val;
  static DualPolySymbol zero(const Weight& w, const Ctx& c);
};
/// Polynomial in V_lambda with the same indexing (coefficient of X^{k-j} Y^j).
using PolyV = DualPolySymbol;

/// det^v P(bY + dX, aY + cX).
PolyV act_V(const LocalMatrix& g, const PolyV& P);
/// (P|g)(f) = P(g . f).
DualPolySymbol act_dual(const DualPolySymbol& P, const LocalMatrix& g);
DualPolySymbol operator+(const DualPolySymbol& a, const DualPolySymbol& b);
DualPolySymbol operator-(const DualPolySymbol& a, const DualPolySymbol& b);
DualPolySymbol scale(const DualPolySymbol& a, const PAdicElement& s);
bool equals(const DualPolySymbol& a, const DualPolySymbol& b);

/// F = Q: T with (phi|g)(X^{k-j}Y^j) = sum_j' T[j][j'] phi(X^{k-j'}Y^{j'}).
std::vector<std::vector<mpq_class>> v_action_matrix_q(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                                      const mpq_class& d, int64_t k, int64_t v);

/// Truncation of D_lambda(L): moments of z^m for total degree < M; degree t is kept
/// modulo uniformizer^(N - ceil(t/e)).
struct MomentDistribution {
  Weight w;
  Ctx ctx;
  int M = 0;
  int N = 0;
  std::shared_ptr<const std::vector<MultiIndex>> idx;
  std::vector<PAdicElement> mom;

  int profile(int t) const;
  int degree(size_t i) const;
  int index_of(const MultiIndex& m) const;
  const PAdicElement& at(const MultiIndex& m) const { return mom[size_t(index_of(m))]; }
  static MomentDistribution zero(const Weight& w, const Ctx& c, int M, int N);
  /// Cap every moment at the profile.
  MomentDistribution truncated() const;
  /// Equal modulo the profile.
  bool equals(const MomentDistribution& o) const;
  bool is_zero() const;
  /// Every moment carries at least its profile precision.
  bool meets_profile() const;
  /// Smallest precision surplus over the profile (negative if short).
  int precision_margin() const;
};
MomentDistribution operator+(const MomentDistribution& a, const MomentDistribution& b);
MomentDistribution operator-(const MomentDistribution& a, const MomentDistribution& b);
MomentDistribution scale(const MomentDistribution& a, const PAdicElement& s);

/// A[m][m'] = coefficient of z^{m'} in g . z^m, per coordinate, for m, m' < M.
struct DistActionMatrix {
  int M = 0;
  std::vector<std::vector<std::vector<PAdicElement>>> A;  // [coordinate][m][m']
};
DistActionMatrix dist_action_matrix(const Weight& w, const LocalMatrix& g, int M);
/// mu|g from a precomputed matrix; the result is capped at the profile.
MomentDistribution apply(const DistActionMatrix& A, const MomentDistribution& mu);
/// (mu|g)(f) = mu(g . f), g . f(z) = det^v (a + cz)^k f((b + dz)/(a + cz)).
MomentDistribution act_D(const MomentDistribution& mu, const LocalMatrix& g);
/// rho(mu)(X^{k-j} Y^j) = mu(z^{k-j}).
DualPolySymbol specialise(const MomentDistribution& mu);

struct MonomialRequest {
  std::vector<int64_t> exponent;
  PAdicElement scalar;
};
/// psi = c z^r on a coset: mu(psi*) = c mu(z^{k+v-r}).
MonomialRequest star_twist(const Weight& w, const PAdicElement& c, const std::vector<int64_t>& r);

}  // namespace padicl
