#include "padicl/coefficient_modules.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace padicl {

namespace {

int64_t binom(int64_t n, int64_t s) {
  if (s < 0 || s > n) return 0;
  __int128 r = 1;
  for (int64_t i = 1; i <= s; ++i) {
    r = r * (n - s + i) / i;
    if (r > INT64_MAX) throw Error(Err::InvalidInput, "binomial coefficient overflow");
  }
  return int64_t(r);
}

PAdicElement one_of(const Ctx& c) { return PAdicElement::from_int(c, 1); }

// coefficients of (x + yZ)^n in Z, n >= 0
std::vector<PAdicElement> binom_poly(const PAdicElement& x, const PAdicElement& y, int64_t n) {
  std::vector<PAdicElement> out;
  for (int64_t s = 0; s <= n; ++s) out.push_back((x.pow(n - s) * y.pow(s)).mul_int(binom(n, s)));
  return out;
}

std::vector<PAdicElement> mul_trunc(const std::vector<PAdicElement>& f, const std::vector<PAdicElement>& g, size_t len,
                                    const Ctx& c) {
  std::vector<PAdicElement> out(std::min(len, f.size() + g.size() - 1), PAdicElement::zero(c));
  for (size_t i = 0; i < f.size() && i < out.size(); ++i)
    for (size_t j = 0; j < g.size() && i + j < out.size(); ++j) out[i + j] += f[i] * g[j];
  return out;
}

// per-coordinate T for the V action
std::vector<std::vector<PAdicElement>> v_matrix(const PAdicElement& a, const PAdicElement& b, const PAdicElement& c,
                                                const PAdicElement& d, int64_t k, int64_t v) {
  const Ctx& L = a.ctx();
  PAdicElement det = (a * d - b * c).pow(v);
  std::vector<std::vector<PAdicElement>> T(size_t(k + 1));
  for (int64_t j = 0; j <= k; ++j) {
    auto f = binom_poly(d, b, k - j);
    auto g = binom_poly(c, a, j);
    auto h = mul_trunc(f, g, size_t(k + 1), L);
    for (auto& x : h) x = x * det;
    T[size_t(j)] = h;
  }
  return T;
}

std::shared_ptr<const std::vector<MultiIndex>> shared_total(int d, int M) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<MultiIndex>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, M}];
  if (!slot) slot = std::make_shared<const std::vector<MultiIndex>>(total_degree_indices(d, M));
  return slot;
}

int total(const MultiIndex& m) {
  int t = 0;
  for (int x : m) t += x;
  return t;
}

void same_shape(const MomentDistribution& a, const MomentDistribution& b) {
  if (a.M != b.M || a.N != b.N || a.w.k != b.w.k || a.w.v != b.w.v)
    throw Error(Err::InvalidInput, "distributions of different shape");
}

}  // namespace

int64_t Weight::total_k() const {
  int64_t t = 0;
  for (auto x : k) t += x;
  return t;
}

Weight make_weight(std::vector<int64_t> k, std::vector<int64_t> v) {
  if (k.empty() || k.size() != v.size()) throw Error(Err::InvalidInput, "weight vectors must have equal nonzero length");
  for (auto x : k)
    if (x < 0) throw Error(Err::InvalidInput, "weight k must be nonnegative");
  for (size_t i = 1; i < k.size(); ++i)
    if (k[i] + 2 * v[i] != k[0] + 2 * v[0]) throw Error(Err::NotParallel, "k + 2v is not parallel");
  return {k, v};
}

Weight make_weight(const NumberFieldData& F, std::vector<int64_t> k, std::vector<int64_t> v) {
  if (int(k.size()) != F.d) throw Error(Err::InvalidInput, "weight has the wrong length");
  for (int i = 0; i < F.d; ++i)
    if (k[size_t(i)] != k[size_t(F.conj[size_t(i)])]) throw Error(Err::InvalidInput, "k is not conjugation invariant");
  return make_weight(std::move(k), std::move(v));
}

int64_t k0_at(const NumberFieldData& F, const Weight& w, int i) {
  int64_t m = INT64_MAX;
  for (int s : F.primes.at(size_t(i)).sigmas) m = std::min(m, w.k[size_t(s)]);
  return m;
}

int64_t v_at(const NumberFieldData& F, const Weight& w, int i) {
  int64_t t = 0;
  for (int s : F.primes.at(size_t(i)).sigmas) t += w.v[size_t(s)];
  return t;
}

bool LocalMatrix::is_sigma0() const {
  for (int i = 0; i < dim(); ++i) {
    if (a[i].is_zero() || a[i].valuation() != 0) return false;
    if (!c[i].is_zero() && c[i].valuation() < 1) return false;
    if ((a[i] * d[i] - b[i] * c[i]).is_zero()) return false;
  }
  return true;
}

void check_sigma0(const LocalMatrix& g) {
  if (!g.is_sigma0()) throw Error(Err::InvalidInput, "matrix is not in Sigma0(p)");
}

LocalMatrix local_matrix(const Ctx& L, int64_t a, int64_t b, int64_t c, int64_t d, int dim) {
  LocalMatrix g;
  for (int i = 0; i < dim; ++i) {
    g.a.push_back(PAdicElement::from_int(L, a));
    g.b.push_back(PAdicElement::from_int(L, b));
    g.c.push_back(PAdicElement::from_int(L, c));
    g.d.push_back(PAdicElement::from_int(L, d));
  }
  return g;
}

LocalMatrix operator*(const LocalMatrix& x, const LocalMatrix& y) {
  if (x.dim() != y.dim()) throw Error(Err::InvalidInput, "matrix dimension mismatch");
  LocalMatrix g;
  for (int i = 0; i < x.dim(); ++i) {
    g.a.push_back(x.a[i] * y.a[i] + x.b[i] * y.c[i]);
    g.b.push_back(x.a[i] * y.b[i] + x.b[i] * y.d[i]);
    g.c.push_back(x.c[i] * y.a[i] + x.d[i] * y.c[i]);
    g.d.push_back(x.c[i] * y.b[i] + x.d[i] * y.d[i]);
  }
  return g;
}

std::vector<MultiIndex> box_indices(const std::vector<int64_t>& k) {
  std::vector<MultiIndex> out;
  MultiIndex j(k.size(), 0);
  while (true) {
    out.push_back(j);
    int i = int(k.size()) - 1;
    while (i >= 0 && j[size_t(i)] == k[size_t(i)]) j[size_t(i--)] = 0;
    if (i < 0) break;
    ++j[size_t(i)];
  }
  return out;
}

std::vector<MultiIndex> total_degree_indices(int d, int M) {
  std::vector<MultiIndex> out;
  for (int t = 0; t < M; ++t) {
    std::vector<int64_t> cap(size_t(d), t);
    for (auto& j : box_indices(cap))
      if (total(j) == t) out.push_back(j);
  }
  return out;
}

DualPolySymbol DualPolySymbol::zero(const Weight& w, const Ctx& c) {
  DualPolySymbol P{w, c, {}};
  P.val.assign(box_indices(w.k).size(), PAdicElement::zero(c));
  return P;
}

namespace {

// full T over the box of multidegrees
std::vector<std::vector<PAdicElement>> v_matrix_full(const Weight& w, const LocalMatrix& g, const Ctx& L) {
  if (g.dim() != w.d()) throw Error(Err::InvalidInput, "matrix dimension does not match the weight");
  std::vector<std::vector<std::vector<PAdicElement>>> T;
  for (int i = 0; i < w.d(); ++i) {
    if ((g.a[i] * g.d[i] - g.b[i] * g.c[i]).is_zero()) throw Error(Err::SingularMatrix, "singular matrix");
    T.push_back(v_matrix(g.a[i], g.b[i], g.c[i], g.d[i], w.k[size_t(i)], w.v[size_t(i)]));
  }
  auto box = box_indices(w.k);
  std::vector<std::vector<PAdicElement>> out(box.size(), std::vector<PAdicElement>(box.size(), PAdicElement::zero(L)));
  for (size_t r = 0; r < box.size(); ++r)
    for (size_t s = 0; s < box.size(); ++s) {
      PAdicElement x = one_of(L);
      for (int i = 0; i < w.d(); ++i) x = x * T[size_t(i)][size_t(box[r][size_t(i)])][size_t(box[s][size_t(i)])];
      out[r][s] = x;
    }
  return out;
}

}  // namespace

PolyV act_V(const LocalMatrix& g, const PolyV& P) {
  auto T = v_matrix_full(P.w, g, P.ctx);
  PolyV out = DualPolySymbol::zero(P.w, P.ctx);
  for (size_t r = 0; r < T.size(); ++r)
    for (size_t s = 0; s < T.size(); ++s) out.val[s] += P.val[r] * T[r][s];
  return out;
}

DualPolySymbol act_dual(const DualPolySymbol& P, const LocalMatrix& g) {
  auto T = v_matrix_full(P.w, g, P.ctx);
  DualPolySymbol out = DualPolySymbol::zero(P.w, P.ctx);
  for (size_t r = 0; r < T.size(); ++r)
    for (size_t s = 0; s < T.size(); ++s) out.val[r] += T[r][s] * P.val[s];
  return out;
}

DualPolySymbol operator+(const DualPolySymbol& a, const DualPolySymbol& b) {
  DualPolySymbol o = a;
  for (size_t i = 0; i < o.val.size(); ++i) o.val[i] += b.val[i];
  return o;
}

DualPolySymbol operator-(const DualPolySymbol& a, const DualPolySymbol& b) {
  DualPolySymbol o = a;
  for (size_t i = 0; i < o.val.size(); ++i) o.val[i] -= b.val[i];
  return o;
}

DualPolySymbol scale(const DualPolySymbol& a, const PAdicElement& s) {
  DualPolySymbol o = a;
  for (auto& x : o.val) x = x * s;
  return o;
}

bool equals(const DualPolySymbol& a, const DualPolySymbol& b) {
  if (a.val.size() != b.val.size()) return false;
  for (size_t i = 0; i < a.val.size(); ++i)
    if (!a.val[i].equals(b.val[i])) return false;
  return true;
}

std::vector<std::vector<mpq_class>> v_action_matrix_q(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                                      const mpq_class& d, int64_t k, int64_t v) {
  mpq_class det = a * d - b * c;
  if (det == 0) throw Error(Err::SingularMatrix, "singular matrix");
  mpq_class dv = 1;
  for (int64_t i = 0; i < (v < 0 ? -v : v); ++i) dv *= det;
  if (v < 0) dv = 1 / dv;
  auto bp = [](const mpq_class& x, const mpq_class& y, int64_t n) {
    std::vector<mpq_class> out;
    for (int64_t s = 0; s <= n; ++s) {
      mpq_class t = binom(n, s);
      for (int64_t i = 0; i < n - s; ++i) t *= x;
      for (int64_t i = 0; i < s; ++i) t *= y;
      out.push_back(t);
    }
    return out;
  };
  std::vector<std::vector<mpq_class>> T(size_t(k + 1), std::vector<mpq_class>(size_t(k + 1), 0));
  for (int64_t j = 0; j <= k; ++j) {
    auto f = bp(d, b, k - j), g = bp(c, a, j);
    for (size_t s = 0; s < f.size(); ++s)
      for (size_t u = 0; u < g.size(); ++u) T[size_t(j)][s + u] += f[s] * g[u] * dv;
  }
  return T;
}

int MomentDistribution::profile(int t) const {
  int e = ctx->e;
  return std::max(0, N - (t + e - 1) / e);
}

int MomentDistribution::degree(size_t i) const { return total((*idx)[i]); }

int MomentDistribution::index_of(const MultiIndex& m) const {
  for (size_t i = 0; i < idx->size(); ++i)
    if ((*idx)[i] == m) return int(i);
  throw Error(Err::InvalidInput, "moment index beyond the truncation");
}

MomentDistribution MomentDistribution::zero(const Weight& w, const Ctx& c, int M, int N) {
  if (M < 1) throw Error(Err::InvalidInput, "need at least one moment");
  MomentDistribution mu;
  mu.w = w;
  mu.ctx = c;
  mu.M = M;
  mu.N = N;
  mu.idx = shared_total(w.d(), M);
  for (size_t i = 0; i < mu.idx->size(); ++i) mu.mom.push_back(PAdicElement::zero(c, mu.profile(mu.degree(i))));
  return mu;
}

MomentDistribution MomentDistribution::truncated() const {
  MomentDistribution o = *this;
  for (size_t i = 0; i < mom.size(); ++i) o.mom[i] = mom[i].truncate(profile(degree(i)));
  return o;
}

bool MomentDistribution::equals(const MomentDistribution& o) const {
  same_shape(*this, o);
  for (size_t i = 0; i < mom.size(); ++i) {
    auto diff = (mom[i] - o.mom[i]).truncate(profile(degree(i)));
    if (!diff.is_zero()) return false;
  }
  return true;
}

bool MomentDistribution::is_zero() const {
  for (size_t i = 0; i < mom.size(); ++i)
    if (!mom[i].truncate(profile(degree(i))).is_zero()) return false;
  return true;
}

bool MomentDistribution::meets_profile() const { return precision_margin() >= 0; }

int MomentDistribution::precision_margin() const {
  int m = PAdicElement::kInf;
  for (size_t i = 0; i < mom.size(); ++i) m = std::min(m, mom[i].precision() - profile(degree(i)));
  return m;
}

MomentDistribution operator+(const MomentDistribution& a, const MomentDistribution& b) {
  same_shape(a, b);
  MomentDistribution o = a;
  for (size_t i = 0; i < o.mom.size(); ++i) o.mom[i] += b.mom[i];
  return o;
}

MomentDistribution operator-(const MomentDistribution& a, const MomentDistribution& b) {
  same_shape(a, b);
  MomentDistribution o = a;
  for (size_t i = 0; i < o.mom.size(); ++i) o.mom[i] -= b.mom[i];
  return o;
}

MomentDistribution scale(const MomentDistribution& a, const PAdicElement& s) {
  MomentDistribution o = a;
  for (auto& x : o.mom) x = x * s;
  return o;
}

DistActionMatrix dist_action_matrix(const Weight& w, const LocalMatrix& g, int M) {
  check_sigma0(g);
  if (g.dim() != w.d()) throw Error(Err::InvalidInput, "matrix dimension does not match the weight");
  DistActionMatrix D;
  D.M = M;
  for (int i = 0; i < w.d(); ++i) {
    const PAdicElement &a = g.a[i], &b = g.b[i], &c = g.c[i], &d = g.d[i];
    const Ctx& L = a.ctx();
    std::vector<std::vector<PAdicElement>> A;
    auto row = binom_poly(a, c, w.k[size_t(i)]);
    PAdicElement det = (a * d - b * c).pow(w.v[size_t(i)]);
    for (auto& x : row) x = x * det;
    row.resize(size_t(M), PAdicElement::zero(L));
    PAdicElement ainv = a.inverse();
    std::vector<PAdicElement> bd{b, d};
    for (int m = 0; m < M; ++m) {
      A.push_back(row);
      // row * (b + dz) / (a + cz)
      auto f = mul_trunc(row, bd, size_t(M), L);
      f.resize(size_t(M), PAdicElement::zero(L));
      std::vector<PAdicElement> h(size_t(M), PAdicElement::zero(L));
      for (int s = 0; s < M; ++s) h[size_t(s)] = (s == 0 ? f[0] : f[size_t(s)] - c * h[size_t(s - 1)]) * ainv;
      row = h;
    }
    D.A.push_back(A);
  }
  return D;
}

MomentDistribution apply(const DistActionMatrix& D, const MomentDistribution& mu) {
  if (D.M != mu.M || int(D.A.size()) != mu.w.d()) throw Error(Err::InvalidInput, "action matrix shape mismatch");
  MomentDistribution out = mu;
  const auto& idx = *mu.idx;
  int d = mu.w.d();
  for (size_t r = 0; r < idx.size(); ++r) {
    PAdicElement s = PAdicElement::zero(mu.ctx);
    for (size_t c = 0; c < idx.size(); ++c) {
      if (d == 1) {
        s += D.A[0][size_t(idx[r][0])][size_t(idx[c][0])] * mu.mom[c];
        continue;
      }
      PAdicElement x = mu.mom[c];
      for (int i = 0; i < d; ++i) x = x * D.A[size_t(i)][size_t(idx[r][size_t(i)])][size_t(idx[c][size_t(i)])];
      s += x;
    }
    out.mom[r] = s.truncate(mu.profile(mu.degree(r)));
  }
  return out;
}

MomentDistribution act_D(const MomentDistribution& mu, const LocalMatrix& g) {
  return apply(dist_action_matrix(mu.w, g, mu.M), mu);
}

DualPolySymbol specialise(const MomentDistribution& mu) {
  if (mu.M <= mu.w.total_k()) throw Error(Err::PrecisionInsufficient, "truncation too shallow to specialise");
  DualPolySymbol P = DualPolySymbol::zero(mu.w, mu.ctx);
  auto box = box_indices(mu.w.k);
  for (size_t r = 0; r < box.size(); ++r) {
    MultiIndex m(box[r].size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = int(mu.w.k[i]) - box[r][i];
    P.val[r] = mu.at(m);
  }
  return P;
}

MonomialRequest star_twist(const Weight& w, const PAdicElement& c, const std::vector<int64_t>& r) {
  if (int(r.size()) != w.d()) throw Error(Err::InvalidInput, "exponent vector has the wrong length");
  MonomialRequest q;
  for (int i = 0; i < w.d(); ++i) {
    int64_t e = w.k[size_t(i)] + w.v[size_t(i)] - r[size_t(i)];
    if (e < 0) throw Error(Err::NotCritical, "character is not critical for this weight");
    q.exponent.push_back(e);
  }
  q.scalar = c;
  return q;
}

}  // namespace padicl
