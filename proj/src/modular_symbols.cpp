#include "padicl/modular_symbols.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

namespace padicl {

namespace {

int64_t mul64(int64_t x, int64_t y) {
  __int128 r = __int128(x) * y;
  if (r > INT64_MAX || r < INT64_MIN) throw Error(Err::InvalidInput, "matrix entry overflow");
  return int64_t(r);
}

int64_t add64(int64_t x, int64_t y) {
  __int128 r = __int128(x) + y;
  if (r > INT64_MAX || r < INT64_MIN) throw Error(Err::InvalidInput, "matrix entry overflow");
  return int64_t(r);
}

int64_t mod_n(int64_t x, int64_t n) { return ((x % n) + n) % n; }

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

const IntMat kS{0, -1, 1, 0};
const IntMat kSinv{0, 1, -1, 0};
const IntMat kTau{0, -1, 1, 1};
const IntMat kTau2{-1, -1, 1, 0};
const IntMat kTinv{1, -1, 0, 1};

Program negate(Program P) {
  for (auto& t : P) t.coeff = -t.coeff;
  return P;
}

Program compose(Program P, const IntMat& g) {
  for (auto& t : P) t.m = t.m * g;
  return P;
}

void append(Program& a, const Program& b) { a.insert(a.end(), b.begin(), b.end()); }

Cusp act_cusp(const IntMat& g, const Cusp& x) {
  int64_t n = add64(mul64(g.a, x.num), mul64(g.b, x.den));
  int64_t d = add64(mul64(g.c, x.num), mul64(g.d, x.den));
  if (d < 0 || (d == 0 && n < 0)) {
    n = -n;
    d = -d;
  }
  int64_t gg = std::gcd(n, d);
  if (gg > 1) {
    n /= gg;
    d /= gg;
  }
  if (d == 0) n = 1;
  return {n, d};
}

}  // namespace

int64_t IntMat::det() const { return add64(mul64(a, d), -mul64(b, c)); }

bool IntMat::operator<(const IntMat& o) const {
  return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d);
}

IntMat operator*(const IntMat& x, const IntMat& y) {
  return {add64(mul64(x.a, y.a), mul64(x.b, y.c)), add64(mul64(x.a, y.b), mul64(x.b, y.d)),
          add64(mul64(x.c, y.a), mul64(x.d, y.c)), add64(mul64(x.c, y.b), mul64(x.d, y.d))};
}

IntMat inv_sl2(const IntMat& g) {
  if (g.det() != 1) throw Error(Err::InvalidInput, "matrix not in SL2(Z)");
  return {g.d, -g.b, -g.c, g.a};
}

Program simplify(Program P) {
  std::sort(P.begin(), P.end(), [](const SymbolTerm& x, const SymbolTerm& y) {
    if (x.gen != y.gen) return x.gen < y.gen;
    return x.m < y.m;
  });
  Program out;
  for (auto& t : P) {
    if (!out.empty() && out.back().gen == t.gen && out.back().m == t.m) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const SymbolTerm& t) { return t.coeff == 0; }), out.end());
  return out;
}

int SymbolSpace::class_of(int64_t c, int64_t d) const {
  int k = p1_table[size_t(mod_n(c, N) * N + mod_n(d, N))];
  if (k < 0) throw Error(Err::InvalidInput, "bottom row not primitive mod N");
  return k;
}

bool SymbolSpace::in_gamma0(const IntMat& g) const { return g.det() == 1 && mod_n(g.c, N) == 0; }

Program SymbolSpace::manin(const IntMat& g) const {
  int k = class_of(g.c, g.d);
  IntMat gamma = g * inv_sl2(rep[size_t(k)]);
  if (!in_gamma0(gamma)) throw Error(Err::FieldInconsistent, "edge lookup left Gamma0(N)");
  return compose(expr[size_t(k)], inv_sl2(gamma));
}

Program SymbolSpace::cusp_to_inf(const Cusp& r) const {
  Program out;
  if (r.den == 0) return out;
  int64_t a = r.num, b = r.den;
  int64_t p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  while (b != 0) {
    int64_t q = floor_div(a, b);
    int64_t rem = a - q * b;
    a = b;
    b = rem;
    int64_t pk = add64(mul64(q, p1), p2), qk = add64(mul64(q, q1), q2);
    IntMat g{pk, p1, qk, q1};
    if (g.det() == -1) g = {-pk, p1, -qk, q1};
    append(out, negate(manin(g)));
    p2 = p1;
    p1 = pk;
    q2 = q1;
    q1 = qk;
  }
  return out;
}

Program SymbolSpace::divisor(const Cusp& r, const Cusp& s) const {
  Program out = cusp_to_inf(r);
  append(out, negate(cusp_to_inf(s)));
  return simplify(out);
}

std::pair<Cusp, Cusp> SymbolSpace::gen_divisor(int gen) const {
  if (gen == w_gen()) return {Cusp{1, 0}, Cusp{0, 1}};
  int i = free_arcs.at(size_t(gen));
  return {cusps[size_t(i)], cusps[size_t(i) + 1]};
}

std::vector<Program> SymbolSpace::hecke_program(int64_t ell) const {
  std::vector<IntMat> betas;
  for (int64_t b = 0; b < ell; ++b) betas.push_back({1, b, 0, ell});
  if (N % ell != 0) betas.push_back({ell, 0, 0, 1});
  std::vector<Program> out;
  for (int g = 0; g < num_gens(); ++g) {
    auto [r, s] = gen_divisor(g);
    Program P;
    for (auto& beta : betas) append(P, compose(divisor(act_cusp(beta, r), act_cusp(beta, s)), beta));
    out.push_back(simplify(P));
  }
  return out;
}

std::vector<Program> SymbolSpace::weyl_program() const {
  IntMat iota{-1, 0, 0, 1};
  std::vector<Program> out;
  for (int g = 0; g < num_gens(); ++g) {
    auto [r, s] = gen_divisor(g);
    out.push_back(simplify(compose(divisor(act_cusp(iota, r), act_cusp(iota, s)), iota)));
  }
  return out;
}

SymbolSpace build_symbol_space(int64_t N, int64_t p) {
  if (N < 2) throw Error(Err::LevelUnsupported, "level must be at least 2");
  if (N > 2000) throw Error(Err::LevelUnsupported, "level beyond the configured bound");
  if (p > 0 && N % p != 0) throw Error(Err::PreconditionFailed, "p must divide the level");
  SymbolSpace S;
  S.N = N;
  S.p = p;
  S.p1_table.assign(size_t(N * N), -1);
  std::vector<int64_t> units;
  for (int64_t u = 1; u < N; ++u)
    if (std::gcd(u, N) == 1) units.push_back(u);
  for (int64_t c = 0; c < N; ++c)
    for (int64_t d = 0; d < N; ++d) {
      if (std::gcd(std::gcd(c, d), N) != 1) continue;
      if (S.p1_table[size_t(c * N + d)] >= 0) continue;
      int k = int(S.p1.size());
      S.p1.push_back({c, d});
      for (auto u : units) S.p1_table[size_t((u * c % N) * N + u * d % N)] = k;
    }
  int mu = S.index();
  if (mu % 3 != 0) throw Error(Err::LevelUnsupported, "Gamma0(N) has elliptic points of order 3");

  // Farey domain by greedy pairing and mediant subdivision
  S.cusps = {{0, 1}, {1, 1}};
  int cls_S = S.class_of(1, 0), cls_I = S.class_of(0, 1);
  std::vector<int> partner;
  while (true) {
    size_t n = S.cusps.size() - 1;
    if (int(n) > mu / 3) throw Error(Err::LevelUnsupported, "Farey construction did not close (elliptic points?)");
    std::vector<int> cls(n), scls(n);
    std::map<int, int> by_class;
    for (size_t i = 0; i < n; ++i) {
      auto &x = S.cusps[i], &y = S.cusps[i + 1];
      cls[i] = S.class_of(y.den, x.den);
      scls[i] = S.class_of(x.den, -y.den);
      if (cls[i] == cls_S || cls[i] == cls_I || by_class.count(cls[i]))
        throw Error(Err::LevelUnsupported, "Farey arcs overlap (elliptic points?)");
      by_class[cls[i]] = int(i);
    }
    partner.assign(n, -1);
    int first_unpaired = -1;
    for (size_t i = 0; i < n; ++i) {
      auto it = by_class.find(scls[i]);
      if (it != by_class.end()) {
        if (it->second == int(i)) throw Error(Err::LevelUnsupported, "Gamma0(N) has elliptic points of order 2");
        partner[i] = it->second;
      } else if (first_unpaired < 0) {
        first_unpaired = int(i);
      }
    }
    if (first_unpaired < 0) break;
    auto &x = S.cusps[size_t(first_unpaired)], &y = S.cusps[size_t(first_unpaired) + 1];
    Cusp m{x.num + y.num, x.den + y.den};
    S.cusps.insert(S.cusps.begin() + first_unpaired + 1, m);
  }
  size_t n = S.cusps.size() - 1;
  if (int(n) != mu / 3) throw Error(Err::FieldInconsistent, "Farey domain has the wrong number of arcs");
  for (size_t i = 0; i < n; ++i) {
    auto &x = S.cusps[i], &y = S.cusps[i + 1];
    S.arcs.push_back({y.num, x.num, y.den, x.den});
    if (S.arcs.back().det() != 1) throw Error(Err::FieldInconsistent, "Farey neighbours expected");
  }
  S.partner = partner;
  std::vector<int> gen_of(n, -1);
  for (size_t i = 0; i < n; ++i) {
    if (S.partner[size_t(S.partner[i])] != int(i)) throw Error(Err::FieldInconsistent, "pairing is not a matching");
    if (S.partner[i] > int(i)) {
      gen_of[i] = int(S.free_arcs.size());
      S.free_arcs.push_back(int(i));
      IntMat gamma = S.arcs[size_t(S.partner[i])] * kSinv * inv_sl2(S.arcs[i]);
      if (!S.in_gamma0(gamma)) throw Error(Err::FieldInconsistent, "side pairing not in Gamma0(N)");
      S.delta.push_back(inv_sl2(gamma));
    }
  }

  // edge table
  S.rep.assign(size_t(mu), IntMat{});
  S.expr.assign(size_t(mu), Program{});
  std::vector<bool> known(size_t(mu), false);
  std::deque<int> queue;
  auto set = [&](const IntMat& g, Program P) {
    int k = S.class_of(g.c, g.d);
    if (known[size_t(k)]) return;
    known[size_t(k)] = true;
    S.rep[size_t(k)] = g;
    S.expr[size_t(k)] = simplify(std::move(P));
    queue.push_back(k);
  };
  int w = S.w_gen();
  set(kS, {{w, 1, IntMat{}}});
  set(IntMat{}, {{w, -1, IntMat{}}});
  for (size_t i = 0; i < n; ++i) {
    if (gen_of[i] >= 0) {
      set(S.arcs[i], {{gen_of[i], 1, IntMat{}}});
    } else {
      int j = S.partner[i];
      int g = gen_of[size_t(j)];
      set(S.arcs[i], {{g, -1, S.delta[size_t(g)]}});
    }
  }
  auto is_known = [&](const IntMat& g) { return known[size_t(S.class_of(g.c, g.d))]; };
  while (!queue.empty()) {
    int k = queue.front();
    queue.pop_front();
    IntMat g = S.rep[size_t(k)];
    set(g * kS, negate(S.expr[size_t(k)]));
    IntMat t1 = g * kTau, t2 = g * kTau2;
    bool k1 = is_known(t1), k2 = is_known(t2);
    if (k1 && !k2) {
      Program P = negate(S.expr[size_t(k)]);
      append(P, negate(S.manin(t1)));
      set(t2, P);
    } else if (k2 && !k1) {
      Program P = negate(S.expr[size_t(k)]);
      append(P, negate(S.manin(t2)));
      set(t1, P);
    }
  }
  for (int k = 0; k < mu; ++k)
    if (!known[size_t(k)]) throw Error(Err::FieldInconsistent, "edge table incomplete");
  return S;
}

// classical symbols over L

ClassicalSymbol classical_zero(const SymbolSpace& S, const Weight& w, const Ctx& c) {
  ClassicalSymbol phi;
  phi.S = &S;
  phi.w = w;
  phi.val.assign(size_t(S.num_gens()), DualPolySymbol::zero(w, c));
  return phi;
}

namespace {

LocalMatrix lm(const Ctx& c, const IntMat& m) { return local_matrix(c, m.a, m.b, m.c, m.d); }

}  // namespace

DualPolySymbol evaluate(const ClassicalSymbol& phi, const Program& P) {
  const Ctx& c = phi.val[0].ctx;
  DualPolySymbol out = DualPolySymbol::zero(phi.w, c);
  for (auto& t : P)
    out = out + scale(act_dual(phi.val[size_t(t.gen)], lm(c, t.m)), PAdicElement::from_int(c, t.coeff));
  return out;
}

ClassicalSymbol apply_program(const ClassicalSymbol& phi, const std::vector<Program>& prog) {
  ClassicalSymbol out = phi;
  for (size_t g = 0; g < prog.size(); ++g) out.val[g] = evaluate(phi, prog[g]);
  return out;
}

ClassicalSymbol act_hecke(const ClassicalSymbol& phi, int64_t ell) { return apply_program(phi, phi.S->hecke_program(ell)); }

ClassicalSymbol act_weyl(const ClassicalSymbol& phi) { return apply_program(phi, phi.S->weyl_program()); }

ClassicalSymbol operator+(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  ClassicalSymbol o = a;
  for (size_t i = 0; i < o.val.size(); ++i) o.val[i] = a.val[i] + b.val[i];
  return o;
}

ClassicalSymbol operator-(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  ClassicalSymbol o = a;
  for (size_t i = 0; i < o.val.size(); ++i) o.val[i] = a.val[i] - b.val[i];
  return o;
}

ClassicalSymbol scale(const ClassicalSymbol& a, const PAdicElement& s) {
  ClassicalSymbol o = a;
  for (auto& v : o.val) v = scale(v, s);
  return o;
}

bool equals(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  for (size_t i = 0; i < a.val.size(); ++i)
    if (!equals(a.val[i], b.val[i])) return false;
  return true;
}

DualPolySymbol relation_residual(const ClassicalSymbol& phi) {
  const SymbolSpace& S = *phi.S;
  const Ctx& c = phi.val[0].ctx;
  auto& w = phi.val[size_t(S.w_gen())];
  DualPolySymbol r = act_dual(w, lm(c, kTinv)) - w;
  for (int i = 0; i < S.num_free(); ++i)
    r = r - (phi.val[size_t(i)] - act_dual(phi.val[size_t(i)], lm(c, S.delta[size_t(i)])));
  return r;
}

// distribution symbols

DistProgram compile(const std::vector<Program>& prog, const SymbolSpace& S, const Weight& w, const Ctx& c, int M) {
  DistProgram D;
  D.M = M;
  size_t G = size_t(S.num_gens());
  D.B.assign(prog.size(), std::vector<DistActionMatrix>(G));
  D.used.assign(prog.size(), std::vector<bool>(G, false));
  std::map<IntMat, DistActionMatrix> cache;
  for (size_t o = 0; o < prog.size(); ++o)
    for (auto& t : prog[o]) {
      auto it = cache.find(t.m);
      if (it == cache.end()) it = cache.emplace(t.m, dist_action_matrix(w, lm(c, t.m), M)).first;
      auto& src = it->second.A[0];
      auto& dst = D.B[o][size_t(t.gen)];
      PAdicElement co = PAdicElement::from_int(c, t.coeff);
      if (!D.used[o][size_t(t.gen)]) {
        dst.M = M;
        dst.A.assign(1, std::vector<std::vector<PAdicElement>>(size_t(M), std::vector<PAdicElement>(size_t(M), PAdicElement::zero(c))));
        D.used[o][size_t(t.gen)] = true;
      }
      for (int r = 0; r < M; ++r)
        for (int s = 0; s < M; ++s) dst.A[0][size_t(r)][size_t(s)] += co * src[size_t(r)][size_t(s)];
    }
  return D;
}

DistSymbol apply(const DistProgram& P, const DistSymbol& psi) {
  DistSymbol out = psi;
  const auto& proto = psi.val[0];
  for (size_t o = 0; o < P.B.size(); ++o) {
    MomentDistribution acc = MomentDistribution::zero(proto.w, proto.ctx, proto.M, proto.N);
    for (size_t g = 0; g < P.B[o].size(); ++g)
      if (P.used[o][g]) acc = acc + apply(P.B[o][g], psi.val[g]);
    out.val[o] = acc.truncated();
  }
  return out;
}

MomentDistribution evaluate(const DistSymbol& psi, const Program& P) {
  const auto& proto = psi.val[0];
  MomentDistribution acc = MomentDistribution::zero(proto.w, proto.ctx, proto.M, proto.N);
  for (auto& t : P)
    acc = acc + scale(act_D(psi.val[size_t(t.gen)], lm(proto.ctx, t.m)), PAdicElement::from_int(proto.ctx, t.coeff));
  return acc.truncated();
}

DistSymbol operator-(const DistSymbol& a, const DistSymbol& b) {
  DistSymbol o = a;
  for (size_t i = 0; i < o.val.size(); ++i) o.val[i] = a.val[i] - b.val[i];
  return o;
}

DistSymbol scale(const DistSymbol& a, const PAdicElement& s) {
  DistSymbol o = a;
  for (auto& v : o.val) v = scale(v, s).truncated();
  return o;
}

bool equals(const DistSymbol& a, const DistSymbol& b) {
  for (size_t i = 0; i < a.val.size(); ++i)
    if (!a.val[i].equals(b.val[i])) return false;
  return true;
}

MomentDistribution relation_residual(const DistSymbol& psi) {
  const SymbolSpace& S = *psi.S;
  const Ctx& c = psi.val[0].ctx;
  auto& w = psi.val[size_t(S.w_gen())];
  MomentDistribution r = act_D(w, lm(c, kTinv)) - w;
  for (int i = 0; i < S.num_free(); ++i)
    r = r - (psi.val[size_t(i)] - act_D(psi.val[size_t(i)], lm(c, S.delta[size_t(i)])));
  return r.truncated();
}

ClassicalSymbol specialise(const DistSymbol& psi) {
  ClassicalSymbol phi;
  phi.S = psi.S;
  phi.w = psi.val[0].w;
  for (auto& v : psi.val) phi.val.push_back(specialise(v));
  return phi;
}

// the classical space over Q

namespace {

const QMat& vq(std::map<IntMat, QMat>& cache, const IntMat& m, int64_t k) {
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, v_action_matrix_q(m.a, m.b, m.c, m.d, k, 0)).first;
  return it->second;
}

QMat relation_rows(const SymbolSpace& S, int64_t k) {
  size_t K = size_t(k + 1), G = size_t(S.num_gens());
  QMat rows(K, QVec(G * K, 0));
  std::map<IntMat, QMat> cache;
  const QMat& T = vq(cache, kTinv, k);
  size_t wo = size_t(S.w_gen()) * K;
  for (size_t j = 0; j < K; ++j) {
    for (size_t jj = 0; jj < K; ++jj) rows[j][wo + jj] += T[j][jj];
    rows[j][wo + j] -= 1;
    for (int i = 0; i < S.num_free(); ++i) {
      const QMat& D = vq(cache, S.delta[size_t(i)], k);
      size_t off = size_t(i) * K;
      rows[j][off + j] -= 1;
      for (size_t jj = 0; jj < K; ++jj) rows[j][off + jj] += D[j][jj];
    }
  }
  return rows;
}

}  // namespace

ClassicalSpace classical_space(const SymbolSpace& S, int64_t k) {
  ClassicalSpace V;
  V.S = &S;
  V.k = k;
  QMat rows = relation_rows(S, k);
  size_t cols = size_t(S.num_gens()) * size_t(k + 1);
  QMat r = rows;
  auto piv = q_rref(r);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  for (size_t c = 0; c < cols; ++c)
    if (!is_piv[c]) V.coords.push_back(c);
  V.basis = q_kernel(rows, cols);
  return V;
}

int64_t expected_dimension(const SymbolSpace& S, int64_t k) {
  int64_t mu = S.index();
  return k == 0 ? mu / 6 + 1 : (k + 1) * mu / 6;
}

QVec apply_program_q(const SymbolSpace&, int64_t k, const std::vector<Program>& prog, const QVec& x) {
  size_t K = size_t(k + 1);
  QVec y(x.size(), 0);
  std::map<IntMat, QMat> cache;
  for (size_t o = 0; o < prog.size(); ++o)
    for (auto& t : prog[o]) {
      const QMat& T = vq(cache, t.m, k);
      size_t in = size_t(t.gen) * K;
      for (size_t j = 0; j < K; ++j) {
        mpq_class s = 0;
        for (size_t jj = 0; jj < K; ++jj)
          if (T[j][jj] != 0) s += T[j][jj] * x[in + jj];
        y[o * K + j] += s * t.coeff;
      }
    }
  return y;
}

QVec coordinates(const ClassicalSpace& V, const QVec& x) {
  QVec c;
  for (auto i : V.coords) c.push_back(x[i]);
  return c;
}

QVec from_coordinates(const ClassicalSpace& V, const QVec& c) {
  QVec x(V.basis.empty() ? 0 : V.basis[0].size(), 0);
  for (size_t b = 0; b < V.basis.size(); ++b)
    if (c[b] != 0)
      for (size_t i = 0; i < x.size(); ++i) x[i] += c[b] * V.basis[b][i];
  return x;
}

QMat operator_matrix(const ClassicalSpace& V, const std::vector<Program>& prog) {
  size_t d = V.dim();
  QMat A(d, QVec(d, 0));
  QMat rows = relation_rows(*V.S, V.k);
  for (size_t b = 0; b < d; ++b) {
    QVec y = apply_program_q(*V.S, V.k, prog, V.basis[b]);
    for (auto& row : rows) {
      mpq_class s = 0;
      for (size_t i = 0; i < y.size(); ++i) s += row[i] * y[i];
      if (s != 0) throw Error(Err::FieldInconsistent, "operator does not preserve the relation");
    }
    QVec c = coordinates(V, y);
    for (size_t i = 0; i < d; ++i) A[i][b] = c[i];
  }
  return A;
}

PAdicElement padic_from_mpq(const Ctx& c, const mpq_class& q) {
  if (q == 0) return PAdicElement::zero(c);
  mpz_class num = q.get_num(), den = q.get_den();
  int v = 0;
  mpz_class P = c->p;
  while (num % P == 0) {
    num /= P;
    ++v;
  }
  while (den % P == 0) {
    den /= P;
    --v;
  }
  mpz_class m = 1;
  for (int i = 0; i < c->K; ++i) m *= P;
  mpz_class nm = ((num % m) + m) % m, dm = ((den % m) + m) % m;
  auto x = PAdicElement::from_int(c, nm.get_si()) / PAdicElement::from_int(c, dm.get_si());
  return v >= 0 ? x * PAdicElement::from_int(c, c->p).pow(v) : x / PAdicElement::from_int(c, c->p).pow(-v);
}

ClassicalSymbol to_padic(const SymbolSpace& S, int64_t k, const QVec& x, const Ctx& c) {
  auto w = make_weight({k}, {0});
  ClassicalSymbol phi = classical_zero(S, w, c);
  size_t K = size_t(k + 1);
  for (size_t g = 0; g < phi.val.size(); ++g)
    for (size_t j = 0; j < K; ++j) phi.val[g].val[j] = padic_from_mpq(c, x[g * K + j]);
  return phi;
}

std::vector<std::vector<PAdicElement>> slope_le_subspace(const QMat& U, int64_t p, Rational h, const Ctx& c) {
  if (c->p != p) throw Error(Err::ContextMismatch, "context prime differs");
  size_t d = U.size();
  if (d == 0) return {};
  // slopes are nonnegative
  if (h.num < 0) return {};
  QVec cp = q_charpoly(U);
  PAdicPolynomial Q;
  for (size_t i = 0; i <= d; ++i) Q.push_back(padic_from_mpq(c, cp[d - i]));
  if (cp[0] != 0 && poly_degree(poly_trim(Q)) != int(d))
    throw Error(Err::PrecisionInsufficient, "characteristic polynomial exceeds the working precision");
  auto [Ple, Pgt] = slope_le_factor(Q, h);
  int m = poly_degree(Ple);
  if (m <= 0) return {};
  // the slope <= h part is the image of Pgt^*(U)
  auto Pstar = poly_reverse(Pgt);
  int r = int(Pstar.size()) - 1;
  std::vector<std::vector<PAdicElement>> Um(d, std::vector<PAdicElement>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) Um[i][j] = padic_from_mpq(c, U[i][j]);
  std::vector<std::vector<PAdicElement>> R(d, std::vector<PAdicElement>(d, PAdicElement::zero(c)));
  for (int i = r; i >= 0; --i) {
    std::vector<std::vector<PAdicElement>> T(d, std::vector<PAdicElement>(d, PAdicElement::zero(c)));
    for (size_t a = 0; a < d; ++a)
      for (size_t t = 0; t < d; ++t) {
        if (R[a][t].is_zero()) continue;
        for (size_t b = 0; b < d; ++b) T[a][b] += R[a][t] * Um[t][b];
      }
    for (size_t a = 0; a < d; ++a) T[a][a] += Pstar[size_t(i)];
    R = T;
  }
  // m independent columns by full pivoting on minimal valuation
  auto W = R;
  std::vector<bool> row_used(d, false), col_used(d, false);
  std::vector<size_t> chosen;
  for (int step = 0; step < m; ++step) {
    int best = std::numeric_limits<int>::max();
    size_t br = d, bc = d;
    for (size_t a = 0; a < d; ++a) {
      if (row_used[a]) continue;
      for (size_t b = 0; b < d; ++b)
        if (!col_used[b] && !W[a][b].is_zero() && W[a][b].valuation() < best) {
          best = W[a][b].valuation();
          br = a;
          bc = b;
        }
    }
    if (br == d) throw Error(Err::PrecisionInsufficient, "slope subspace rank deficient at this precision");
    row_used[br] = col_used[bc] = true;
    chosen.push_back(bc);
    auto inv = W[br][bc].inverse();
    for (size_t b = 0; b < d; ++b) {
      if (b == bc || W[br][b].is_zero()) continue;
      auto f = W[br][b] * inv;
      for (size_t a = 0; a < d; ++a) W[a][b] -= f * W[a][bc];
    }
  }
  std::vector<std::vector<PAdicElement>> out;
  for (size_t b : chosen) {
    std::vector<PAdicElement> col(d);
    for (size_t a = 0; a < d; ++a) col[a] = R[a][b];
    out.push_back(col);
  }
  return out;
}

bool is_small_slope(const NumberFieldData& F, const Weight& w, const EigenData& eig) {
  if (eig.lambda.size() != F.primes.size()) throw Error(Err::InvalidInput, "one eigenvalue per prime above p");
  for (size_t i = 0; i < F.primes.size(); ++i) {
    const auto& l = eig.lambda[i];
    if (l.is_zero()) return false;
    int64_t eL = l.ctx()->e, eP = F.primes[i].e;
    int64_t bound = k0_at(F, w, int(i)) + v_at(F, w, int(i)) + 1;
    // v(l)/eL < bound/eP
    if (!(int64_t(l.valuation()) * eP < bound * eL)) return false;
  }
  return true;
}

bool is_small_slope_q(int64_t k, const PAdicElement& lambda) {
  if (lambda.is_zero()) return false;
  return lambda.valuation() < (k + 1) * lambda.ctx()->e;
}

namespace {

// U restricted to span(B) (B as columns in coordinates); B must be invariant
QMat restrict_to(const QMat& U, const std::vector<QVec>& B) {
  size_t r = B.size(), d = U.size();
  QMat A(d, QVec(r, 0));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < r; ++j) A[i][j] = B[j][i];
  QMat out(r, QVec(r, 0));
  for (size_t j = 0; j < r; ++j) {
    QVec y = q_apply(U, B[j]);
    QVec c = q_solve(A, y);
    if (c.empty()) throw Error(Err::FieldInconsistent, "subspace is not invariant");
    for (size_t i = 0; i < r; ++i) out[i][j] = c[i];
  }
  return out;
}

QVec combine(const std::vector<QVec>& B, const QVec& c) {
  QVec x(B[0].size(), 0);
  for (size_t j = 0; j < B.size(); ++j)
    for (size_t i = 0; i < x.size(); ++i) x[i] += c[j] * B[j][i];
  return x;
}

}  // namespace

EigenSymbolResult eigensymbol(const ClassicalSpace& V, const std::map<int64_t, int64_t>& a_ell, const Ctx& c) {
  const SymbolSpace& S = *V.S;
  int64_t p = S.p;
  size_t d = V.dim();
  QMat stack;
  for (auto [ell, a] : a_ell) {
    if (S.N % ell == 0) throw Error(Err::InvalidInput, "cut by T_ell needs ell prime to the level");
    QMat T = operator_matrix(V, S.hecke_program(ell));
    for (size_t i = 0; i < d; ++i) T[i][i] -= a;
    for (auto& row : T) stack.push_back(row);
  }
  std::vector<QVec> K = stack.empty() ? std::vector<QVec>{} : q_kernel(stack, d);
  if (stack.empty())
    for (size_t i = 0; i < d; ++i) {
      QVec e(d, 0);
      e[i] = 1;
      K.push_back(e);
    }
  if (K.empty()) throw Error(Err::PreconditionFailed, "no symbol with the requested eigenvalues");
  QMat U = operator_matrix(V, S.hecke_program(p));
  QMat I = operator_matrix(V, S.weyl_program());
  EigenSymbolResult R;
  R.kernel_dim = K.size();
  R.hecke_on_kernel = restrict_to(U, K);
  R.up_charpoly = q_charpoly(R.hecke_on_kernel);
  QMat Ik = restrict_to(I, K);
  auto sign_part = [&](int s) {
    QMat A = Ik;
    for (size_t i = 0; i < A.size(); ++i) A[i][i] -= s;
    auto ker = q_kernel(A, K.size());
    std::vector<QVec> out;
    for (auto& v : ker) out.push_back(combine(K, v));
    return out;
  };
  auto plus = sign_part(1), minus = sign_part(-1);
  if (plus.empty() || minus.empty()) throw Error(Err::PreconditionFailed, "eigen kernel lacks a sign component");
  QMat Up = restrict_to(U, plus);
  QVec cp = q_charpoly(Up);
  if (cp.size() != 3) throw Error(Err::PreconditionFailed, "expected a two dimensional p-old sign component");
  R.a_p = -cp[1];
  PAdicPolynomial Q{PAdicElement::from_int(c, 1), padic_from_mpq(c, cp[1]), padic_from_mpq(c, cp[0])};
  auto slopes = newton_polygon(Q);
  // roots of det(1 - UX) are inverse eigenvalues; keep the root of least slope
  Rational h0 = make_rational(-slopes.back().slope.num, slopes.back().slope.den);
  if (slopes.back().multiplicity != 1) throw Error(Err::PreconditionFailed, "roots of equal slope cannot be separated");
  auto [Ple, Pgt] = slope_le_factor(Q, h0);
  (void)Pgt;
  if (poly_degree(Ple) != 1) throw Error(Err::PreconditionFailed, "slope factor is not linear");
  R.lambda = -(Ple[1] / Ple[0]);
  R.lambda_bar = padic_from_mpq(c, cp[0]) / R.lambda;
  auto stabilise = [&](const std::vector<QVec>& part) {
    for (auto& cv : part) {
      QVec x = from_coordinates(V, cv);
      QVec ux = from_coordinates(V, q_apply(U, cv));
      auto phi = to_padic(S, V.k, ux, c) - scale(to_padic(S, V.k, x, c), R.lambda_bar);
      bool nz = false;
      for (auto& v : phi.val)
        for (auto& e : v.val)
          if (!e.is_zero()) nz = true;
      if (nz) return phi;
    }
    throw Error(Err::PreconditionFailed, "p-stabilisation vanished");
  };
  R.plus = stabilise(plus);
  R.minus = stabilise(minus);
  R.theta = R.plus + R.minus;
  return R;
}

}  // namespace padicl
