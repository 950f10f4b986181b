#pragma once

#include <map>
#include <vector>

#include "padicl/coefficient_modules.hpp"
#include "padicl/rational_linalg.hpp"

namespace padicl {

struct IntMat {
  int64_t a = 1, b = 0, c = 0, d = 1;
  int64_t det() const;
  bool operator==(const IntMat& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  bool operator<(const IntMat& o) const;
};
IntMat operator*(const IntMat& x, const IntMat& y);
/// Inverse of a determinant one matrix.
IntMat inv_sl2(const IntMat& g);

/// coeff * value(gen) | m
struct SymbolTerm {
  int gen;
  int64_t coeff;
  IntMat m;
};
using Program = std::vector<SymbolTerm>;

/// A cusp num/den with den >= 0; infinity is 1/0.
struct Cusp {
  int64_t num, den;
};

/// Gamma_0(N) symbols in the divisor model: values on the free side pairings of a Farey
/// domain plus w = phi({inf} - {0}), subject to w|(T^{-1} - 1) = sum_i v_i|(1 - delta_i).
struct SymbolSpace {
  int64_t N = 1;
  int64_t p = 0;
  std::vector<Cusp> cusps;          // x_0 = 0, ..., x_n = 1
  std::vector<IntMat> arcs;         // g_i with g_i 0 = x_i, g_i inf = x_{i+1}
  std::vector<int> partner;         // arc pairing
  std::vector<int> free_arcs;       // one arc of each pair
  std::vector<IntMat> delta;        // per free generator, v_partner = -v_i | delta_i
  // P^1(Z/N)
  std::vector<std::pair<int64_t, int64_t>> p1;
  std::vector<int> p1_table;
  std::vector<IntMat> rep;          // per class
  std::vector<Program> expr;        // phi(rep D0)

  int num_free() const { return int(free_arcs.size()); }
  int w_gen() const { return num_free(); }
  int num_gens() const { return num_free() + 1; }
  int index() const { return int(p1.size()); }
  int class_of(int64_t c, int64_t d) const;
  bool in_gamma0(const IntMat& g) const;
  /// phi(g D0) for g in SL2(Z).
  Program manin(const IntMat& g) const;
  /// phi({r} - {inf}).
  Program cusp_to_inf(const Cusp& r) const;
  Program divisor(const Cusp& r, const Cusp& s) const;
  /// The divisor carried by a generator.
  std::pair<Cusp, Cusp> gen_divisor(int gen) const;
  /// Program of the operator on each output generator: T_ell (ell not dividing N) or U_ell.
  std::vector<Program> hecke_program(int64_t ell) const;
  std::vector<Program> weyl_program() const;
};

/// Farey domain for Gamma_0(N); rejects levels with elliptic points.
SymbolSpace build_symbol_space(int64_t N, int64_t p);
Program simplify(Program P);

/// Symbol with V_k^* coefficients (over L).
struct ClassicalSymbol {
  const SymbolSpace* S = nullptr;
  Weight w;
  std::vector<DualPolySymbol> val;
};
ClassicalSymbol classical_zero(const SymbolSpace& S, const Weight& w, const Ctx& c);
DualPolySymbol evaluate(const ClassicalSymbol& phi, const Program& P);
ClassicalSymbol apply_program(const ClassicalSymbol& phi, const std::vector<Program>& prog);
ClassicalSymbol act_hecke(const ClassicalSymbol& phi, int64_t ell);
ClassicalSymbol act_weyl(const ClassicalSymbol& phi);
ClassicalSymbol operator+(const ClassicalSymbol& a, const ClassicalSymbol& b);
ClassicalSymbol operator-(const ClassicalSymbol& a, const ClassicalSymbol& b);
ClassicalSymbol scale(const ClassicalSymbol& a, const PAdicElement& s);
bool equals(const ClassicalSymbol& a, const ClassicalSymbol& b);
/// Residual of the boundary relation; zero for a genuine symbol.
DualPolySymbol relation_residual(const ClassicalSymbol& phi);

/// Symbol with distribution coefficients.
struct DistSymbol {
  const SymbolSpace* S = nullptr;
  std::vector<MomentDistribution> val;
};
/// Per output generator, per input generator: summed action matrix.
struct DistProgram {
  int M = 0;
  std::vector<std::vector<DistActionMatrix>> B;
  std::vector<std::vector<bool>> used;
};
DistProgram compile(const std::vector<Program>& prog, const SymbolSpace& S, const Weight& w, const Ctx& c, int M);
DistSymbol apply(const DistProgram& P, const DistSymbol& psi);
MomentDistribution evaluate(const DistSymbol& psi, const Program& P);
DistSymbol operator-(const DistSymbol& a, const DistSymbol& b);
DistSymbol scale(const DistSymbol& a, const PAdicElement& s);
bool equals(const DistSymbol& a, const DistSymbol& b);
MomentDistribution relation_residual(const DistSymbol& psi);
ClassicalSymbol specialise(const DistSymbol& psi);

/// The classical space over Q.
struct ClassicalSpace {
  const SymbolSpace* S = nullptr;
  int64_t k = 0;
  std::vector<QVec> basis;     // each of length num_gens * (k+1)
  std::vector<size_t> coords;  // non-pivot columns: coordinates of a kernel vector
  size_t dim() const { return basis.size(); }
};
ClassicalSpace classical_space(const SymbolSpace& S, int64_t k);
/// Independent count: (k+1) mu/6 for k > 0, mu/6 + 1 for k = 0 (torsion-free Gamma_0(N)).
int64_t expected_dimension(const SymbolSpace& S, int64_t k);
QVec apply_program_q(const SymbolSpace& S, int64_t k, const std::vector<Program>& prog, const QVec& x);
/// Matrix (columns = images of basis vectors, in basis coordinates).
QMat operator_matrix(const ClassicalSpace& V, const std::vector<Program>& prog);
QVec coordinates(const ClassicalSpace& V, const QVec& x);
QVec from_coordinates(const ClassicalSpace& V, const QVec& c);
ClassicalSymbol to_padic(const SymbolSpace& S, int64_t k, const QVec& x, const Ctx& c);
PAdicElement padic_from_mpq(const Ctx& c, const mpq_class& q);

struct EigenData {
  std::vector<PAdicElement> lambda;  // per prime above p
  std::map<int64_t, PAdicElement> a_ell;
};

/// Sub-basis (as coordinate vectors) with U-slopes <= h: kernel of P_le^*(U).
std::vector<std::vector<PAdicElement>> slope_le_subspace(const QMat& U, int64_t p, Rational h, const Ctx& c);
bool is_small_slope(const NumberFieldData& F, const Weight& w, const EigenData& eig);
/// F = Q form: v_p(lambda) < k + 1.
bool is_small_slope_q(int64_t k, const PAdicElement& lambda);

struct EigenSymbolResult {
  QMat hecke_on_kernel;          // U_p on the eigen kernel
  QVec up_charpoly;              // on the kernel
  mpq_class a_p;                 // from the charpoly of one sign component
  PAdicElement lambda, lambda_bar;
  ClassicalSymbol plus, minus, theta;
  size_t kernel_dim = 0;
};
/// Cut the classical space by T_ell eigenvalues, split by sign, and p-stabilise to the slope < k+1 root.
EigenSymbolResult eigensymbol(const ClassicalSpace& V, const std::map<int64_t, int64_t>& a_ell, const Ctx& c);

}  // namespace padicl
