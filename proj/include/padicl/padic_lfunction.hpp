#pragma once

#include <set>
#include <vector>

#include "padicl/hecke_characters.hpp"
#include "padicl/overconvergent_lift.hpp"

namespace padicl {

/// Positive generator of f = p^n for F = Q.
int64_t modulus_generator(const RayClassGroup& G);
/// b = a^{-1} mod f0, shifted by b_lift * f0.
int64_t inverse_rep(int64_t a, int64_t f0, int64_t b_lift = 0);

/// Psi({b/f0} - {inf}) | (1, b; 0, f0): the coset distribution on b + f0 Z_p.
MomentDistribution coset_distribution(const DistSymbol& psi, int64_t f0, int64_t b);
/// Ev^a_{f,dagger}(Psi) = Psi({b/f0} - {inf}) | (ab, 1; a f0, 0).
MomentDistribution ev_overconvergent(const DistSymbol& psi, int64_t f0, int64_t a, int64_t b_lift = 0);
/// The same evaluation on a classical symbol at X^{k-j} Y^j.
PAdicElement ev_classical_2(const ClassicalSymbol& phi, int64_t f0, int j, int64_t a, int64_t b_lift = 0);
/// Local-system-one normalization, matrix (ab/f0, 1; a, 0); Ev_2 = f0^j Ev_1.
PAdicElement ev_classical_1(const ClassicalSymbol& phi, int64_t f0, int j, int64_t a, int64_t b_lift = 0);
/// sum_y eps phi_f(a_y) Ev^{a_y}_{f,j,norm}(phi) over the classes of G.
PAdicElement ev_phi(const ClassicalSymbol& phisym, const HeckeCharacter& phi, const RayClassGroup& G, int normalization,
                    int64_t b_lift = 0);

struct UnramifiedIdentity {
  PAdicElement lhs, rhs;
};
/// For phi unramified at p: the sum over Cl(p) against (phi(p) lambda - 1) times the sum over Cl(1).
UnramifiedIdentity unramified_extension_identity(const ClassicalSymbol& phisym, const HeckeCharacter& phi,
                                                 const EigenData& eig, const RayClassGroup& G1,
                                                 const RayClassGroup& Gp);

struct RayClassDistribution {
  DistSymbol psi;
  int64_t f0 = 1;
  int n = 0;
  std::vector<int64_t> a;                 // a_y
  std::vector<int64_t> b;                 // a_y^{-1} mod f0
  std::vector<MomentDistribution> ev;     // Ev^{a_y}_{f,dagger}
  std::vector<MomentDistribution> coset;  // on b_y + f0 Z_p
  PAdicElement lambda_f, lambda_f_inv;
  Weight w;
};
RayClassDistribution build_mu(const DistSymbol& psi, const EigenData& eig, const RayClassGroup& G, int64_t b_lift = 0);
/// lambda_f^{-1} sum_y eps phi_f(a_y) Ev^{a_y}(z^{k+v-r}).
PAdicElement evaluate_mu(const RayClassDistribution& mu, const HeckeCharacter& phi);
/// lambda_f^{-1} times the integral of x^m over b + f0 Z_p.
PAdicElement mu_coset_monomial(const RayClassDistribution& mu, int64_t b, int m);

/// prod over B of phi_{p-fin}(pi_P)(1 - lambda_P^{-1} phi(P)^{-1}).
PAdicElement interpolation_multiplier(const HeckeCharacter& phi, const EigenData& eig, const std::set<int>& B);
/// (-1)^{R(j,k)} with R = sum over complex places of k_v plus sum over real places of k_v + j_v.
int interpolation_sign(const NumberFieldData& F, const Weight& w, const std::vector<int64_t>& j);

}  // namespace padicl
