#pragma once

#include <string>
#include <vector>

#include "padicl/ray_class.hpp"

namespace padicl {

using InfinityType = std::vector<int64_t>;

bool is_admissible_infinity_type(const NumberFieldData& F, const InfinityType& r);
/// [r] with r + cr = 2[r] t.
Rational bracket(const NumberFieldData& F, const InfinityType& r);

/// Canonical primitive m-th root of unity in L: teichmuller(g)^{(p-1)/m'} * zeta_{p^a}, m = m' p^a.
PAdicElement root_of_unity(const Ctx& L, int64_t m);
/// Smallest generator of (Z/p^n)^x (p odd).
int64_t primitive_root_mod(int64_t p, int n);

struct CharValueSpec {
  int64_t order = 1;
  int64_t exponent = 0;
};

/// Hecke character of conductor dividing p^infinity. Finite part chi_f on (O_F/f)^x is given by the
/// value of a fixed generator at each prime above p; phi_infty(x) = eps(sgn x) x^r.
struct HeckeCharacter {
  std::string id;
  const NumberFieldData* F = nullptr;
  std::vector<int> cond;
  InfinityType r;
  std::vector<int> eps;  // eps_phi(-1 at the real place sigma), one entry per real embedding
  Ctx L;
  std::vector<int64_t> mods;
  std::vector<int64_t> gen;
  std::vector<CharValueSpec> spec;
  std::vector<PAdicElement> gen_value;
  std::vector<std::vector<int64_t>> dlog;  // per prime: residue -> exponent (or -1)

  /// chi_f on a residue tuple mod f.
  PAdicElement chi(const Residue& b) const;
  /// chi_f(x) for a global x coprime to f.
  PAdicElement chi_global(const FieldElt& x) const;
  /// eps_phi on the sign vector of x at the real places.
  int eps_of(const FieldElt& x) const;
  /// x^r through inc_p.
  PAdicElement power_r(const FieldElt& x) const;
  PAdicElement power_r_local(const OFpElement& x) const;
  /// phi((alpha)) for alpha coprime to f.
  PAdicElement ideal_value(const FieldElt& alpha) const;
  /// eps_phi phi_f(a_y) for the representative idele a_y = alpha away from p.
  PAdicElement eps_phi_f(const FieldElt& alpha) const;
  bool is_trivial_finite() const;
  bool is_primitive() const;
  int max_cond() const;
};

HeckeCharacter make_character(const NumberFieldData& F, const std::vector<int>& cond, const InfinityType& r,
                              const std::vector<CharValueSpec>& values, const std::vector<int>& eps, int digits,
                              const std::string& id = "");
/// Character data from a JSON object (conductor, infinity_type, values, eps).
HeckeCharacter character_from_json(const NumberFieldData& F, const std::string& json_text, int digits);

/// phi_{p-fin} on the class of the idele (alpha away from p, u at p).
PAdicElement p_adic_avatar(const HeckeCharacter& phi, const FieldElt& alpha, const OFpElement& u);
/// phi_{p-fin}(pi_P) at a prime not dividing the conductor.
PAdicElement avatar_at_uniformizer(const HeckeCharacter& phi, int prime_index);
/// phi(P) at a prime not dividing the conductor (requires a declared generator of P).
PAdicElement phi_of_prime(const HeckeCharacter& phi, int prime_index);

/// A finite idele generating the different: delta at every finite place, or only at places above ell.
struct DifferentIdele {
  FieldElt delta;
  int64_t ell = 0;  // 0: all finite places
};
DifferentIdele default_different(const NumberFieldData& F);

PAdicElement gauss_sum(const HeckeCharacter& phi, const DifferentIdele& d);
PAdicElement gauss_sum(const HeckeCharacter& phi);
/// The twisted sum with zeta inserted into e_F.
PAdicElement twisted_gauss_sum(const HeckeCharacter& phi, const FieldElt& zeta, const DifferentIdele& d);
PAdicElement twisted_gauss_sum(const HeckeCharacter& phi, const FieldElt& zeta);

}  // namespace padicl
