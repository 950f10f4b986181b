#pragma once

#include <map>
#include <vector>

#include "padicl/field_data.hpp"

namespace padicl {

using Residue = std::vector<int64_t>;  // one residue mod p^{n_P} per prime above p

/// Narrow ray class group Cl_F^+(f) for f | p^infinity, with h^+ = 1 and e = f = 1 at every P | p.
/// A class y is a coset of the image of O_{F,+}^x in (O_F/f)^x; its representative idele a_y is
/// a totally positive alpha_y coprime to p placed away from p, so y is the class of alpha_y^{-1} mod f.
struct RayClassGroup {
  const NumberFieldData* F = nullptr;
  std::vector<int> exps;
  std::vector<int64_t> mods;
  std::vector<Residue> units_mod;          // all of (O_F/f)^x
  std::vector<Residue> unit_image;         // image of O_{F,+}^x
  std::vector<std::vector<int>> classes;   // indices into units_mod
  std::vector<int> class_index;            // units_mod index -> class
  std::vector<FieldElt> reps;              // alpha_y
  std::vector<Residue> rep_residue;        // alpha_y^{-1} mod f

  int order() const { return int(classes.size()); }
  int index_of(const Residue& r) const;
  int class_of_residue(const Residue& r) const;
  /// Class of the idele (alpha away from p, u at p): residue alpha^{-1} u.
  int class_of_idele(const FieldElt& alpha, const Residue& u) const;
  std::vector<int64_t> invariant_factors() const;
  Residue mul(const Residue& a, const Residue& b) const;
  Residue inv(const Residue& a) const;
  Residue reduce(const Residue& r) const;
};

Residue residue_of(const NumberFieldData& F, const FieldElt& x, const std::vector<int64_t>& mods);

RayClassGroup build_ray_class_group(const NumberFieldData& F, const std::vector<int>& exps);
/// The same group with every representative shifted by shift * p^{max n} (same classes, new alpha_y).
RayClassGroup alternate_table(const RayClassGroup& G, int64_t shift);
/// u_r with {a_y u_r} a full duplicate-free representative set for Cl^+(f P).
std::vector<Residue> compatible_representatives(const RayClassGroup& Gf, int prime_index);
/// Image of a class of a finer group under the projection.
int project_class(const RayClassGroup& fine, int y, const RayClassGroup& coarse);

/// a'_y = a_y gamma u r for two representatives of one class.
struct RepFactorization {
  FieldElt gamma_num, gamma_den;  // gamma = alpha' / alpha
  OFpElement u;                   // alpha / alpha' at the primes above p
  bool r_totally_positive = false;
};
RepFactorization factor_representatives(const RayClassGroup& G, const FieldElt& alpha, const FieldElt& alpha2);

}  // namespace padicl
