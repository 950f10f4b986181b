#pragma once

#include <complex>
#include <gmpxx.h>
#include <map>
#include <string>
#include <vector>

#include "padicl/padic_core.hpp"

namespace padicl {

/// Element of F in the power basis 1, theta, ..., theta^{d-1}, divided by den.
struct FieldElt {
  std::vector<int64_t> c;
  int64_t den = 1;
};

enum class EmbKind { Real, Complex, Conj };

struct Embedding {
  std::string label;
  EmbKind kind = EmbKind::Real;
  std::complex<long double> value;  // theta under this embedding
  mpq_class lo, hi;                 // isolating interval (real embeddings only)
};

struct LocalPrime {
  std::string label;
  int e = 1;
  int f = 1;
  std::vector<int64_t> unram, eis;
  Digits theta_approx;
  FieldElt uniformizer;
  std::vector<int> sigmas;  // embeddings with sigma ~ this prime
  Ctx ctx;
  PAdicElement theta;
  PAdicElement pi;  // local image of the uniformizer
};

/// Declarative number-field backend. Data comes from a field file and is validated on load.
struct NumberFieldData {
  std::string id;
  std::string name;
  int d = 1;
  int r1 = 1, r2 = 0;
  std::vector<int64_t> poly;  // monic, low to high
  std::vector<Embedding> emb;
  std::vector<int> conj;
  std::vector<std::vector<std::vector<int64_t>>> mult;  // theta^i theta^j = sum_k mult[i][j][k] theta^k
  int64_t disc = 1;
  FieldElt different;
  int torsion_order = 2;
  FieldElt torsion_gen;
  std::vector<FieldElt> fundamental_units;
  std::vector<FieldElt> pos_units;  // generators of the totally positive units
  int narrow_h = 1;
  std::vector<FieldElt> ideal_reps;
  std::map<std::string, std::vector<LocalPrime>> prime_spec;  // by p, or "*" for any p

  // local data for the active p
  int64_t p = 0;
  int N = 0;
  std::vector<LocalPrime> primes;

  int q() const { return r1 + r2; }
  FieldElt one() const;
  FieldElt from_int(int64_t n) const;
  FieldElt mul(const FieldElt& a, const FieldElt& b) const;
  FieldElt add(const FieldElt& a, const FieldElt& b) const;
  FieldElt neg(const FieldElt& a) const;
  FieldElt pow(const FieldElt& a, int n) const;
  bool is_zero(const FieldElt& a) const;
  bool equal(const FieldElt& a, const FieldElt& b) const;
  mpq_class norm(const FieldElt& a) const;
  mpq_class trace(const FieldElt& a) const;
  std::complex<long double> embed_complex(const FieldElt& a, int sigma) const;
};

using OFpElement = std::vector<PAdicElement>;

/// Parse and validate a field description; throws Err::FieldInconsistent on bad data.
NumberFieldData load_field(const std::string& path);
NumberFieldData parse_field(const std::string& text);
/// Attach the local data for p at precision N.
void set_prime(NumberFieldData& F, int64_t p, int N);

OFpElement embed_global(const NumberFieldData& F, const FieldElt& x);
OFpElement ofp_mul(const OFpElement& a, const OFpElement& b);
OFpElement ofp_add(const OFpElement& a, const OFpElement& b);
OFpElement ofp_one(const NumberFieldData& F);

bool is_totally_positive(const NumberFieldData& F, const FieldElt& x);
/// Sign of x at a real embedding, certified by interval refinement.
int real_sign(const NumberFieldData& F, const FieldElt& x, int sigma);

/// Componentwise pi_P^{n_P}.
OFpElement uniformizer_power(const NumberFieldData& F, const std::vector<int>& n);
/// prod_sigma (sigma-component of x)^{m_sigma} as an element of L.
PAdicElement scalar_image(const NumberFieldData& F, const OFpElement& x, const std::vector<int64_t>& m,
                          const Ctx& L);
/// N_{F_P/Q_p} of a local element, as an element of Q_p.
PAdicElement local_norm(const PAdicElement& a);
/// An element of Q_p (or any context) viewed in another context of the same p.
PAdicElement lift_rational_part(const PAdicElement& a, const Ctx& L);

std::vector<std::string> validate_field(const NumberFieldData& F);

}  // namespace padicl
