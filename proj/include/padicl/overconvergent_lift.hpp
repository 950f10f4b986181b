#pragma once

#include <cstdint>
#include <vector>

#include "padicl/modular_symbols.hpp"

namespace padicl {

struct LiftReport {
  int iterations = 0;
  int filtration_depth = 0;
  bool converged = false;
  // valuations of residuals; PAdicElement::kInf when zero at the working profile
  int specialisation_residual = PAdicElement::kInf;
  std::vector<int> eigen_residual;  // per prime above p
  int relation_residual = PAdicElement::kInf;
};

/// Working precision for the naive lift at output precision N with M moments.
int lift_working_precision(int64_t p, int M, int N);

/// Preimage under specialisation: classical moments on the free generators, higher
/// moments zero (or uniform random when seed != 0), boundary generator solved from
/// the relation. Result has M moments and profile N.
DistSymbol naive_lift(const ClassicalSymbol& phi, int M, int N, uint64_t seed = 0);

/// Moments of w solving w|(T^{-1} - 1) = s, via B^+ Bernoulli numbers; needs s(1) = 0.
std::vector<PAdicElement> solve_boundary(const std::vector<PAdicElement>& s, int count);

/// Minimal valuation over the difference (mod profile); kInf when zero.
int residual_valuation(const DistSymbol& a, const DistSymbol& b);
int residual_valuation(const ClassicalSymbol& a, const ClassicalSymbol& b);

/// Iterate Psi <- lambda^{-1} Psi | U_p until the profile stabilises.
/// Throws NonConvergence when the budget (default M + N) is exhausted.
std::pair<DistSymbol, LiftReport> iterate_control(const DistSymbol& psi0, const ClassicalSymbol& phi,
                                                  const EigenData& eig, int budget = -1);

}  // namespace padicl
