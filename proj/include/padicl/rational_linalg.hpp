#pragma once

#include <gmpxx.h>
#include <vector>

namespace padicl {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

QMat q_identity(size_t n);
QMat q_mul(const QMat& a, const QMat& b);
QVec q_apply(const QMat& a, const QVec& x);
/// Row-reduced echelon form in place; returns pivot columns.
std::vector<size_t> q_rref(QMat& a);
size_t q_rank(QMat a);
/// Basis of {x : a x = 0}.
std::vector<QVec> q_kernel(QMat a, size_t cols);
/// One solution of a x = b, or empty if inconsistent.
QVec q_solve(QMat a, const QVec& b);
/// Characteristic polynomial det(X - a), low to high.
QVec q_charpoly(const QMat& a);
mpq_class q_det(QMat a);

/// B_0..B_n with B_1 = +1/2.
std::vector<mpq_class> bernoulli_plus(int n);
mpz_class q_binom(int n, int k);

}  // namespace padicl
