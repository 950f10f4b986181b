#include "padicl/rational_linalg.hpp"

#include "padicl/errors.hpp"

namespace padicl {

QMat q_identity(size_t n) {
  QMat a(n, QVec(n, 0));
  for (size_t i = 0; i < n; ++i) a[i][i] = 1;
  return a;
}

QMat q_mul(const QMat& a, const QMat& b) {
  if (a.empty()) return {};
  size_t n = a.size(), m = b.size(), l = b.empty() ? 0 : b[0].size();
  QMat c(n, QVec(l, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < m; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < l; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

QVec q_apply(const QMat& a, const QVec& x) {
  QVec y(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      if (a[i][j] != 0) y[i] += a[i][j] * x[j];
  return y;
}

std::vector<size_t> q_rref(QMat& a) {
  std::vector<size_t> piv;
  if (a.empty()) return piv;
  size_t rows = a.size(), cols = a[0].size(), r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t s = r;
    while (s < rows && a[s][c] == 0) ++s;
    if (s == rows) continue;
    std::swap(a[r], a[s]);
    mpq_class inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (size_t j = c; j < cols; ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

size_t q_rank(QMat a) { return q_rref(a).size(); }

std::vector<QVec> q_kernel(QMat a, size_t cols) {
  for (auto& row : a)
    if (row.size() != cols) throw Error(Err::InvalidInput, "ragged matrix");
  auto piv = q_rref(a);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<QVec> out;
  for (size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    QVec x(cols, 0);
    x[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -a[r][f];
    out.push_back(x);
  }
  return out;
}

QVec q_solve(QMat a, const QVec& b) {
  size_t cols = a.empty() ? 0 : a[0].size();
  for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  auto piv = q_rref(a);
  if (!piv.empty() && piv.back() == cols) return {};
  QVec x(cols, 0);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = a[r][cols];
  return x;
}

mpq_class q_det(QMat a) {
  size_t n = a.size();
  mpq_class det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t s = c;
    while (s < n && a[s][c] == 0) ++s;
    if (s == n) return 0;
    if (s != c) {
      std::swap(a[s], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

QVec q_charpoly(const QMat& a) {
  // Faddeev-LeVerrier
  size_t n = a.size();
  QVec c(n + 1, 0);
  c[n] = 1;
  QMat Mk(n, QVec(n, 0));
  for (size_t k = 1; k <= n; ++k) {
    QMat AM = q_mul(a, Mk);
    for (size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
    Mk = AM;
    QMat AMk = q_mul(a, Mk);
    mpq_class tr = 0;
    for (size_t i = 0; i < n; ++i) tr += AMk[i][i];
    c[n - k] = -tr / mpq_class(int(k));
  }
  return c;
}

mpz_class q_binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

std::vector<mpq_class> bernoulli_plus(int n) {
  // sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1 gives B^-; flip B_1
  std::vector<mpq_class> B(size_t(n + 1), 0);
  B[0] = 1;
  for (int m = 1; m <= n; ++m) {
    mpq_class s = 0;
    for (int k = 0; k < m; ++k) s += mpq_class(q_binom(m + 1, k)) * B[size_t(k)];
    B[size_t(m)] = -s / (m + 1);
  }
  if (n >= 1) B[1] = mpq_class(1, 2);
  return B;
}

}  // namespace padicl
