#include "unispace/linalg.hpp"

#include <Eigen/SVD>

namespace unispace {

int exact_rank(const Matrix<Rational>& m) {
  const int R = m.rows, C = m.cols;
  if (R == 0 || C == 0) return 0;
  std::vector<Integer> a(static_cast<size_t>(R) * C);
  for (int r = 0; r < R; ++r) {
    Integer l = 1;
    for (int c = 0; c < C; ++c) {
      const Rational& q = m(r, c);
      if (sgn(q) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    }
    for (int c = 0; c < C; ++c) {
      const Rational& q = m(r, c);
      a[static_cast<size_t>(r) * C + c] = q.get_num() * (l / q.get_den());
    }
  }
  auto at = [&](int r, int c) -> Integer& { return a[static_cast<size_t>(r) * C + c]; };

  Integer prev = 1;
  int rank = 0;
  for (int c = 0; c < C && rank < R; ++c) {
    int piv = -1;
    for (int r = rank; r < R; ++r)
      if (sgn(at(r, c)) != 0) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < C; ++j) std::swap(at(piv, j), at(rank, j));
    const Integer p = at(rank, c);
    for (int r = rank + 1; r < R; ++r) {
      const Integer f = at(r, c);
      for (int j = c + 1; j < C; ++j) {
        Integer v = p * at(r, j) - f * at(rank, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        at(r, j) = std::move(v);
      }
      at(r, c) = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

std::vector<double> singular_values(const Matrix<double>& m) {
  if (m.rows == 0 || m.cols == 0) return {};
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) e(r, c) = m(r, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

NumericRank numeric_rank(const Matrix<double>& m, double rel_threshold) {
  NumericRank out;
  auto s = singular_values(m);
  if (s.empty() || s[0] == 0.0) return out;
  out.sigma_max = s[0];
  const double thr = rel_threshold * s[0];
  for (double v : s) {
    if (v > thr) {
      ++out.rank;
      out.sigma_min_retained = v;
    } else if (out.sigma_next == 0.0) {
      out.sigma_next = v;
    }
  }
  out.condition = out.sigma_max / out.sigma_min_retained;
  return out;
}

}  // namespace unispace
