#pragma once

#include "unispace/multilinear.hpp"

#include <vector>

namespace unispace {

// Fraction-free (Bareiss) elimination over the integers after clearing row denominators.
int exact_rank(const Matrix<Rational>& m);

std::vector<double> singular_values(const Matrix<double>& m);

struct NumericRank {
  int rank = 0;
  double sigma_max = 0.0;
  double sigma_min_retained = 0.0;  // smallest singular value counted in the rank
  double sigma_next = 0.0;          // largest singular value below the threshold
  double condition = 0.0;           // sigma_max / sigma_min_retained
};

NumericRank numeric_rank(const Matrix<double>& m, double rel_threshold = 1e-8);

}  // namespace unispace
