#pragma once

#include "orthoset/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace testing {

using orthoset::Complex;
using orthoset::ComplexMatrix;
using orthoset::Index;
using orthoset::RealMatrix;
using orthoset::RealVector;

inline RealMatrix gaussian(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealMatrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < c; ++k) m(i, k) = g(rng);
  return m;
}

inline ComplexMatrix gaussian_complex(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < c; ++k) m(i, k) = Complex(g(rng), g(rng));
  return m;
}

/// Reference singular values from Eigen's two-sided Jacobi SVD.
template <typename M>
RealVector reference_singular_values(const M& m) {
  return Eigen::JacobiSVD<typename M::PlainObject>(m).singularValues();
}

/// tr(A^T B) by explicit double loop.
inline double trace_inner(const RealMatrix& a, const RealMatrix& b) {
  double s = 0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(i, k);
  return s;
}

inline std::vector<double> sorted_copy(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// Smallest max-abs distance between `a` and some signed permutation of `b`.
inline double signed_perm_distance(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::size_t> idx(b.size());
  std::iota(idx.begin(), idx.end(), 0);
  double best = INFINITY;
  do {
    for (double s : {1.0, -1.0}) {
      double worst = 0;
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - s * b[idx[i]]));
      best = std::min(best, worst);
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

}  // namespace testing
