#pragma once

// Small dense real/complex kernels shared by every other module: the
// Hilbert-Schmidt inner product, a one-sided Jacobi SVD, a sorted symmetric
// eigensolver, the tolerance policy and the order-3 canonical matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace orthoset {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealMatrix = Mat<double>;
using ComplexMatrix = Mat<Complex>;
using RealVector = Vec<double>;
using ComplexVector = Vec<Complex>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Residual bounds used across the library.
///
/// `eps_orth` bounds orthogonality/unitarity residuals, `eps_feas` bounds
/// residuals of feasibility systems and `eps_match` bounds entrywise matching
/// against reference matrices. They must satisfy
/// 0 < eps_orth <= eps_feas <= eps_match.
struct Tolerance {
  double eps_orth = 1e-10;
  double eps_feas = 1e-8;
  double eps_match = 1e-6;

  bool valid() const {
    return eps_orth > 0 && eps_orth <= eps_feas && eps_feas <= eps_match;
  }
  const Tolerance& validated() const {
    if (!valid())
      throw std::invalid_argument(
          "tolerance must satisfy 0 < eps_orth <= eps_feas <= eps_match");
    return *this;
  }
};

/// tr(A^dagger B), or tr(A^T B) for real matrices.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar hs_inner(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
  static_assert(std::is_same_v<typename DerivedA::Scalar, typename DerivedB::Scalar>,
                "hs_inner: operands must share a scalar field");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  // Entrywise conj(a_ij) * b_ij; Eigen's cwiseProduct on conjugate() keeps
  // this an expression.
  return a.conjugate().cwiseProduct(b).sum();
}

/// Squared Frobenius norm by explicit entrywise summation.
template <typename Derived>
double frobenius_sq(const Eigen::MatrixBase<Derived>& a) {
  double acc = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) acc += std::norm(a(i, j));
  return acc;
}

/// ||X^dagger X - I||_F for a square X.
template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() != x.cols()) throw std::invalid_argument("unitarity_residual: non-square");
  return (x.adjoint() * x - Mat<Scalar>::Identity(x.rows(), x.cols())).norm();
}

namespace detail {

// Indices 0..n-1 ordered by descending value, ties by ascending index.
inline std::vector<Index> descending_order(const RealVector& values) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  return idx;
}

// Replaces the listed columns of q with an orthonormal completion of the
// remaining columns, drawing candidates from the standard basis.
template <typename Scalar>
void complete_orthonormal(Mat<Scalar>& q, const std::vector<Index>& missing) {
  const Index n = q.rows();
  std::vector<bool> filled(static_cast<std::size_t>(q.cols()), true);
  for (Index j : missing) filled[static_cast<std::size_t>(j)] = false;

  auto orthogonalize = [&](Vec<Scalar>& v) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index c = 0; c < q.cols(); ++c)
        if (filled[static_cast<std::size_t>(c)]) v -= q.col(c).dot(v) * q.col(c);
  };

  for (Index j : missing) {
    Vec<Scalar> best;
    double best_norm = -1;
    for (Index k = 0; k < n; ++k) {
      Vec<Scalar> v = Vec<Scalar>::Unit(n, k);
      orthogonalize(v);
      const double nv = v.norm();
      if (nv > best_norm + 1e-12) {
        best_norm = nv;
        best = v;
      }
    }
    q.col(j) = best / best_norm;
    filled[static_cast<std::size_t>(j)] = true;
  }
}

}  // namespace detail

/// Full singular value decomposition M = U * diag(sigma) * V^dagger.
///
/// U is rows x rows, V is cols x cols and sigma holds min(rows, cols)
/// nonnegative values in nonincreasing order. For real input both factors
/// are real orthogonal.
template <typename Scalar>
struct Svd {
  Mat<Scalar> U;
  RealVector sigma;
  Mat<Scalar> V;

  Mat<Scalar> reconstruct() const {
    Mat<Scalar> s = Mat<Scalar>::Zero(U.cols(), V.cols());
    for (Index i = 0; i < sigma.size(); ++i) s(i, i) = sigma(i);
    return U * s * V.adjoint();
  }
};

/// Off-diagonal threshold at which the Jacobi sweeps stop.
inline constexpr double kJacobiTolerance = 1e-13;

/// One-sided (Hestenes) Jacobi SVD.
template <typename Derived>
Svd<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() < input.cols()) {
    Svd<Scalar> t = svd(input.adjoint().eval());
    return {std::move(t.V), std::move(t.sigma), std::move(t.U)};
  }

  const Index m = input.rows();
  const Index n = input.cols();
  Mat<Scalar> w = input;
  Mat<Scalar> v = Mat<Scalar>::Identity(n, n);

  for (int sweep = 0; sweep < 80; ++sweep) {
    double off = 0;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const Scalar gamma = w.col(p).dot(w.col(q));
        const double g = std::abs(gamma);
        if (g == 0 || alpha == 0 || beta == 0) continue;
        const double rel = g / std::sqrt(alpha * beta);
        off = std::max(off, rel);
        if (rel < 1e-16) continue;

        const Scalar phase = gamma / g;
        const double zeta = (beta - alpha) / (2 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = c * t;

        auto rotate = [&](Mat<Scalar>& x) {
          Vec<Scalar> xp = x.col(p);
          Vec<Scalar> xq = x.col(q) * Eigen::numext::conj(phase);
          x.col(p) = c * xp - s * xq;
          x.col(q) = s * xp + c * xq;
        };
        rotate(w);
        rotate(v);
      }
    }
    if (off < kJacobiTolerance) break;
  }

  RealVector norms(n);
  for (Index j = 0; j < n; ++j) norms(j) = w.col(j).norm();
  const auto order = detail::descending_order(norms);

  Svd<Scalar> out;
  out.sigma.resize(n);
  out.U = Mat<Scalar>::Zero(m, m);
  out.V.resize(n, n);
  const double smax = norms.size() ? norms.maxCoeff() : 0.0;
  const double floor = smax * static_cast<double>(std::max(m, n)) * 1e-15;
  std::vector<Index> missing;
  for (Index k = 0; k < n; ++k) {
    const Index j = order[static_cast<std::size_t>(k)];
    out.sigma(k) = norms(j);
    out.V.col(k) = v.col(j);
    if (norms(j) > floor && norms(j) > 0)
      out.U.col(k) = w.col(j) / norms(j);
    else
      missing.push_back(k);
  }
  for (Index k = n; k < m; ++k) missing.push_back(k);
  if (!missing.empty()) detail::complete_orthonormal(out.U, missing);
  return out;
}

/// Singular values only, nonincreasing.
template <typename Derived>
RealVector singular_values(const Eigen::MatrixBase<Derived>& m) {
  return svd(m).sigma;
}

/// Spectrum of a real symmetric matrix: M = Q * diag(values) * Q^T with
/// eigenvectors in the columns of Q, values in nonincreasing order.
struct SymmetricEigen {
  RealVector values;
  RealMatrix vectors;
};

SymmetricEigen symmetric_eigen(const RealMatrix& m, const Tolerance& tol = {});

/// Haar-distributed orthogonal matrix; det_sign fixes the component (+1 / -1),
/// 0 leaves it random.
RealMatrix random_orthogonal(Index d, std::mt19937_64& rng, int det_sign = 0);

/// Haar-distributed unitary matrix.
ComplexMatrix random_unitary(Index d, std::mt19937_64& rng);

RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

/// Block-diagonal a (+) b.
template <typename Scalar>
Mat<Scalar> direct_sum(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  Mat<Scalar> out = Mat<Scalar>::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// Plane rotation [[cos t, -sin t], [sin t, cos t]].
inline Eigen::Matrix2d rotation2(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

/// Fixed order-3 matrices: the two traceless representatives, the G family
/// and the change of basis relating them.
namespace canonical {

Eigen::Matrix3d omega1();
Eigen::Matrix3d omega2();
Eigen::Matrix3d g1();
Eigen::Matrix3d g2();
Eigen::Matrix3d g3();
Eigen::Matrix3d g3p();
Eigen::Matrix3d g4();
Eigen::Matrix3d g4p();
Eigen::Matrix3d g5();
Eigen::Matrix3d basis_b();

}  // namespace canonical

}  // namespace orthoset
