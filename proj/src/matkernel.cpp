#include "orthoset/matkernel.hpp"

#include <Eigen/Eigenvalues>

namespace orthoset {

SymmetricEigen symmetric_eigen(const RealMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetric_eigen: non-square input");
  if ((m - m.transpose()).norm() > tol.eps_orth * (1 + m.norm()))
    throw std::invalid_argument("symmetric_eigen: input is not symmetric");

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m);
  const RealVector& ascending = solver.eigenvalues();
  const auto order = detail::descending_order(ascending);

  SymmetricEigen out;
  out.values.resize(m.rows());
  out.vectors.resize(m.rows(), m.cols());
  for (Index k = 0; k < m.rows(); ++k) {
    const Index j = order[static_cast<std::size_t>(k)];
    out.values(k) = ascending(j);
    out.vectors.col(k) = solver.eigenvectors().col(j);
  }
  return out;
}

RealMatrix random_orthogonal(Index d, std::mt19937_64& rng, int det_sign) {
  std::normal_distribution<double> gauss;
  RealMatrix g(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (det_sign != 0 && (q.determinant() > 0) != (det_sign > 0)) q.col(0) = -q.col(0);
  return q;
}

ComplexMatrix random_unitary(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace canonical {
namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);
const double kSqrt5 = std::sqrt(5.0);
const double kSqrt6 = std::sqrt(6.0);

}  // namespace

Eigen::Matrix3d omega1() {
  Eigen::Matrix3d m;
  m << 1, 0, 0,
       0, -0.5, -kSqrt3 / 2,
       0, kSqrt3 / 2, -0.5;
  return m;
}

Eigen::Matrix3d omega2() {
  Eigen::Matrix3d m;
  m << -1.0 / 3, kSqrt2 / 3, kSqrt6 / 3,
       kSqrt2 / 3, 5.0 / 6, -kSqrt3 / 6,
       -kSqrt6 / 3, kSqrt3 / 6, -0.5;
  return m;
}

Eigen::Matrix3d g1() {
  Eigen::Matrix3d m;
  m << 1, 0, 0,
       0, 0, 1,
       0, 1, 0;
  return m;
}

Eigen::Matrix3d g2() {
  Eigen::Matrix3d m;
  m << 0, 0, 1,
       0, 1, 0,
       1, 0, 0;
  return m;
}

Eigen::Matrix3d g3() {
  Eigen::Matrix3d m;
  m << 0, -1, 0,
       -1, 0, 0,
       0, 0, 1;
  return m;
}

Eigen::Matrix3d g3p() {
  Eigen::Matrix3d m;
  m << 0, 1, 0,
       1, 0, 0,
       0, 0, 1;
  return m;
}

Eigen::Matrix3d g4() {
  const double p = (1 + kSqrt5) / 4;  // (1 + sqrt5) / 4
  const double q = (1 - kSqrt5) / 4;  // (1 - sqrt5) / 4
  Eigen::Matrix3d m;
  m << -0.5, -p, q,
       -q, -0.5, p,
       p, q, -0.5;
  return m;
}

Eigen::Matrix3d g4p() {
  const double p = (1 + kSqrt5) / 4;
  const double q = (1 - kSqrt5) / 4;
  Eigen::Matrix3d m;
  m << -0.5, -q, p,
       -p, -0.5, q,
       q, p, -0.5;
  return m;
}

Eigen::Matrix3d g5() {
  const double a = (5 + kSqrt5) / 8;
  const double b = (5 - kSqrt5) / 8;
  Eigen::Matrix3d m;
  m << 0.25, -a, b,
       -b, 0.25, a,
       a, b, 0.25;
  return m;
}

Eigen::Matrix3d basis_b() {
  Eigen::Matrix3d m;
  m << 1 / kSqrt3, -std::sqrt(2.0 / 3), 0,
       1 / kSqrt3, 1 / kSqrt6, -1 / kSqrt2,
       1 / kSqrt3, 1 / kSqrt6, 1 / kSqrt2;
  return m;
}

}  // namespace canonical
}  // namespace orthoset
