#pragma once

// Linear combinations of mutually orthogonal unitary / orthogonal matrices.
//
// Every route reduces to a diagonal (or symmetric) model through the SVD and
// transports the model basis back with the singular factors: if
// M = U * D * V^T and D = sum_i c_i X_i then M = sum_i c_i (U X_i V^T), and
// the transported family is again mutually orthogonal.

#include "orthoset/equivalence.hpp"
#include "orthoset/sets.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace orthoset {

template <typename Scalar>
struct Decomposition {
  MatrixSet<Scalar> basis;
  Vec<Scalar> coeffs;
  /// ||M - sum_i coeffs_i basis_i||_F
  double residual = 0;

  Mat<Scalar> reconstruct() const {
    Mat<Scalar> out = Mat<Scalar>::Zero(basis.order(), basis.order());
    for (std::size_t i = 0; i < basis.size(); ++i) out += coeffs(static_cast<Index>(i)) * basis[i];
    return out;
  }
};

using OuDecomposition = Decomposition<Complex>;
using OoDecomposition = Decomposition<double>;

/// Thrown when a matrix admits no decomposition of the requested shape.
/// `floor` carries the best search objective when the verdict came from a
/// search, and is zero for exact tests.
class InfeasibleError : public std::domain_error {
 public:
  InfeasibleError(const std::string& what, double floor = 0)
      : std::domain_error(what), floor_(floor) {}
  double floor() const { return floor_; }

 private:
  double floor_;
};

/// Singular values x >= y >= z >= 0 of an order-3 matrix.
struct SingularTriple {
  double x = 0;
  double y = 0;
  double z = 0;

  /// Sorts the three values into nonincreasing order.
  static SingularTriple sorted(double a, double b, double c);
  static SingularTriple of(const RealMatrix& m);
  Eigen::Vector3d vector() const { return {x, y, z}; }
};

using CoeffVector3 = std::array<double, 3>;
using CoeffVector4 = std::array<double, 4>;

/// l1 G1 + l2 G2 + l3 G3 = [[l1, -l3, l2], [-l3, l2, l1], [l2, l1, l3]].
Matrix3 symmetric_model(const CoeffVector3& l);
/// l1 G1 + l2 G2 + l3 G3 + l4 G4.
Matrix3 quad_model(const CoeffVector4& l);

// ---------------------------------------------------------------------------
// Complex route: every order-d matrix is a combination of d mutually
// orthogonal unitaries A Z_k B^dagger with Z_k = diag(z^{jk}), z = e^{2 pi i/d}.

OuDecomposition ou_decompose(const ComplexMatrix& m, const Tolerance& tol = {});

/// diag(1, 0, ..., 0): has no (d-1)-OU decomposition.
RealMatrix ou_lower_bound_witness(int d);

// ---------------------------------------------------------------------------
// Order-3 real routes.

struct Oo2Feasibility {
  bool feasible = false;
  /// The repeated singular value and the remaining one.
  double doubled = 0;
  double odd = 0;
};

/// Two singular values equal (x) and the third (y) at most 2x.
Oo2Feasibility oo2_feasible(const SingularTriple& t, const Tolerance& tol = {});

/// The closed-form pair for diag(x, x, y):
/// diag(x, x, y) = k1 * first + k2 * second.
struct Oo2Model {
  double k1 = 0;
  double k2 = 0;
  Matrix3 first;
  Matrix3 second;
};
Oo2Model oo2_model(double x, double y);

OoDecomposition oo2_decompose(const RealMatrix& m, const Tolerance& tol = {});

/// One sign choice (x', y', z') = signs * (x, y, z) for which the cubic
/// system in (l1, l2, l3) has a real solution, and that solution.
struct Oo3Candidate {
  std::array<int, 3> signs{1, 1, 1};
  CoeffVector3 l{};
  double discriminant = 0;
};

struct Oo3Feasibility {
  bool feasible = false;
  /// Condition (a): two singular values coincide.
  bool equal_pair = false;
  /// First feasible cubic candidate in sign-enumeration order.
  std::optional<Oo3Candidate> witness;
  /// Every feasible sign choice, signs enumerated (+,+,+), (+,+,-), ..., (-,-,-).
  std::vector<Oo3Candidate> candidates;
  /// Normalized discriminant for each of the eight sign choices.
  std::array<double, 8> discriminants{};
};

/// Discriminant threshold admitting the repeated-root boundary.
inline constexpr double kDiscriminantFloor = -1e-12;

Oo3Feasibility oo3_feasible(const SingularTriple& t, const Tolerance& tol = {});
OoDecomposition oo3_decompose(const RealMatrix& m, const Tolerance& tol = {});

enum class Oo4Evidence { SEARCH, REFERENCE_FIXTURE };

struct Oo4Feasibility {
  bool feasible = false;
  std::optional<CoeffVector4> witness;
  /// Best ||sorted singular values of the model - target||_2 over all starts.
  double mismatch = 0;
  CoeffVector4 best{};
  int best_start = -1;
  int starts = 0;
  /// Infeasible verdicts are search-based unless the triple is the known
  /// (sqrt8, 1, 0) fixture up to scale.
  Oo4Evidence evidence = Oo4Evidence::SEARCH;
};

/// Mismatch between singular values of quad_model(l) and the target.
double oo4_mismatch(const CoeffVector4& l, const SingularTriple& t);

Oo4Feasibility oo4_feasible(const SingularTriple& t, const SearchOptions& options = {},
                            const Tolerance& tol = {});
OoDecomposition oo4_decompose(const RealMatrix& m, const SearchOptions& options = {},
                              const Tolerance& tol = {});

/// Three matrices and coefficients with M = sum_i coeffs_i matrices_i.
struct WeakDecomposition {
  std::array<RealMatrix, 3> matrices;
  Eigen::Vector3d coeffs = Eigen::Vector3d::Zero();
  double residual = 0;
  /// Worst |tr(X_i^T X_j)| over the pairs the route makes orthogonal.
  double orthogonality_residual = 0;
};

/// O1, O2, O3 orthogonal with tr(O1^T O2) = 0.
WeakDecomposition weak_decompose_a(const RealMatrix& m);
/// O1, O2 orthogonal and all three pairwise orthogonal; the third matrix is
/// a transported diagonal.
WeakDecomposition weak_decompose_b(const RealMatrix& m);

}  // namespace orthoset
