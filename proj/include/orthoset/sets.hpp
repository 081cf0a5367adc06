#pragma once

#include "orthoset/matkernel.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orthoset {

/// OU sets carry complex unitary elements, OO sets real orthogonal ones.
enum class SetKind { OU, OO };

template <typename Scalar>
class MatrixSet;

struct VerificationReport {
  bool pass = false;
  /// Worst ||X^dagger X - I||_F over the elements and where it occurs.
  double unitarity_residual = 0;
  Index unitarity_index = -1;
  /// Worst |tr(X_i^dagger X_j)| over i != j and the offending pair.
  double cross_residual = 0;
  std::optional<std::pair<Index, Index>> cross_pair;
};

template <typename Scalar>
VerificationReport verify_set(MatrixSet<Scalar>& set, const Tolerance& tol = {});

/// An ordered collection of square matrices claiming the n-OU (complex) or
/// n-OO (real) property. Element order is part of the data.
template <typename Scalar>
class MatrixSet {
 public:
  static constexpr SetKind kind = is_complex_v<Scalar> ? SetKind::OU : SetKind::OO;
  using Matrix = Mat<Scalar>;

  MatrixSet() = default;
  explicit MatrixSet(std::vector<Matrix> elements) : elements_(std::move(elements)) {
    check_shapes();
  }

  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  Index order() const { return elements_.empty() ? 0 : elements_.front().rows(); }

  /// True only after a passing verify_set on this object.
  bool verified() const { return verified_; }

  /// {U * X * V : X in set}; the result is unverified.
  MatrixSet transformed(const Matrix& left, const Matrix& right) const {
    std::vector<Matrix> out;
    out.reserve(elements_.size());
    for (const auto& x : elements_) out.push_back(left * x * right);
    return MatrixSet(std::move(out));
  }

 private:
  void check_shapes() const {
    if (elements_.empty()) return;
    const Index d = elements_.front().rows();
    for (const auto& x : elements_)
      if (x.rows() != d || x.cols() != d)
        throw std::invalid_argument("MatrixSet: elements must be square of a common order");
  }

  std::vector<Matrix> elements_;
  bool verified_ = false;

  friend VerificationReport verify_set<Scalar>(MatrixSet<Scalar>&, const Tolerance&);
};

using OuSet = MatrixSet<Complex>;
using OoSet = MatrixSet<double>;

/// Checks unitarity (orthogonality) of every element within eps_orth and
/// mutual orthogonality |tr(X_i^dagger X_j)| <= eps_orth * d. Sets the
/// verified flag on the argument to the verdict.
template <typename Scalar>
VerificationReport verify_set(MatrixSet<Scalar>& set, const Tolerance& tol) {
  if (set.empty()) throw std::invalid_argument("verify_set: empty set");
  VerificationReport report;
  const auto& xs = set.elements();
  const double d = static_cast<double>(set.order());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = unitarity_residual(xs[i]);
    if (r > report.unitarity_residual || report.unitarity_index < 0) {
      report.unitarity_residual = r;
      report.unitarity_index = static_cast<Index>(i);
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double c = std::abs(hs_inner(xs[i], xs[j]));
      if (!report.cross_pair || c > report.cross_residual) {
        report.cross_residual = c;
        report.cross_pair = std::pair{static_cast<Index>(i), static_cast<Index>(j)};
      }
    }
  report.pass = report.unitarity_residual <= tol.eps_orth && report.cross_residual <= tol.eps_orth * d;
  set.verified_ = report.pass;
  return report;
}

/// Non-mutating check; returns the report without touching any flag.
template <typename Scalar>
VerificationReport check_set(const MatrixSet<Scalar>& set, const Tolerance& tol = {}) {
  MatrixSet<Scalar> copy = set;
  return verify_set(copy, tol);
}

/// The d^2 clock-and-shift unitaries U_{n,m} = sum_k w^{kn} |k+m><k| with
/// w = exp(2 pi i / d), listed with index n * d + m.
OuSet weyl_heisenberg(int d);

/// Index of U_{n,m} inside weyl_heisenberg(d).
inline std::size_t weyl_index(int d, int n, int m) {
  return static_cast<std::size_t>(n * d + m);
}

/// The 4^k k-fold Kronecker products of {I, Z, X, XZ-type} 2x2 orthogonal
/// generators in lexicographic index order (first factor most significant).
OoSet pauli_tensor(int k);

/// The 2x2 generators used by pauli_tensor.
std::vector<RealMatrix> pauli_generators();

/// Cyclic shifts P_k with unit entries at (i, i + k mod d), k = 0..d-1.
OoSet cyclic_shift_set(int d);

enum class CanonicalSetName { C, D, G1SET, G2SET, G4SET };

std::optional<CanonicalSetName> parse_canonical_set_name(std::string_view name);
std::string_view to_string(CanonicalSetName name);

/// C = {I, O1, O1^T}, D = {I, O1, O2}, G1SET = {G1, G2, G3'},
/// G2SET = {G1, G2, G3}, G4SET = {G1, G2, G3, G4}.
OoSet canonical_set(CanonicalSetName name);

}  // namespace orthoset
