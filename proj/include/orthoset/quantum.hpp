#pragma once

// Bipartite states in R^d (x) R^d or C^d (x) C^d and their matrix picture.
//
// The amplitude of |j>|i> sits at position j*d + i, so that
// (I (x) M)|Omega_d> has amplitude M(i, j) / sqrt(d) there, with
// |Omega_d> = sum_j |jj> / sqrt(d). In matrix terms the amplitude vector is
// the column-major flattening of M / sqrt(d).

#include "orthoset/decompose.hpp"
#include "orthoset/equivalence.hpp"
#include "orthoset/sets.hpp"

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace orthoset {

template <typename Scalar>
struct BipartiteState {
  int dim = 0;
  Vec<Scalar> amplitudes;
};

using RealState = BipartiteState<double>;
using ComplexState = BipartiteState<Complex>;

/// Amplitudes normalized within this bound count as a normalized state.
inline constexpr double kNormTolerance = 1e-10;

template <typename Scalar>
Mat<Scalar> state_to_matrix(const BipartiteState<Scalar>& psi) {
  const Index d = psi.dim;
  if (d < 1 || psi.amplitudes.size() != d * d)
    throw std::invalid_argument("state_to_matrix: amplitude length must be dim^2");
  return Eigen::Map<const Mat<Scalar>>(psi.amplitudes.data(), d, d) * std::sqrt(static_cast<double>(d));
}

template <typename Derived>
BipartiteState<typename Derived::Scalar> matrix_to_state(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("matrix_to_state: expected a nonempty square matrix");
  const Index d = m.rows();
  const Mat<Scalar> scaled = m / std::sqrt(static_cast<double>(d));
  return {static_cast<int>(d), Eigen::Map<const Vec<Scalar>>(scaled.data(), d * d)};
}

/// |Omega_d>.
RealState omega_state(int d);

/// <a|b>.
template <typename Scalar>
Scalar state_inner(const BipartiteState<Scalar>& a, const BipartiteState<Scalar>& b) {
  if (a.dim != b.dim || a.amplitudes.size() != b.amplitudes.size())
    throw std::invalid_argument("state_inner: dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);
}

template <typename Scalar>
double norm_residual(const BipartiteState<Scalar>& psi) {
  return std::abs(psi.amplitudes.squaredNorm() - 1);
}

struct MesCheck {
  bool mes = false;
  /// ||M^dagger M - I||_F for the associated matrix.
  double residual = 0;
};

/// Maximally entangled iff the associated matrix is orthogonal / unitary.
template <typename Scalar>
MesCheck is_mes(const BipartiteState<Scalar>& psi, const Tolerance& tol = {}) {
  const Mat<Scalar> m = state_to_matrix(psi);
  if (norm_residual(psi) > kNormTolerance) throw std::invalid_argument("is_mes: state is not normalized");
  const double r = unitarity_residual(m);
  return {r <= tol.eps_orth, r};
}

/// (U (x) V)|psi>, computed as the state of V * M * U^T.
RealState local_transform(const RealState& psi, const RealMatrix& u, const RealMatrix& v);

struct MemberCheck {
  double norm_residual = 0;
  double mes_residual = 0;
  bool mes = false;
};

/// Outcome of the extension search on the associated matrix set. A missing
/// extension is heuristic evidence, never a proof. The search is skipped
/// when the members already fail.
struct Unextendibility {
  bool searched = false;
  bool found = false;
  std::optional<RealMatrix> extension;
  double objective = 0;
  int starts = 0;
  bool heuristic() const { return searched && !found; }
};

struct RumebReport {
  bool is_rumeb = false;
  std::vector<MemberCheck> members;
  /// Every member is maximally entangled.
  bool all_mes = false;
  /// max_{i != j} |<psi_i|psi_j>| together with the norm deviations.
  double orthonormality_residual = 0;
  bool orthonormal = false;
  Unextendibility unextendibility;
};

/// Orthogonal matrices O_i with |psi_i> = (I (x) O_i)|Omega_d>.
OoSet associated_set(const std::vector<RealState>& states);

RumebReport verify_rumeb(const std::vector<RealState>& states, const SearchOptions& options = {},
                         const Tolerance& tol = {});

enum class RumebSize { THREE, FOUR };

std::optional<RumebSize> parse_rumeb_size(std::string_view name);

/// THREE: {G1, G2, G3'}; FOUR: {G1, G2, G3, G4}; each as (I (x) G)|Omega_3>.
std::vector<RealState> build_rumeb(RumebSize which);

struct MesSuperposition {
  ComplexVector coeffs;
  std::vector<ComplexState> states;
  /// || psi - sum_k coeffs_k states_k ||_2
  double residual = 0;
};

/// psi = sum_k c_k (I (x) U_k)|Omega_d> with at most d terms; terms with
/// |c_k| <= eps_orth are dropped.
MesSuperposition mes_superposition(const ComplexState& psi, const Tolerance& tol = {});

}  // namespace orthoset
