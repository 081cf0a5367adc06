#pragma once

// Orthogonal equivalence of order-3 OO sets.
//
// Two sets are equivalent when fixed orthogonal U, V give
// U * M_i * V = signs_i * N_{perm(i)} for every element. Every order-3 2-OO
// set is equivalent to {I, O1}; 3-OO sets fall into two classes (C and D) and
// 4-OO sets into one (G4). Witnesses are explicit (U, V, signs, perm).

#include "orthoset/sets.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace orthoset {

using Matrix3 = Eigen::Matrix3d;

/// (1 (+) R_alpha) * O * (1 (+) R_beta) = r (+) s with s = +/-1.
struct So2Factor {
  double alpha = 0;
  double beta = 0;
  Eigen::Matrix2d r = Eigen::Matrix2d::Identity();
  int s = 1;
};

So2Factor so2_factor(const Matrix3& o, const Tolerance& tol = {});

/// Q = (-1)^a * P^T * O1 * P for an orthogonal, traceless Q.
struct QuasiDiagonal {
  Matrix3 p = Matrix3::Identity();
  int a = 0;
};

QuasiDiagonal quasi_diagonalize_traceless(const Matrix3& q, const Tolerance& tol = {});

struct Witness {
  RealMatrix u;
  RealMatrix v;
  std::vector<int> signs;
  std::vector<std::size_t> perm;
};

enum class EquivalenceLabel { PAIR_CANONICAL, CLASS_C, CLASS_D, CLASS_G4, UNRECOGNIZED };

std::string_view to_string(EquivalenceLabel label);

struct ClassificationReport {
  EquivalenceLabel label = EquivalenceLabel::UNRECOGNIZED;
  std::optional<Witness> witness;
  double residual = 0;
};

/// Reference set for a label: {I, O1}, C, D or {G1, G2, G3, G4}.
OoSet canonical_target(EquivalenceLabel label);

/// max_i ||U * M_i * V - signs_i * N_{perm(i)}||_F.
double witness_residual(const OoSet& set, const OoSet& target, const Witness& w);

ClassificationReport canonicalize_pair(const OoSet& set, const Tolerance& tol = {});
ClassificationReport classify_triple(const OoSet& set, const Tolerance& tol = {});
ClassificationReport classify_quad(const OoSet& set, const Tolerance& tol = {});

/// Singular values of sum_i s_i M_i for every sign pattern with s_0 = +1,
/// patterns ordered by the binary expansion of (s_1, ..., s_{n-1}) with
/// + before -.
std::vector<Eigen::Vector3d> signed_sum_signature(const OoSet& set);

/// Frozen signatures of the C and D classes.
const std::vector<Eigen::Vector3d>& reference_signature(EquivalenceLabel label);

/// Smallest max-abs distance between the two multisets of triples.
double signature_distance(const std::vector<Eigen::Vector3d>& a,
                          const std::vector<Eigen::Vector3d>& b);

struct SearchOptions {
  int starts = 64;
  std::uint64_t seed = 0;
};

/// Outcome of the extension search. `found` holds an orthogonal matrix that
/// is Hilbert-Schmidt orthogonal to every element. When empty the search is
/// heuristic evidence only and `objective` is the lowest value reached.
struct ExtensionResult {
  std::optional<RealMatrix> found;
  RealMatrix best;
  double objective = 0;
  double max_inner = 0;
  int best_start = -1;
  int starts = 0;
};

/// Minimizes sum_i tr(O^T S_i)^2 over O(d) from seeded random starts, half of
/// them in each determinant component.
ExtensionResult extend_set(const OoSet& set, const SearchOptions& options = {},
                           const Tolerance& tol = {});

enum class InvariantVerdict { CONSISTENT, NOT_EQUIVALENT };

std::string_view to_string(InvariantVerdict verdict);

/// Necessary-condition test: for sampled coefficient vectors k, some signs and
/// permutation must reproduce the singular values of sum k_i A_i from B. The
/// first trial uses k = (1, ..., 1).
InvariantVerdict invariant_check(const OoSet& a, const OoSet& b, int trials, std::uint64_t seed,
                                 const Tolerance& tol = {});

/// Per-start generator used by every seeded search in the library.
std::mt19937_64 start_rng(std::uint64_t seed, int start);

}  // namespace orthoset
