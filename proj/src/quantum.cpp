#include "orthoset/quantum.hpp"

#include <algorithm>

namespace orthoset {

RealState omega_state(int d) { return matrix_to_state(RealMatrix::Identity(d, d)); }

RealState local_transform(const RealState& psi, const RealMatrix& u, const RealMatrix& v) {
  const RealMatrix m = state_to_matrix(psi);
  if (u.rows() != m.rows() || u.cols() != m.cols() || v.rows() != m.rows() || v.cols() != m.cols())
    throw std::invalid_argument("local_transform: dimension mismatch");
  return matrix_to_state(v * m * u.transpose());
}

OoSet associated_set(const std::vector<RealState>& states) {
  if (states.empty()) throw std::invalid_argument("associated_set: no states");
  std::vector<RealMatrix> xs;
  xs.reserve(states.size());
  for (const auto& s : states) {
    if (s.dim != states.front().dim) throw std::invalid_argument("associated_set: dimension mismatch");
    xs.push_back(state_to_matrix(s));
  }
  return OoSet(std::move(xs));
}

RumebReport verify_rumeb(const std::vector<RealState>& states, const SearchOptions& options,
                         const Tolerance& tol) {
  OoSet set = associated_set(states);
  RumebReport out;
  out.all_mes = true;
  double worst = 0;
  for (const auto& s : states) {
    MemberCheck c;
    c.norm_residual = norm_residual(s);
    c.mes_residual = unitarity_residual(state_to_matrix(s));
    c.mes = c.norm_residual <= kNormTolerance && c.mes_residual <= tol.eps_orth;
    out.all_mes = out.all_mes && c.mes;
    worst = std::max(worst, c.norm_residual);
    out.members.push_back(c);
  }
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      worst = std::max(worst, std::abs(state_inner(states[i], states[j])));
  out.orthonormality_residual = worst;
  out.orthonormal = worst <= tol.eps_orth;

  // Conditions (a) and (b) together are exactly verify_set on the matrices.
  const VerificationReport vr = verify_set(set, tol);
  if (!vr.pass) return out;
  const ExtensionResult ext = extend_set(set, options, tol);
  out.unextendibility.searched = true;
  out.unextendibility.found = ext.found.has_value();
  out.unextendibility.extension = ext.found;
  out.unextendibility.objective = ext.objective;
  out.unextendibility.starts = ext.starts;
  out.is_rumeb = !ext.found;
  return out;
}

std::optional<RumebSize> parse_rumeb_size(std::string_view name) {
  if (name == "three" || name == "THREE") return RumebSize::THREE;
  if (name == "four" || name == "FOUR") return RumebSize::FOUR;
  return std::nullopt;
}

std::vector<RealState> build_rumeb(RumebSize which) {
  const OoSet set =
      canonical_set(which == RumebSize::THREE ? CanonicalSetName::G1SET : CanonicalSetName::G4SET);
  std::vector<RealState> out;
  for (const auto& m : set.elements()) out.push_back(matrix_to_state(m));
  return out;
}

MesSuperposition mes_superposition(const ComplexState& psi, const Tolerance& tol) {
  const ComplexMatrix m = state_to_matrix(psi);
  if (norm_residual(psi) > kNormTolerance)
    throw std::invalid_argument("mes_superposition: state is not normalized");
  const OuDecomposition dec = ou_decompose(m, tol);

  MesSuperposition out;
  std::vector<Complex> kept;
  ComplexVector sum = ComplexVector::Zero(psi.amplitudes.size());
  for (std::size_t k = 0; k < dec.basis.size(); ++k) {
    const Complex c = dec.coeffs(static_cast<Index>(k));
    if (std::abs(c) <= tol.eps_orth) continue;
    kept.push_back(c);
    out.states.push_back(matrix_to_state(dec.basis[k]));
    sum += c * out.states.back().amplitudes;
  }
  out.coeffs = Eigen::Map<ComplexVector>(kept.data(), static_cast<Index>(kept.size()));
  out.residual = (psi.amplitudes - sum).norm();
  return out;
}

}  // namespace orthoset
