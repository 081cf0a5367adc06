#include "orthoset/sets.hpp"

#include <numbers>

namespace orthoset {
namespace {

template <typename Set>
Set verified(Set set) {
  const auto report = verify_set(set);
  if (!report.pass) throw std::logic_error("constructed set failed verification");
  return set;
}

RealMatrix as_dynamic(const Eigen::Matrix3d& m) { return RealMatrix(m); }

}  // namespace

OuSet weyl_heisenberg(int d) {
  if (d < 1) throw std::invalid_argument("weyl_heisenberg: d must be >= 1");
  const double two_pi = 2 * std::numbers::pi;
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      ComplexMatrix u = ComplexMatrix::Zero(d, d);
      for (int k = 0; k < d; ++k) {
        // w^{kn} with the exponent reduced mod d keeps the phases exact at
        // the quarter turns.
        const int e = (k * n) % d;
        u((k + m) % d, k) = std::polar(1.0, two_pi * e / d);
      }
      out.push_back(std::move(u));
    }
  return verified(OuSet(std::move(out)));
}

std::vector<RealMatrix> pauli_generators() {
  RealMatrix a0(2, 2), a1(2, 2), a2(2, 2), a3(2, 2);
  a0 << 1, 0, 0, 1;
  a1 << 1, 0, 0, -1;
  a2 << 0, 1, 1, 0;
  a3 << 0, 1, -1, 0;
  return {a0, a1, a2, a3};
}

OoSet pauli_tensor(int k) {
  if (k < 1) throw std::invalid_argument("pauli_tensor: k must be >= 1");
  const auto gens = pauli_generators();
  std::vector<RealMatrix> level = gens;
  for (int f = 1; f < k; ++f) {
    std::vector<RealMatrix> next;
    next.reserve(level.size() * 4);
    for (const auto& prefix : level)
      for (const auto& g : gens) next.push_back(kron(prefix, g));
    level = std::move(next);
  }
  return verified(OoSet(std::move(level)));
}

OoSet cyclic_shift_set(int d) {
  if (d < 1) throw std::invalid_argument("cyclic_shift_set: d must be >= 1");
  std::vector<RealMatrix> out;
  for (int k = 0; k < d; ++k) {
    RealMatrix p = RealMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) p(i, (i + k) % d) = 1;
    out.push_back(std::move(p));
  }
  return verified(OoSet(std::move(out)));
}

std::optional<CanonicalSetName> parse_canonical_set_name(std::string_view name) {
  if (name == "C") return CanonicalSetName::C;
  if (name == "D") return CanonicalSetName::D;
  if (name == "G1SET") return CanonicalSetName::G1SET;
  if (name == "G2SET") return CanonicalSetName::G2SET;
  if (name == "G4SET") return CanonicalSetName::G4SET;
  return std::nullopt;
}

std::string_view to_string(CanonicalSetName name) {
  switch (name) {
    case CanonicalSetName::C: return "C";
    case CanonicalSetName::D: return "D";
    case CanonicalSetName::G1SET: return "G1SET";
    case CanonicalSetName::G2SET: return "G2SET";
    case CanonicalSetName::G4SET: return "G4SET";
  }
  return "?";
}

OoSet canonical_set(CanonicalSetName name) {
  using namespace canonical;
  const RealMatrix i3 = RealMatrix::Identity(3, 3);
  std::vector<RealMatrix> xs;
  switch (name) {
    case CanonicalSetName::C:
      xs = {i3, as_dynamic(omega1()), as_dynamic(omega1().transpose())};
      break;
    case CanonicalSetName::D:
      xs = {i3, as_dynamic(omega1()), as_dynamic(omega2())};
      break;
    case CanonicalSetName::G1SET:
      xs = {as_dynamic(g1()), as_dynamic(g2()), as_dynamic(g3p())};
      break;
    case CanonicalSetName::G2SET:
      xs = {as_dynamic(g1()), as_dynamic(g2()), as_dynamic(g3())};
      break;
    case CanonicalSetName::G4SET:
      xs = {as_dynamic(g1()), as_dynamic(g2()), as_dynamic(g3()), as_dynamic(g4())};
      break;
  }
  return verified(OoSet(std::move(xs)));
}

}  // namespace orthoset
