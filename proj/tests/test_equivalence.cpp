#include "orthoset/equivalence.hpp"
#include "support.hpp"

#include <doctest.h>

#include <complex>
#include <numbers>

using namespace orthoset;
using namespace testing;

namespace {

Matrix3 embed(double angle) {
  Matrix3 w = Matrix3::Identity();
  w.bottomRightCorner<2, 2>() = rotation2(angle);
  return w;
}

// max_i ||U M_i V - s_i N_perm(i)||_F computed independently of the library.
double direct_residual(const OoSet& set, const OoSet& target, const Witness& w) {
  double worst = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    RealMatrix diff = w.u * set[i] * w.v;
    diff -= static_cast<double>(w.signs[i]) * target[w.perm[i]];
    worst = std::max(worst, std::sqrt(trace_inner(diff, diff)));
  }
  return worst;
}

// Random orthogonal left/right factors, per-element signs and a shuffle.
OoSet scramble(const OoSet& set, std::mt19937_64& rng) {
  const RealMatrix a = random_orthogonal(3, rng), b = random_orthogonal(3, rng);
  std::vector<RealMatrix> xs;
  for (const auto& x : set.elements()) xs.push_back((rng() & 1 ? -1.0 : 1.0) * (a * x * b));
  std::shuffle(xs.begin(), xs.end(), rng);
  OoSet out(std::move(xs));
  verify_set(out);
  return out;
}

void check_witness(const OoSet& set, const ClassificationReport& r, double bound) {
  REQUIRE(r.witness.has_value());
  const OoSet target = canonical_target(r.label);
  CHECK(unitarity_residual(r.witness->u) <= 1e-10);
  CHECK(unitarity_residual(r.witness->v) <= 1e-10);
  CHECK(r.witness->signs.size() == set.size());
  CHECK(r.witness->perm.size() == set.size());
  const double res = direct_residual(set, target, *r.witness);
  CHECK(res <= bound);
  CHECK(witness_residual(set, target, *r.witness) == doctest::Approx(res).epsilon(1e-6));
}

}  // namespace

TEST_CASE("so2_factor") {
  auto check_factor = [](const Matrix3& o) {
    const So2Factor f = so2_factor(o);
    const Matrix3 both = embed(f.alpha) * o * embed(f.beta);
    CHECK((both.topLeftCorner<2, 2>() - f.r).norm() <= 1e-10);
    CHECK(both(2, 2) == doctest::Approx(f.s).epsilon(1e-10));
    CHECK(std::abs(both(2, 0)) + std::abs(both(2, 1)) + std::abs(both(0, 2)) + std::abs(both(1, 2)) <= 1e-10);
    CHECK(unitarity_residual(f.r) <= 1e-10);
    return f;
  };
  const So2Factor id = check_factor(Matrix3::Identity());
  CHECK(id.alpha == 0);
  CHECK(id.beta == 0);
  CHECK(id.s == 1);
  check_factor(canonical::omega1().transpose());
  CHECK(check_factor(Eigen::Vector3d(1, 1, -1).asDiagonal()).s == -1);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) check_factor(Matrix3(random_orthogonal(3, rng)));
  CHECK_THROWS_AS(so2_factor(2 * Matrix3::Identity()), std::invalid_argument);
}

TEST_CASE("quasi_diagonalize_traceless") {
  const Matrix3 o1 = canonical::omega1();
  QuasiDiagonal q = quasi_diagonalize_traceless(o1);
  CHECK(q.a == 0);
  CHECK((q.p.transpose() * o1 * q.p - o1).norm() <= 1e-10);

  q = quasi_diagonalize_traceless(-o1);
  CHECK(q.a == 1);
  CHECK((-q.p.transpose() * o1 * q.p - (-o1)).norm() <= 1e-10);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix3 r = random_orthogonal(3, rng);
    const double sign = trial % 2 ? -1.0 : 1.0;
    const Matrix3 qm = sign * r.transpose() * o1 * r;
    q = quasi_diagonalize_traceless(qm);
    CHECK(q.a == (sign < 0 ? 1 : 0));
    CHECK(unitarity_residual(q.p) <= 1e-10);
    CHECK(((q.a ? -1.0 : 1.0) * q.p.transpose() * o1 * q.p - qm).norm() <= 1e-9);

    // Spectrum of (-1)^a Q is {1, exp(+-2 pi i / 3)}.
    const Eigen::Vector3cd ev = ((q.a ? -1.0 : 1.0) * qm).eigenvalues();
    const std::complex<double> w = std::polar(1.0, 2 * std::numbers::pi / 3);
    for (const auto& target : {std::complex<double>(1), w, std::conj(w)}) {
      double nearest = INFINITY;
      for (Index i = 0; i < 3; ++i) nearest = std::min(nearest, std::abs(ev(i) - target));
      CHECK(nearest <= 1e-9);
    }
  }
  CHECK_THROWS_AS(quasi_diagonalize_traceless(Matrix3::Identity()), std::invalid_argument);
}

TEST_CASE("canonicalize_pair") {
  OoSet base({RealMatrix::Identity(3, 3), RealMatrix(canonical::omega1())});
  verify_set(base);
  ClassificationReport r = canonicalize_pair(base);
  CHECK(r.label == EquivalenceLabel::PAIR_CANONICAL);
  check_witness(base, r, 1e-10);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const RealMatrix a = random_orthogonal(3, rng), b = random_orthogonal(3, rng);
    OoSet s({RealMatrix(a * b.transpose()), RealMatrix(a * canonical::omega1() * b.transpose())});
    r = canonicalize_pair(s);
    check_witness(s, r, 1e-8);
  }

  OoSet g12({RealMatrix(canonical::g1()), RealMatrix(canonical::g2())});
  check_witness(g12, canonicalize_pair(g12), 1e-8);

  OoSet bad({RealMatrix::Identity(3, 3), RealMatrix::Identity(3, 3)});
  CHECK_THROWS_AS(canonicalize_pair(bad), std::invalid_argument);
}

TEST_CASE("signed-sum signatures of the reference classes") {
  const auto c = signed_sum_signature(canonical_set(CanonicalSetName::C));
  REQUIRE(c.size() == 4);
  CHECK((c[0] - Eigen::Vector3d(3, 0, 0)).norm() <= 1e-12);
  CHECK(signature_distance(c, reference_signature(EquivalenceLabel::CLASS_C)) <= 1e-12);

  // Independent brute force: singular values of +-I +- O1 +- O2 from the reference SVD.
  const OoSet d = canonical_set(CanonicalSetName::D);
  std::vector<Eigen::Vector3d> brute;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0})
      brute.emplace_back(reference_singular_values(RealMatrix(d[0] + s1 * d[1] + s2 * d[2])));
  CHECK(signature_distance(brute, reference_signature(EquivalenceLabel::CLASS_D)) <= 1e-12);
  CHECK(signature_distance(reference_signature(EquivalenceLabel::CLASS_C),
                           reference_signature(EquivalenceLabel::CLASS_D)) > 0.5);
}

TEST_CASE("classify_triple on the named sets") {
  const OoSet c = canonical_set(CanonicalSetName::C);
  const OoSet d = canonical_set(CanonicalSetName::D);
  const OoSet g1 = canonical_set(CanonicalSetName::G1SET);
  const OoSet g2 = canonical_set(CanonicalSetName::G2SET);
  ClassificationReport r = classify_triple(c);
  CHECK(r.label == EquivalenceLabel::CLASS_C);
  check_witness(c, r, 1e-10);
  r = classify_triple(d);
  CHECK(r.label == EquivalenceLabel::CLASS_D);
  check_witness(d, r, 1e-10);
  r = classify_triple(g1);
  CHECK(r.label == EquivalenceLabel::CLASS_C);
  check_witness(g1, r, 1e-8);
  r = classify_triple(g2);
  CHECK(r.label == EquivalenceLabel::CLASS_D);
  check_witness(g2, r, 1e-8);
}

TEST_CASE("classify_triple is invariant under scrambling") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const bool use_c = trial % 2 == 0;
    const OoSet base = canonical_set(use_c ? CanonicalSetName::C : CanonicalSetName::D);
    const OoSet s = scramble(base, rng);
    const ClassificationReport r = classify_triple(s);
    CHECK(r.label == (use_c ? EquivalenceLabel::CLASS_C : EquivalenceLabel::CLASS_D));
    check_witness(s, r, 1e-8);
  }
}

TEST_CASE("classify_quad") {
  const OoSet g = canonical_set(CanonicalSetName::G4SET);
  ClassificationReport r = classify_quad(g);
  CHECK(r.label == EquivalenceLabel::CLASS_G4);
  check_witness(g, r, 1e-10);

  OoSet gp({RealMatrix(canonical::g1()), RealMatrix(canonical::g2()), RealMatrix(canonical::g3()),
            RealMatrix(canonical::g4p())});
  REQUIRE(verify_set(gp).pass);
  r = classify_quad(gp);
  CHECK(r.label == EquivalenceLabel::CLASS_G4);
  check_witness(gp, r, 1e-8);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const OoSet s = scramble(g, rng);
    r = classify_quad(s);
    CHECK(r.label == EquivalenceLabel::CLASS_G4);
    check_witness(s, r, 1e-8);
  }
}

TEST_CASE("classification rejects non-sets") {
  OoSet bad({RealMatrix::Identity(3, 3), RealMatrix(canonical::omega1()), RealMatrix(canonical::omega1())});
  CHECK_THROWS_AS(classify_triple(bad), std::invalid_argument);
  CHECK_THROWS_AS(classify_triple(canonical_set(CanonicalSetName::G4SET)), std::invalid_argument);
}

TEST_CASE("invariant_check") {
  const OoSet c = canonical_set(CanonicalSetName::C);
  const OoSet d = canonical_set(CanonicalSetName::D);
  CHECK(invariant_check(c, c, 10, 0) == InvariantVerdict::CONSISTENT);
  CHECK(invariant_check(c, d, 10, 0) == InvariantVerdict::NOT_EQUIVALENT);
  std::mt19937_64 rng(4);
  const OoSet g2 = canonical_set(CanonicalSetName::G2SET);
  CHECK(invariant_check(scramble(g2, rng), g2, 10, 1) == InvariantVerdict::CONSISTENT);
  CHECK_THROWS_AS(invariant_check(c, canonical_set(CanonicalSetName::G4SET), 1, 0), std::invalid_argument);
}

TEST_CASE("extend_set finds the fourth element of the D-class G triple") {
  const ExtensionResult r = extend_set(canonical_set(CanonicalSetName::G2SET), {16, 0});
  REQUIRE(r.found.has_value());
  const RealMatrix& o = *r.found;
  CHECK(unitarity_residual(o) <= 1e-10);
  double nearest = INFINITY;
  for (const Matrix3& cand : {canonical::g4(), canonical::g4p()})
    for (double s : {1.0, -1.0}) nearest = std::min(nearest, (o - s * cand).cwiseAbs().maxCoeff());
  CHECK(nearest <= 1e-6);
}

TEST_CASE("extend_set is deterministic and reports a floor when nothing is found") {
  const OoSet g1 = canonical_set(CanonicalSetName::G1SET);
  const ExtensionResult a = extend_set(g1, {20, 5});
  const ExtensionResult b = extend_set(g1, {20, 5});
  CHECK_FALSE(a.found.has_value());
  CHECK(a.objective >= 1e-4);
  CHECK(a.objective == b.objective);
  CHECK(a.best_start == b.best_start);
  CHECK(a.best == b.best);
  CHECK(a.starts == 20);

  // Orders other than three are searched the same way: a 2-element Pauli
  // subset extends.
  const OoSet p = pauli_tensor(1);
  OoSet two({p[0], p[1]});
  CHECK(extend_set(two, {8, 0}).found.has_value());
}
