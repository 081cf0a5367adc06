#include "orthoset/quantum.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace orthoset;
using namespace testing;

namespace {

// (I (x) M)|Omega_d> built from the Kronecker product directly.
RealVector lifted(const RealMatrix& m) {
  const Index d = m.rows();
  RealVector omega = RealVector::Zero(d * d);
  for (Index j = 0; j < d; ++j) omega(j * d + j) = 1 / std::sqrt(static_cast<double>(d));
  return kron(RealMatrix::Identity(d, d), m) * omega;
}

RealState product_state(int d, Index j, Index i) {
  RealState s{d, RealVector::Zero(d * d)};
  s.amplitudes(j * d + i) = 1;
  return s;
}

}  // namespace

TEST_CASE("state and matrix pictures") {
  const RealMatrix m = state_to_matrix(omega_state(3));
  CHECK((m - RealMatrix::Identity(3, 3)).norm() <= 1e-15);

  const RealState g1 = {3, lifted(canonical::g1())};
  CHECK((state_to_matrix(g1) - RealMatrix(canonical::g1())).norm() <= 1e-15);
  CHECK((matrix_to_state(RealMatrix(canonical::g1())).amplitudes - g1.amplitudes).norm() <= 1e-15);

  std::mt19937_64 rng(60);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    RealVector v = gaussian(d * d, 1, rng);
    v.normalize();
    const RealState psi{d, v};
    CHECK((matrix_to_state(state_to_matrix(psi)).amplitudes - v).norm() <= 1e-12);

    RealVector w = gaussian(d * d, 1, rng);
    w.normalize();
    const RealState phi{d, w};
    CHECK(std::abs(state_inner(psi, phi) - hs_inner(state_to_matrix(psi), state_to_matrix(phi)) / d) <= 1e-12);
  }
  CHECK_THROWS_AS(state_to_matrix(RealState{3, RealVector::Zero(8)}), std::invalid_argument);
}

TEST_CASE("is_mes") {
  CHECK(is_mes(omega_state(3)).mes);
  const MesCheck prod = is_mes(product_state(3, 0, 0));
  CHECK_FALSE(prod.mes);
  CHECK(prod.residual > 1);
  CHECK(is_mes(matrix_to_state(RealMatrix(canonical::g5()))).mes);
  CHECK_THROWS_AS(is_mes(RealState{2, RealVector::Ones(4)}), std::invalid_argument);
}

TEST_CASE("local_transform matches the Kronecker action") {
  std::mt19937_64 rng(61);
  const RealState psi = matrix_to_state(RealMatrix(canonical::g2()));
  for (int trial = 0; trial < 10; ++trial) {
    const RealMatrix u = random_orthogonal(3, rng), v = random_orthogonal(3, rng);
    const RealVector ref = kron(u, v) * psi.amplitudes;
    CHECK((local_transform(psi, u, v).amplitudes - ref).norm() <= 1e-12);
  }
}

TEST_CASE("build_rumeb") {
  const auto three = build_rumeb(RumebSize::THREE);
  const auto four = build_rumeb(RumebSize::FOUR);
  CHECK(three.size() == 3);
  CHECK(four.size() == 4);
  CHECK((state_to_matrix(three[2]) - RealMatrix(canonical::g3p())).norm() <= 1e-15);

  RealState half{3, RealVector::Zero(9)};
  for (const auto& s : four) half.amplitudes += s.amplitudes / 2;
  CHECK(is_mes(half).mes);
  CHECK((state_to_matrix(half) - RealMatrix(canonical::g5())).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("verify_rumeb on the canonical bases") {
  for (auto which : {RumebSize::THREE, RumebSize::FOUR}) {
    const RumebReport r = verify_rumeb(build_rumeb(which), {64, 0});
    CHECK(r.is_rumeb);
    CHECK(r.all_mes);
    CHECK(r.orthonormal);
    CHECK(r.unextendibility.searched);
    CHECK_FALSE(r.unextendibility.found);
    CHECK(r.unextendibility.heuristic());
    CHECK(r.unextendibility.objective >= 1e-4);
  }
}

TEST_CASE("verify_rumeb finds the extension of the D-class triple") {
  std::vector<RealState> states;
  const OoSet g2set = canonical_set(CanonicalSetName::G2SET);
  for (const auto& m : g2set.elements()) states.push_back(matrix_to_state(m));
  const RumebReport r = verify_rumeb(states, {16, 0});
  CHECK_FALSE(r.is_rumeb);
  CHECK(r.all_mes);
  CHECK(r.orthonormal);
  REQUIRE(r.unextendibility.found);
  const RealMatrix& o = *r.unextendibility.extension;
  double nearest = INFINITY;
  for (const Matrix3& cand : {canonical::g4(), canonical::g4p()})
    for (double s : {1.0, -1.0}) nearest = std::min(nearest, (o - s * cand).cwiseAbs().maxCoeff());
  CHECK(nearest <= 1e-6);
}

TEST_CASE("verify_rumeb verdict equals the matrix-set verdicts") {
  std::vector<std::vector<RealState>> cases;
  cases.push_back(build_rumeb(RumebSize::THREE));
  cases.push_back({omega_state(3), product_state(3, 0, 1)});
  cases.push_back({omega_state(3), omega_state(3)});
  std::vector<RealState> g2;
  const OoSet g2set = canonical_set(CanonicalSetName::G2SET);
  for (const auto& m : g2set.elements()) g2.push_back(matrix_to_state(m));
  cases.push_back(g2);
  for (const auto& states : cases) {
    const SearchOptions opts{16, 2};
    const RumebReport r = verify_rumeb(states, opts);
    OoSet set = associated_set(states);
    const bool pass = verify_set(set).pass;
    const bool expected = pass && !extend_set(set, opts).found.has_value();
    CHECK(r.is_rumeb == expected);
  }
}

TEST_CASE("local orthogonal action preserves the verdict") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 6; ++trial) {
    const RealMatrix u = random_orthogonal(3, rng), v = random_orthogonal(3, rng);
    for (auto which : {RumebSize::THREE, RumebSize::FOUR}) {
      std::vector<RealState> moved;
      for (const auto& s : build_rumeb(which)) moved.push_back(local_transform(s, u, v));
      CHECK(verify_rumeb(moved, {32, 0}).is_rumeb);
    }
    std::vector<RealState> moved;
    const OoSet g2set = canonical_set(CanonicalSetName::G2SET);
    for (const auto& m : g2set.elements())
      moved.push_back(local_transform(matrix_to_state(m), u, v));
    CHECK_FALSE(verify_rumeb(moved, {32, 0}).is_rumeb);
  }
}

TEST_CASE("mes_superposition") {
  ComplexState omega{3, omega_state(3).amplitudes.cast<Complex>()};
  MesSuperposition s = mes_superposition(omega);
  REQUIRE(s.coeffs.size() == 1);
  CHECK(std::abs(s.coeffs(0) - Complex(1)) <= 1e-12);

  // |00> at d = 2: matrix sqrt2 * diag(1, 0), coefficients sqrt2/2 each.
  ComplexState p{2, ComplexVector::Zero(4)};
  p.amplitudes(0) = 1;
  s = mes_superposition(p);
  REQUIRE(s.coeffs.size() == 2);
  CHECK(std::abs(s.coeffs(0)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::abs(s.coeffs(1)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(s.coeffs.squaredNorm() == doctest::Approx(1).epsilon(1e-9));

  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    ComplexVector v = gaussian_complex(d * d, 1, rng);
    v.normalize();
    s = mes_superposition({d, v});
    CHECK(s.coeffs.size() <= d);
    CHECK(std::abs(s.coeffs.squaredNorm() - 1) <= 1e-9);
    CHECK(s.residual <= 1e-9);
    for (std::size_t i = 0; i < s.states.size(); ++i) {
      CHECK(is_mes(s.states[i]).mes);
      for (std::size_t j = i + 1; j < s.states.size(); ++j)
        CHECK(std::abs(state_inner(s.states[i], s.states[j])) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(mes_superposition({2, ComplexVector::Ones(4)}), std::invalid_argument);
}
