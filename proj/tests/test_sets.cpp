#include "orthoset/sets.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace orthoset;
using namespace testing;

TEST_CASE("verify_set on small fixed sets") {
  const RealMatrix i3 = RealMatrix::Identity(3, 3);
  OoSet pair({i3, RealMatrix(canonical::omega1())});
  CHECK_FALSE(pair.verified());
  CHECK(verify_set(pair).pass);
  CHECK(pair.verified());

  OoSet twice({i3, i3});
  const auto r = verify_set(twice);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(twice.verified());
  CHECK(r.cross_residual == doctest::Approx(3));
  REQUIRE(r.cross_pair.has_value());
  CHECK(r.cross_pair->first == 0);
  CHECK(r.cross_pair->second == 1);

  OoSet scaled({RealMatrix(2 * i3)});
  const auto s = verify_set(scaled);
  CHECK_FALSE(s.pass);
  CHECK(s.unitarity_index == 0);

  CHECK(check_set(canonical_set(CanonicalSetName::G4SET)).pass);
  CHECK_THROWS_AS(OoSet({RealMatrix::Identity(2, 2), i3}), std::invalid_argument);
  CHECK_THROWS_AS(OoSet({RealMatrix(2, 3)}), std::invalid_argument);
  OoSet empty(std::vector<RealMatrix>{});
  CHECK_THROWS_AS(verify_set(empty), std::invalid_argument);
}

TEST_CASE("weyl_heisenberg small cases") {
  const OuSet w1 = weyl_heisenberg(1);
  REQUIRE(w1.size() == 1);
  CHECK(std::abs(w1[0](0, 0) - Complex(1)) < 1e-15);

  const OuSet w2 = weyl_heisenberg(2);
  REQUIRE(w2.size() == 4);
  ComplexMatrix z(2, 2), x(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  CHECK((w2[weyl_index(2, 1, 0)] - z).norm() < 1e-15);
  CHECK((w2[weyl_index(2, 0, 1)] - x).norm() < 1e-15);

  const OuSet w3 = weyl_heisenberg(3);
  CHECK(w3.size() == 9);
  for (std::size_t i = 0; i < w3.size(); ++i)
    for (std::size_t j = i + 1; j < w3.size(); ++j) CHECK(std::abs(hs_inner(w3[i], w3[j])) < 1e-14);

  CHECK_THROWS_AS(weyl_heisenberg(0), std::invalid_argument);
}

TEST_CASE("weyl_heisenberg elements multiply projectively") {
  for (int d = 1; d <= 5; ++d) {
    const OuSet w = weyl_heisenberg(d);
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m)
        for (int n2 = 0; n2 < d; ++n2)
          for (int m2 = 0; m2 < d; ++m2) {
            const ComplexMatrix prod = w[weyl_index(d, n, m)] * w[weyl_index(d, n2, m2)];
            const ComplexMatrix& target = w[weyl_index(d, (n + n2) % d, (m + m2) % d)];
            // prod = phase * target with phase a d-th root of unity.
            const Complex phase = hs_inner(target, prod) / static_cast<double>(d);
            CHECK((prod - phase * target).norm() < 1e-12);
            const double turns = std::arg(phase) * d / (2 * std::numbers::pi);
            CHECK(std::abs(turns - std::round(turns)) < 1e-9);
          }
  }
}

TEST_CASE("pauli_tensor") {
  const OoSet p1 = pauli_tensor(1);
  REQUIRE(p1.size() == 4);
  const auto gens = pauli_generators();
  RealMatrix a3(2, 2);
  a3 << 0, 1, -1, 0;
  CHECK(gens[3] == a3);
  for (std::size_t i = 0; i < 4; ++i) CHECK(p1[i] == gens[i]);
  CHECK(hs_inner(p1[2], p1[3]) == 0);

  for (int k = 1; k <= 4; ++k) {
    const OoSet p = pauli_tensor(k);
    CHECK(p.size() == static_cast<std::size_t>(1) << (2 * k));
    CHECK(p.order() == Index(1) << k);
  }
  // Lexicographic order: index 4*i + j is A_i (x) A_j.
  const OoSet p2 = pauli_tensor(2);
  CHECK(p2[4 * 2 + 3] == kron(gens[2], gens[3]));
  CHECK_THROWS_AS(pauli_tensor(0), std::invalid_argument);
}

TEST_CASE("cyclic_shift_set") {
  const OoSet c1 = cyclic_shift_set(1);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0](0, 0) == 1);

  const OoSet c3 = cyclic_shift_set(3);
  RealMatrix p1(3, 3);
  p1 << 0, 1, 0,
        0, 0, 1,
        1, 0, 0;
  CHECK(c3[1] == p1);

  const OoSet c5 = cyclic_shift_set(5);
  CHECK(c5.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) CHECK(hs_inner(c5[i], c5[j]) == 0);
  CHECK_THROWS_AS(cyclic_shift_set(0), std::invalid_argument);
}

TEST_CASE("canonical sets") {
  const OoSet c = canonical_set(CanonicalSetName::C);
  CHECK(c[2] == RealMatrix(canonical::omega1().transpose()));
  CHECK(canonical_set(CanonicalSetName::G4SET).size() == 4);
  for (auto n : {CanonicalSetName::C, CanonicalSetName::D, CanonicalSetName::G1SET, CanonicalSetName::G2SET,
                 CanonicalSetName::G4SET}) {
    CHECK(check_set(canonical_set(n)).pass);
    CHECK(parse_canonical_set_name(to_string(n)) == n);
  }
  CHECK_FALSE(parse_canonical_set_name("G3SET").has_value());
}

TEST_CASE("constructor residuals stay below 1e-12 up to order 16") {
  for (int d = 1; d <= 16; ++d) {
    const auto w = check_set(weyl_heisenberg(d));
    CHECK(w.pass);
    CHECK(w.unitarity_residual <= 1e-12);
    CHECK(w.cross_residual <= 1e-12);
    const auto c = check_set(cyclic_shift_set(d));
    CHECK(c.unitarity_residual <= 1e-12);
    CHECK(c.cross_residual <= 1e-12);
  }
  for (int k = 1; k <= 4; ++k) {
    const auto p = check_set(pauli_tensor(k));
    CHECK(p.unitarity_residual <= 1e-12);
    CHECK(p.cross_residual <= 1e-12);
  }
}

TEST_CASE("left/right transport preserves the set property") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 4);
    const OoSet cyc = cyclic_shift_set(static_cast<int>(d));
    CHECK(check_set(cyc.transformed(random_orthogonal(d, rng), random_orthogonal(d, rng))).pass);
    const OuSet w = weyl_heisenberg(static_cast<int>(d));
    CHECK(check_set(w.transformed(random_unitary(d, rng), random_unitary(d, rng))).pass);
  }
}
