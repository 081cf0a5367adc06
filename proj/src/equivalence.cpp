#include "orthoset/equivalence.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <limits>
#include <numbers>

namespace orthoset {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix3 embed_rotation(double angle) {
  Matrix3 w = Matrix3::Identity();
  w.bottomRightCorner<2, 2>() = rotation2(angle);
  return w;
}

void require_orthogonal(const Matrix3& o, const Tolerance& tol, const char* who) {
  if (unitarity_residual(o) > tol.eps_orth)
    throw std::invalid_argument(std::string(who) + ": input is not orthogonal");
}

std::vector<Matrix3> as_fixed(const OoSet& set) {
  std::vector<Matrix3> out;
  for (const auto& x : set.elements()) out.emplace_back(x);
  return out;
}

void require_verified_order3(const OoSet& set, std::size_t n, const Tolerance& tol,
                             const char* who) {
  if (set.size() != n || set.order() != 3)
    throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(n) +
                                " elements of order 3");
  if (!check_set(set, tol).pass)
    throw std::invalid_argument(std::string(who) + ": input is not a valid OO set");
}

// u * x0 * v = I and u * x1 * v = (-1)^a * O1.
struct PairFrame {
  Matrix3 u;
  Matrix3 v;
  int a = 0;
};

PairFrame pair_frame(const Matrix3& x0, const Matrix3& x1, const Tolerance& tol) {
  const QuasiDiagonal qd = quasi_diagonalize_traceless(x0.transpose() * x1, tol);
  return {qd.p * x0.transpose(), qd.p.transpose(), qd.a};
}

// Maximizes g(b) = sum_k <W(b) m_k W(b)^T, n_k> over the stabilizer
// W(b) = 1 (+) R_b of {I, O1}. g is a trigonometric polynomial of degree 2,
// so five samples determine it exactly.
double best_stabilizer_angle(const std::vector<Matrix3>& m, const std::vector<Matrix3>& n) {
  auto g = [&](double b) {
    const Matrix3 w = embed_rotation(b);
    double acc = 0;
    for (std::size_t k = 0; k < m.size(); ++k) acc += hs_inner(w * m[k] * w.transpose(), n[k]);
    return acc;
  };
  double c0 = 0, c1 = 0, s1 = 0, c2 = 0, s2 = 0;
  for (int j = 0; j < 5; ++j) {
    const double b = 2 * kPi * j / 5;
    const double v = g(b);
    c0 += v / 5;
    c1 += 2 * v * std::cos(b) / 5;
    s1 += 2 * v * std::sin(b) / 5;
    c2 += 2 * v * std::cos(2 * b) / 5;
    s2 += 2 * v * std::sin(2 * b) / 5;
  }
  auto poly = [&](double b) {
    return c0 + c1 * std::cos(b) + s1 * std::sin(b) + c2 * std::cos(2 * b) + s2 * std::sin(2 * b);
  };

  constexpr int kGrid = 10000;
  double best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kGrid; ++j) {
    const double b = 2 * kPi * j / kGrid;
    const double v = poly(b);
    if (v > best_val) {
      best_val = v;
      best = b;
    }
  }
  // Newton on g'(b) = 0.
  for (int it = 0; it < 60; ++it) {
    const double d1 = -c1 * std::sin(best) + s1 * std::cos(best) - 2 * c2 * std::sin(2 * best) +
                      2 * s2 * std::cos(2 * best);
    const double d2 = -c1 * std::cos(best) - s1 * std::sin(best) - 4 * c2 * std::cos(2 * best) -
                      4 * s2 * std::sin(2 * best);
    if (d2 >= 0) break;
    const double step = d1 / d2;
    best -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return best;
}

// Searches permutations and signs (s_0 = +1) for a witness mapping `m` onto
// `target`. Elements 0 and 1 fix the frame up to the one-parameter
// stabilizer, which is then aligned against the rest.
std::optional<Witness> align_to_target(const OoSet& set, const OoSet& target,
                                       const Tolerance& tol, double& residual) {
  const auto m = as_fixed(set);
  const auto n = as_fixed(target);
  const std::size_t count = m.size();
  const PairFrame fm = pair_frame(m[0], m[1], tol);
  std::vector<Matrix3> tm;
  for (std::size_t k = 2; k < count; ++k) tm.push_back(fm.u * m[k] * fm.v);

  std::optional<Witness> best;
  residual = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    for (unsigned mask = 0; mask < (1u << (count - 1)); ++mask) {
      std::vector<int> signs(count, 1);
      for (std::size_t k = 1; k < count; ++k)
        if (mask & (1u << (k - 1))) signs[k] = -1;

      const PairFrame fn = pair_frame(signs[0] * n[perm[0]], signs[1] * n[perm[1]], tol);
      if (fn.a != fm.a) continue;
      std::vector<Matrix3> tn;
      for (std::size_t k = 2; k < count; ++k) tn.push_back(fn.u * (signs[k] * n[perm[k]]) * fn.v);

      const double beta = tm.empty() ? 0.0 : best_stabilizer_angle(tm, tn);
      const Matrix3 w = embed_rotation(beta);
      Witness cand{RealMatrix(fn.u.transpose() * w * fm.u),
                   RealMatrix(fm.v * w.transpose() * fn.v.transpose()), signs, perm};
      const double r = witness_residual(set, target, cand);
      if (r < residual) {
        residual = r;
        best = std::move(cand);
      }
      if (residual <= 1e-12) return best;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

ClassificationReport finish(EquivalenceLabel label, const OoSet& set, const Tolerance& tol) {
  ClassificationReport report;
  report.label = label;
  double r = 0;
  auto w = align_to_target(set, canonical_target(label), tol, r);
  report.residual = r;
  if (w && r <= tol.eps_match) report.witness = std::move(w);
  return report;
}

std::vector<Eigen::Vector3d> make_signature(std::initializer_list<Eigen::Vector3d> xs) {
  return std::vector<Eigen::Vector3d>(xs);
}

}  // namespace

std::string_view to_string(EquivalenceLabel label) {
  switch (label) {
    case EquivalenceLabel::PAIR_CANONICAL: return "PAIR_CANONICAL";
    case EquivalenceLabel::CLASS_C: return "CLASS_C";
    case EquivalenceLabel::CLASS_D: return "CLASS_D";
    case EquivalenceLabel::CLASS_G4: return "CLASS_G4";
    case EquivalenceLabel::UNRECOGNIZED: return "UNRECOGNIZED";
  }
  return "?";
}

std::string_view to_string(InvariantVerdict verdict) {
  return verdict == InvariantVerdict::CONSISTENT ? "CONSISTENT" : "NOT_EQUIVALENT";
}

So2Factor so2_factor(const Matrix3& o, const Tolerance& tol) {
  require_orthogonal(o, tol, "so2_factor");
  So2Factor f;
  // Zero the (3,1) entry of (1 (+) R_alpha) O.
  f.alpha = std::atan2(-o(2, 0), o(1, 0));
  const Matrix3 left = embed_rotation(f.alpha) * o;
  // Zero the (3,2) entry; beta is kept in (-pi/2, pi/2] so the sign of the
  // corner is not absorbed into the rotation.
  double beta = std::atan2(-left(2, 1), left(2, 2));
  if (beta > kPi / 2) beta -= kPi;
  if (beta <= -kPi / 2) beta += kPi;
  f.beta = beta;
  const Matrix3 both = left * embed_rotation(beta);
  f.s = both(2, 2) >= 0 ? 1 : -1;
  f.r = both.topLeftCorner<2, 2>();
  return f;
}

QuasiDiagonal quasi_diagonalize_traceless(const Matrix3& q, const Tolerance& tol) {
  require_orthogonal(q, tol, "quasi_diagonalize_traceless");
  // A verified pair bounds |tr(O1^T O2)| by eps_orth * d.
  if (std::abs(q.trace()) > 3 * tol.eps_orth)
    throw std::invalid_argument("quasi_diagonalize_traceless: trace is not zero");

  QuasiDiagonal out;
  out.a = q.determinant() > 0 ? 0 : 1;
  const Matrix3 rot = out.a ? Matrix3(-q) : q;
  // rot is a rotation by 2pi/3; its skew part is sin(2pi/3) [n]_x.
  const Matrix3 k = (rot - rot.transpose()) / 2;
  Eigen::Vector3d axis(k(2, 1), k(0, 2), k(1, 0));
  axis.normalize();

  Index pick = 0;
  axis.cwiseAbs().minCoeff(&pick);
  Eigen::Vector3d u = Eigen::Vector3d::Unit(pick) - axis(pick) * axis;
  u.normalize();
  const Eigen::Vector3d v = axis.cross(u);
  out.p.row(0) = axis.transpose();
  out.p.row(1) = u.transpose();
  out.p.row(2) = v.transpose();
  return out;
}

OoSet canonical_target(EquivalenceLabel label) {
  switch (label) {
    case EquivalenceLabel::PAIR_CANONICAL: {
      OoSet s({RealMatrix::Identity(3, 3), RealMatrix(canonical::omega1())});
      verify_set(s);
      return s;
    }
    case EquivalenceLabel::CLASS_C: return canonical_set(CanonicalSetName::C);
    case EquivalenceLabel::CLASS_D: return canonical_set(CanonicalSetName::D);
    case EquivalenceLabel::CLASS_G4: return canonical_set(CanonicalSetName::G4SET);
    case EquivalenceLabel::UNRECOGNIZED: break;
  }
  throw std::invalid_argument("canonical_target: no target for UNRECOGNIZED");
}

double witness_residual(const OoSet& set, const OoSet& target, const Witness& w) {
  if (set.size() != target.size() || w.signs.size() != set.size() || w.perm.size() != set.size())
    throw std::invalid_argument("witness_residual: length mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    worst = std::max(worst, (w.u * set[i] * w.v - w.signs[i] * target[w.perm[i]]).norm());
  return worst;
}

ClassificationReport canonicalize_pair(const OoSet& set, const Tolerance& tol) {
  require_verified_order3(set, 2, tol, "canonicalize_pair");
  const Matrix3 o1 = set[0];
  const Matrix3 o2 = set[1];
  const QuasiDiagonal qd = quasi_diagonalize_traceless(o1.transpose() * o2, tol);
  Witness w{RealMatrix(qd.p * o1.transpose()), RealMatrix(qd.p.transpose()),
            {1, qd.a ? -1 : 1}, {0, 1}};
  ClassificationReport report;
  report.label = EquivalenceLabel::PAIR_CANONICAL;
  report.residual = witness_residual(set, canonical_target(report.label), w);
  report.witness = std::move(w);
  return report;
}

std::vector<Eigen::Vector3d> signed_sum_signature(const OoSet& set) {
  if (set.empty() || set.order() != 3)
    throw std::invalid_argument("signed_sum_signature: expected order-3 elements");
  const std::size_t n = set.size();
  std::vector<Eigen::Vector3d> out;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    RealMatrix sum = set[0];
    for (std::size_t k = 1; k < n; ++k) {
      // Bit for element 1 is the most significant so patterns enumerate
      // (s_1, ..., s_{n-1}) in lexicographic + before - order.
      const bool neg = mask & (1u << (n - 1 - k));
      sum += neg ? RealMatrix(-set[k]) : set[k];
    }
    out.emplace_back(singular_values(sum));
  }
  return out;
}

const std::vector<Eigen::Vector3d>& reference_signature(EquivalenceLabel label) {
  // C: I + O1 + O1^T = diag(3, 0, 0); the other three patterns are (2, 2, 1).
  static const auto kC = make_signature(
      {{3, 0, 0}, {2, 2, 1}, {2, 2, 1}, {2, 2, 1}});
  // D: (2, 2, 1) for all-plus, ((1 + sqrt17) / 2, (sqrt17 - 1) / 2, 0) otherwise.
  static const double r17 = std::sqrt(17.0);
  static const auto kD = make_signature({{2, 2, 1},
                                         {(1 + r17) / 2, (r17 - 1) / 2, 0},
                                         {(1 + r17) / 2, (r17 - 1) / 2, 0},
                                         {(1 + r17) / 2, (r17 - 1) / 2, 0}});
  switch (label) {
    case EquivalenceLabel::CLASS_C: return kC;
    case EquivalenceLabel::CLASS_D: return kD;
    default: break;
  }
  throw std::invalid_argument("reference_signature: only CLASS_C and CLASS_D carry signatures");
}

double signature_distance(const std::vector<Eigen::Vector3d>& a,
                          const std::vector<Eigen::Vector3d>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, (a[i] - b[perm[i]]).cwiseAbs().maxCoeff());
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

ClassificationReport classify_triple(const OoSet& set, const Tolerance& tol) {
  require_verified_order3(set, 3, tol, "classify_triple");
  const auto sig = signed_sum_signature(set);
  const double dc = signature_distance(sig, reference_signature(EquivalenceLabel::CLASS_C));
  const double dd = signature_distance(sig, reference_signature(EquivalenceLabel::CLASS_D));
  if (std::min(dc, dd) > tol.eps_feas) {
    ClassificationReport report;
    report.residual = std::min(dc, dd);
    return report;
  }
  return finish(dc <= dd ? EquivalenceLabel::CLASS_C : EquivalenceLabel::CLASS_D, set, tol);
}

ClassificationReport classify_quad(const OoSet& set, const Tolerance& tol) {
  require_verified_order3(set, 4, tol, "classify_quad");
  OoSet head({set[0], set[1], set[2]});
  const ClassificationReport first = classify_triple(head, tol);
  if (first.label == EquivalenceLabel::CLASS_C)
    throw std::invalid_argument(
        "classify_quad: first three elements are in class C, which admits no fourth element");
  if (first.label != EquivalenceLabel::CLASS_D) return first;
  return finish(EquivalenceLabel::CLASS_G4, set, tol);
}

std::mt19937_64 start_rng(std::uint64_t seed, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start)};
  return std::mt19937_64(seq);
}

namespace {

// Levenberg-Marquardt on r_i(O exp(K)) = tr(O^T S_i) with K skew.
struct LocalResult {
  RealMatrix o;
  double f = 0;
};

LocalResult extend_from(RealMatrix o, const std::vector<RealMatrix>& s) {
  const Index d = o.rows();
  const Index p = d * (d - 1) / 2;
  const Index n = static_cast<Index>(s.size());
  auto residuals = [&](const RealMatrix& x) {
    RealVector r(n);
    for (Index i = 0; i < n; ++i) r(i) = hs_inner(x, s[static_cast<std::size_t>(i)]);
    return r;
  };

  RealVector r = residuals(o);
  double f = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  for (int it = 0; it < 300 && !converged && f > 1e-30; ++it) {
    RealMatrix jac(n, p);
    for (Index i = 0; i < n; ++i) {
      const RealMatrix& si = s[static_cast<std::size_t>(i)];
      Index k = 0;
      for (Index a = 0; a < d; ++a)
        for (Index b = a + 1; b < d; ++b, ++k)
          jac(i, k) = o.col(a).dot(si.col(b)) - o.col(b).dot(si.col(a));
    }
    const RealVector grad = jac.transpose() * r;
    if (grad.norm() < 1e-15) break;
    const RealMatrix normal = jac.transpose() * jac;

    bool accepted = false;
    while (!accepted && lambda < 1e12) {
      const RealMatrix damped = normal + lambda * RealMatrix::Identity(p, p);
      const RealVector delta = -damped.ldlt().solve(grad);
      RealMatrix k = RealMatrix::Zero(d, d);
      Index idx = 0;
      for (Index a = 0; a < d; ++a)
        for (Index b = a + 1; b < d; ++b, ++idx) {
          k(a, b) = delta(idx);
          k(b, a) = -delta(idx);
        }
      RealMatrix cand = o * k.exp();
      const RealVector rc = residuals(cand);
      const double fc = rc.squaredNorm();
      if (fc < f) {
        converged = delta.norm() < 1e-15 || f - fc < 1e-30;
        o = std::move(cand);
        r = rc;
        f = fc;
        lambda = std::max(lambda / 3, 1e-12);
        accepted = true;
      } else {
        lambda *= 4;
      }
    }
    if (!accepted) break;
  }
  // exp(K) keeps o orthogonal up to rounding; polar projection removes the
  // accumulated drift.
  const auto f_svd = svd(o);
  o = f_svd.U * f_svd.V.transpose();
  return {o, residuals(o).squaredNorm()};
}

}  // namespace

ExtensionResult extend_set(const OoSet& set, const SearchOptions& options, const Tolerance& tol) {
  if (set.empty()) throw std::invalid_argument("extend_set: empty set");
  if (!check_set(set, tol).pass) throw std::invalid_argument("extend_set: input is not a valid OO set");
  if (options.starts < 1) throw std::invalid_argument("extend_set: starts must be >= 1");

  const Index d = set.order();
  ExtensionResult out;
  out.starts = options.starts;
  out.objective = std::numeric_limits<double>::infinity();
  for (int start = 0; start < options.starts; ++start) {
    auto rng = start_rng(options.seed, start);
    RealMatrix o0 = random_orthogonal(d, rng, start % 2 == 0 ? 1 : -1);
    LocalResult local = extend_from(std::move(o0), set.elements());
    if (local.f < out.objective) {
      out.objective = local.f;
      out.best = std::move(local.o);
      out.best_start = start;
    }
  }
  out.max_inner = 0;
  for (const auto& x : set.elements())
    out.max_inner = std::max(out.max_inner, std::abs(hs_inner(out.best, x)));
  if (out.max_inner <= tol.eps_feas && unitarity_residual(out.best) <= tol.eps_orth)
    out.found = out.best;
  return out;
}

InvariantVerdict invariant_check(const OoSet& a, const OoSet& b, int trials, std::uint64_t seed,
                                 const Tolerance& tol) {
  if (a.size() != b.size() || a.order() != b.order())
    throw std::invalid_argument("invariant_check: sets differ in length or order");
  if (a.size() > 8) throw std::invalid_argument("invariant_check: at most 8 elements supported");
  if (!check_set(a, tol).pass || !check_set(b, tol).pass)
    throw std::invalid_argument("invariant_check: inputs must be valid OO sets");

  const std::size_t n = a.size();
  std::mt19937_64 rng = start_rng(seed, 0);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    RealVector k = RealVector::Ones(static_cast<Index>(n));
    if (t > 0)
      for (Index i = 0; i < k.size(); ++i) k(i) = gauss(rng);

    RealMatrix sa = RealMatrix::Zero(a.order(), a.order());
    for (std::size_t i = 0; i < n; ++i) sa += k(static_cast<Index>(i)) * a[i];
    const RealVector target = singular_values(sa);
    const double bound = tol.eps_feas * (1 + target.maxCoeff());

    bool matched = false;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      for (unsigned mask = 0; mask < (1u << (n - 1)) && !matched; ++mask) {
        RealMatrix sb = k(0) * b[perm[0]];
        for (std::size_t i = 1; i < n; ++i) {
          const double sign = (mask & (1u << (i - 1))) ? -1.0 : 1.0;
          sb += sign * k(static_cast<Index>(i)) * b[perm[i]];
        }
        matched = (singular_values(sb) - target).cwiseAbs().maxCoeff() <= bound;
      }
    } while (!matched && std::next_permutation(perm.begin(), perm.end()));
    if (!matched) return InvariantVerdict::NOT_EQUIVALENT;
  }
  return InvariantVerdict::CONSISTENT;
}

}  // namespace orthoset
