#include "orthoset/decompose.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace orthoset {
namespace {

constexpr double kPi = std::numbers::pi;

void require_order3(const RealMatrix& m, const char* who) {
  if (m.rows() != 3 || m.cols() != 3)
    throw std::invalid_argument(std::string(who) + ": expected a 3x3 matrix");
}

// M = u * diag(sigma) * v^T with the singular triple permuted by `order`.
struct Frame {
  Matrix3 u;
  Matrix3 v;
  Eigen::Vector3d sigma;
};

Frame frame_of(const Svd<double>& f, const std::array<int, 3>& order) {
  Frame out;
  for (int k = 0; k < 3; ++k) {
    out.u.col(k) = f.U.col(order[k]);
    out.v.col(k) = f.V.col(order[k]);
    out.sigma(k) = f.sigma(order[k]);
  }
  return out;
}

bool tied(double a, double b, double scale, const Tolerance& tol) {
  return std::abs(a - b) <= tol.eps_feas * std::max(1.0, scale);
}

template <typename Scalar>
Decomposition<Scalar> assemble(std::vector<Mat<Scalar>> basis, Vec<Scalar> coeffs,
                               const Mat<Scalar>& m, const Tolerance& tol) {
  Decomposition<Scalar> out{MatrixSet<Scalar>(std::move(basis)), std::move(coeffs), 0};
  verify_set(out.basis, tol);
  out.residual = (m - out.reconstruct()).norm();
  return out;
}

Matrix3 model_transport(const Frame& f, const Matrix3& x) { return f.u * x * f.v.transpose(); }

// Roots of t^3 + b t^2 + c t + d assumed all real, in nonincreasing order.
// A near-repeated pair is recovered from the critical point of the cubic
// rather than from the trigonometric formula, which loses half the digits
// there.
std::array<double, 3> real_cubic_roots(double b, double c, double d) {
  const double p = c - b * b / 3;
  const double q = 2 * b * b * b / 27 - b * c / 3 + d;
  std::array<double, 3> roots{};
  if (p >= 0) {
    const double u = std::cbrt(-q);
    roots = {u - b / 3, u - b / 3, u - b / 3};
  } else {
    const double m = 2 * std::sqrt(-p / 3);
    const double arg = std::clamp(3 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3;
    for (int k = 0; k < 3; ++k) roots[k] = m * std::cos(theta - 2 * kPi * k / 3) - b / 3;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());

  auto poly = [&](double t) { return ((t + b) * t + c) * t + d; };
  auto dpoly = [&](double t) { return (3 * t + 2 * b) * t + c; };
  const double scale = 1 + std::abs(roots[0]) + std::abs(roots[2]);
  for (int k = 0; k < 2; ++k) {
    if (roots[k] - roots[k + 1] > 1e-4 * scale) continue;
    // Critical point between the pair, then the local quadratic model.
    const double disc = std::max(0.0, b * b - 3 * c);
    const double c1 = (-b + std::sqrt(disc)) / 3;
    const double c2 = (-b - std::sqrt(disc)) / 3;
    const double mid = (roots[k] + roots[k + 1]) / 2;
    const double crit = std::abs(c1 - mid) < std::abs(c2 - mid) ? c1 : c2;
    const double curv = 6 * crit + 2 * b;
    double delta = 0;
    if (curv != 0) delta = std::sqrt(std::max(0.0, -2 * poly(crit) / curv));
    roots[k] = crit + delta;
    roots[k + 1] = crit - delta;
    roots[2 - 2 * k] = -b - roots[k] - roots[k + 1];
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
  }
  for (double& r : roots) {
    for (int it = 0; it < 4; ++it) {
      const double dp = dpoly(r);
      if (dp == 0) break;
      r -= poly(r) / dp;
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

}  // namespace

SingularTriple SingularTriple::sorted(double a, double b, double c) {
  std::array<double, 3> v{a, b, c};
  std::sort(v.begin(), v.end(), std::greater<>());
  return {v[0], v[1], v[2]};
}

SingularTriple SingularTriple::of(const RealMatrix& m) {
  require_order3(m, "SingularTriple::of");
  const RealVector s = singular_values(m);
  return {s(0), s(1), s(2)};
}

Matrix3 symmetric_model(const CoeffVector3& l) {
  return l[0] * canonical::g1() + l[1] * canonical::g2() + l[2] * canonical::g3();
}

Matrix3 quad_model(const CoeffVector4& l) {
  return l[0] * canonical::g1() + l[1] * canonical::g2() + l[2] * canonical::g3() +
         l[3] * canonical::g4();
}

// ---------------------------------------------------------------------------

OuDecomposition ou_decompose(const ComplexMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("ou_decompose: expected a nonempty square matrix");
  const Index d = m.rows();
  const Svd<Complex> f = svd(m);
  const double w = 2 * kPi / static_cast<double>(d);

  std::vector<ComplexMatrix> basis;
  ComplexVector coeffs(d);
  for (Index k = 0; k < d; ++k) {
    ComplexVector z(d);
    Complex c = 0;
    for (Index j = 0; j < d; ++j) {
      const double phase = w * static_cast<double>((j * k) % d);
      z(j) = std::polar(1.0, phase);
      c += f.sigma(j) * std::conj(z(j));
    }
    coeffs(k) = c / static_cast<double>(d);
    basis.push_back(f.U * z.asDiagonal() * f.V.adjoint());
  }
  return assemble(std::move(basis), std::move(coeffs), m, tol);
}

RealMatrix ou_lower_bound_witness(int d) {
  if (d < 2) throw std::invalid_argument("ou_lower_bound_witness: d must be >= 2");
  RealMatrix m = RealMatrix::Zero(d, d);
  m(0, 0) = 1;
  return m;
}

// ---------------------------------------------------------------------------

Oo2Feasibility oo2_feasible(const SingularTriple& t, const Tolerance& tol) {
  Oo2Feasibility out;
  const double slack = tol.eps_feas * std::max(1.0, t.x);
  if (tied(t.x, t.y, t.x, tol)) {
    out.doubled = (t.x + t.y) / 2;
    out.odd = t.z;
  } else if (tied(t.y, t.z, t.x, tol)) {
    out.doubled = (t.y + t.z) / 2;
    out.odd = t.x;
  } else {
    return out;
  }
  out.feasible = out.odd <= 2 * out.doubled + slack;
  return out;
}

Oo2Model oo2_model(double x, double y) {
  if (x <= 0) throw std::invalid_argument("oo2_model: x must be positive");
  const double r = std::sqrt(std::max(0.0, 12 * x * x - 3 * y * y));
  const double q = std::sqrt(std::max(0.0, 4 * x * x - y * y));
  const double s3 = std::sqrt(3.0);
  Oo2Model out;
  out.k1 = (3 * y + r) / 6;
  out.k2 = (-3 * y + r) / 6;
  out.first << (y + r) / (4 * x), (-s3 * y + q) / (4 * x), 0,
               (s3 * y - q) / (4 * x), (y + r) / (4 * x), 0,
               0, 0, 1;
  out.second << (-y + r) / (4 * x), -(s3 * y + q) / (4 * x), 0,
                (s3 * y + q) / (4 * x), (-y + r) / (4 * x), 0,
                0, 0, -1;
  return out;
}

OoDecomposition oo2_decompose(const RealMatrix& m, const Tolerance& tol) {
  require_order3(m, "oo2_decompose");
  const Svd<double> f = svd(m);
  const SingularTriple t{f.sigma(0), f.sigma(1), f.sigma(2)};
  const Oo2Feasibility feas = oo2_feasible(t, tol);
  if (!feas.feasible) throw InfeasibleError("oo2_decompose: singular values admit no 2-OO decomposition");

  if (feas.doubled <= tol.eps_orth) {
    return assemble<double>({RealMatrix::Identity(3, 3), RealMatrix(canonical::omega1())},
                            RealVector::Zero(2), m, tol);
  }
  // Doubled value in positions 0 and 1, the odd one last.
  const std::array<int, 3> order =
      tied(t.x, t.y, t.x, tol) ? std::array<int, 3>{0, 1, 2} : std::array<int, 3>{1, 2, 0};
  const Frame fr = frame_of(f, order);
  const Oo2Model model = oo2_model(feas.doubled, feas.odd);
  RealVector coeffs(2);
  coeffs << model.k1, model.k2;
  return assemble<double>({RealMatrix(model_transport(fr, model.first)),
                           RealMatrix(model_transport(fr, model.second))},
                          std::move(coeffs), m, tol);
}

// ---------------------------------------------------------------------------

Oo3Feasibility oo3_feasible(const SingularTriple& t, const Tolerance& tol) {
  Oo3Feasibility out;
  out.equal_pair = tied(t.x, t.y, t.x, tol) || tied(t.y, t.z, t.x, tol);
  const double scale = std::max({std::abs(t.x), std::abs(t.y), std::abs(t.z)});
  if (scale == 0) {
    out.feasible = true;
    out.witness = Oo3Candidate{};
    out.candidates.push_back(*out.witness);
    return out;
  }

  for (int mask = 0; mask < 8; ++mask) {
    Oo3Candidate cand;
    for (int i = 0; i < 3; ++i) cand.signs[i] = (mask >> (2 - i)) & 1 ? -1 : 1;
    // Work on the triple scaled to unit maximum; the system is homogeneous.
    const double xs = cand.signs[0] * t.x / scale;
    const double ys = cand.signs[1] * t.y / scale;
    const double zs = cand.signs[2] * t.z / scale;
    const double e1 = xs + ys + zs;
    const double f2 = xs * ys + xs * zs + ys * zs;
    const double f3 = xs * ys * zs;
    const double e2 = (f2 + e1 * e1) / 3;
    const double e3 = (-f3 - e1 * e1 * e1 + 3 * e1 * e2) / 4;
    // l1, l2, l3 are the roots of t^3 - e1 t^2 + e2 t - e3.
    const double b = -e1, c = e2, d = -e3;
    const double disc = 18 * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * c * c * c - 27 * d * d;
    out.discriminants[static_cast<std::size_t>(mask)] = disc;
    cand.discriminant = disc;
    if (disc < kDiscriminantFloor) continue;
    const auto roots = real_cubic_roots(b, c, d);
    for (int i = 0; i < 3; ++i) cand.l[i] = roots[i] * scale;
    out.candidates.push_back(cand);
  }
  if (!out.candidates.empty()) out.witness = out.candidates.front();
  out.feasible = out.equal_pair || out.witness.has_value();
  return out;
}

OoDecomposition oo3_decompose(const RealMatrix& m, const Tolerance& tol) {
  require_order3(m, "oo3_decompose");
  const Svd<double> f = svd(m);
  const SingularTriple t{f.sigma(0), f.sigma(1), f.sigma(2)};
  const Oo3Feasibility feas = oo3_feasible(t, tol);
  if (!feas.feasible) throw InfeasibleError("oo3_decompose: singular values admit no 3-OO decomposition");

  if (feas.equal_pair) {
    // U * diag(y, x, x) * V^T = U ((y + 2x)/3 I + (y - x)/3 (O1 + O1^T)) V^T.
    const bool head_pair = tied(t.x, t.y, t.x, tol);
    const std::array<int, 3> order = head_pair ? std::array<int, 3>{2, 0, 1} : std::array<int, 3>{0, 1, 2};
    const Frame fr = frame_of(f, order);
    const double y = fr.sigma(0);
    const double x = (fr.sigma(1) + fr.sigma(2)) / 2;
    const Matrix3 o1 = canonical::omega1();
    RealVector coeffs(3);
    coeffs << (y + 2 * x) / 3, (y - x) / 3, (y - x) / 3;
    return assemble<double>({RealMatrix(model_transport(fr, Matrix3::Identity())),
                             RealMatrix(model_transport(fr, o1)),
                             RealMatrix(model_transport(fr, o1.transpose()))},
                            std::move(coeffs), m, tol);
  }

  const CoeffVector3 l = feas.witness->l;
  const Matrix3 model = symmetric_model(l);
  const Svd<double> fm = svd(model);
  if ((fm.sigma - f.sigma).cwiseAbs().maxCoeff() > tol.eps_feas * (1 + t.x))
    throw std::logic_error("oo3_decompose: cubic witness does not reproduce the singular values");
  // M = (U1 U2^T) L (V2 V1^T).
  const RealMatrix left = f.U * fm.U.transpose();
  const RealMatrix right = fm.V * f.V.transpose();
  RealVector coeffs(3);
  coeffs << l[0], l[1], l[2];
  return assemble<double>({RealMatrix(left * canonical::g1() * right),
                           RealMatrix(left * canonical::g2() * right),
                           RealMatrix(left * canonical::g3() * right)},
                          std::move(coeffs), m, tol);
}

// ---------------------------------------------------------------------------

double oo4_mismatch(const CoeffVector4& l, const SingularTriple& t) {
  return (singular_values(quad_model(l)) - t.vector()).norm();
}

namespace {

struct Oo4Local {
  Eigen::Vector4d l;
  double mismatch = 0;
};

// Levenberg-Marquardt on sigma(S(l)) - t restricted to the sphere
// |l|^2 = (x^2 + y^2 + z^2) / 3, with steps projected onto the tangent space.
Oo4Local oo4_local(Eigen::Vector4d l, const SingularTriple& t, double radius) {
  const std::array<Matrix3, 4> g{canonical::g1(), canonical::g2(), canonical::g3(), canonical::g4()};
  const Eigen::Vector3d target = t.vector();
  auto model = [&](const Eigen::Vector4d& v) {
    return quad_model({v(0), v(1), v(2), v(3)});
  };

  Svd<double> f = svd(model(l));
  Eigen::Vector3d r = f.sigma - target;
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const double stop = 1e-30 * (1 + target.squaredNorm());
  for (int it = 0; it < 200 && cost > stop; ++it) {
    Eigen::Matrix<double, 3, 4> jac;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k)
        jac(i, k) = f.U.col(i).dot(g[static_cast<std::size_t>(k)] * f.V.col(i));
    const Eigen::Matrix4d tangent = Eigen::Matrix4d::Identity() - l * l.transpose() / l.squaredNorm();
    jac = jac * tangent;
    const Eigen::Vector4d grad = jac.transpose() * r;
    if (grad.norm() < 1e-16 * (1 + radius)) break;
    const Eigen::Matrix4d normal = jac.transpose() * jac;

    bool accepted = false;
    bool converged = false;
    while (!accepted && lambda < 1e12) {
      const Eigen::Vector4d step = -(normal + lambda * Eigen::Matrix4d::Identity()).ldlt().solve(grad);
      Eigen::Vector4d cand = l + step;
      cand *= radius / cand.norm();
      Svd<double> fc = svd(model(cand));
      const Eigen::Vector3d rc = fc.sigma - target;
      const double cc = rc.squaredNorm();
      if (cc < cost) {
        converged = step.norm() < 1e-16 * (1 + radius) || cost - cc < 1e-32;
        l = cand;
        f = std::move(fc);
        r = rc;
        cost = cc;
        lambda = std::max(lambda / 3, 1e-12);
        accepted = true;
      } else {
        lambda *= 4;
      }
    }
    if (!accepted || converged) break;
  }
  return {l, std::sqrt(cost)};
}

bool is_reference_infeasible(const SingularTriple& t, const Tolerance& tol) {
  if (t.x <= 0) return false;
  const Eigen::Vector3d normalized = t.vector() / t.x;
  const Eigen::Vector3d fixture(1, 1 / std::sqrt(8.0), 0);
  return (normalized - fixture).cwiseAbs().maxCoeff() <= tol.eps_match;
}

}  // namespace

Oo4Feasibility oo4_feasible(const SingularTriple& t, const SearchOptions& options, const Tolerance& tol) {
  if (options.starts < 1) throw std::invalid_argument("oo4_feasible: starts must be >= 1");
  Oo4Feasibility out;
  out.starts = options.starts;
  // Pairwise orthogonality of G1..G4 gives ||S||_F^2 = 3 |l|^2.
  const double radius = std::sqrt((t.x * t.x + t.y * t.y + t.z * t.z) / 3);
  if (radius == 0) {
    out.feasible = true;
    out.witness = CoeffVector4{};
    out.best_start = 0;
    return out;
  }

  out.mismatch = std::numeric_limits<double>::infinity();
  std::normal_distribution<double> gauss;
  for (int start = 0; start < options.starts; ++start) {
    auto rng = start_rng(options.seed, start);
    Eigen::Vector4d l;
    for (int k = 0; k < 4; ++k) l(k) = gauss(rng);
    l *= radius / l.norm();
    const Oo4Local local = oo4_local(l, t, radius);
    if (local.mismatch < out.mismatch) {
      out.mismatch = local.mismatch;
      out.best = {local.l(0), local.l(1), local.l(2), local.l(3)};
      out.best_start = start;
    }
  }
  out.feasible = out.mismatch <= tol.eps_feas;
  if (out.feasible)
    out.witness = out.best;
  else if (is_reference_infeasible(t, tol))
    out.evidence = Oo4Evidence::REFERENCE_FIXTURE;
  return out;
}

OoDecomposition oo4_decompose(const RealMatrix& m, const SearchOptions& options, const Tolerance& tol) {
  require_order3(m, "oo4_decompose");
  const Svd<double> f = svd(m);
  const SingularTriple t{f.sigma(0), f.sigma(1), f.sigma(2)};
  const Oo4Feasibility feas = oo4_feasible(t, options, tol);
  if (!feas.feasible)
    throw InfeasibleError("oo4_decompose: no 4-OO decomposition found", feas.mismatch);

  const CoeffVector4 l = *feas.witness;
  const Svd<double> fm = svd(quad_model(l));
  const RealMatrix left = f.U * fm.U.transpose();
  const RealMatrix right = fm.V * f.V.transpose();
  RealVector coeffs(4);
  coeffs << l[0], l[1], l[2], l[3];
  return assemble<double>({RealMatrix(left * canonical::g1() * right),
                           RealMatrix(left * canonical::g2() * right),
                           RealMatrix(left * canonical::g3() * right),
                           RealMatrix(left * canonical::g4() * right)},
                          std::move(coeffs), m, tol);
}

// ---------------------------------------------------------------------------

WeakDecomposition weak_decompose_a(const RealMatrix& m) {
  require_order3(m, "weak_decompose_a");
  // Ascending a <= b <= c.
  const Frame fr = frame_of(svd(m), {2, 1, 0});
  const double a = fr.sigma(0), b = fr.sigma(1), c = fr.sigma(2);
  const Matrix3 flip = Eigen::Vector3d(1, -1, 1).asDiagonal();
  const double shift = (b - c) / 2;

  WeakDecomposition out;
  const double x = (b + c) / 2;
  const double y = a + shift;
  if (x <= 0) {
    out.matrices = {RealMatrix(model_transport(fr, Matrix3::Identity())),
                    RealMatrix(model_transport(fr, canonical::omega1())),
                    RealMatrix(model_transport(fr, flip))};
  } else {
    // diag(y, x, x) is the 2-OO model with its odd entry moved to the front.
    const Oo2Model model = oo2_model(x, y);
    Matrix3 perm = Matrix3::Zero();
    const std::array<int, 3> idx{2, 0, 1};
    for (int i = 0; i < 3; ++i) perm(i, idx[static_cast<std::size_t>(i)]) = 1;
    out.matrices = {RealMatrix(model_transport(fr, perm * model.first * perm.transpose())),
                    RealMatrix(model_transport(fr, perm * model.second * perm.transpose())),
                    RealMatrix(model_transport(fr, flip))};
    out.coeffs << model.k1, model.k2, -shift;
  }
  out.residual =
      (m - (out.coeffs(0) * out.matrices[0] + out.coeffs(1) * out.matrices[1] + out.coeffs(2) * out.matrices[2]))
          .norm();
  out.orthogonality_residual = std::abs(hs_inner(out.matrices[0], out.matrices[1]));
  return out;
}

WeakDecomposition weak_decompose_b(const RealMatrix& m) {
  require_order3(m, "weak_decompose_b");
  const Frame fr = frame_of(svd(m), {2, 1, 0});
  const double a = fr.sigma(0), b = fr.sigma(1), c = fr.sigma(2);
  const double h = std::sqrt(3.0) / 2;
  Matrix3 plus, minus;
  plus << 0.5, -h, 0,
          h, 0.5, 0,
          0, 0, -1;
  minus << 0.5, h, 0,
           -h, 0.5, 0,
           0, 0, -1;
  const Matrix3 rest =
      Eigen::Vector3d((5 * a - b + 2 * c) / 6, (-a + 5 * b + 2 * c) / 6, (a + b + c) / 3).asDiagonal();

  WeakDecomposition out;
  out.matrices = {RealMatrix(model_transport(fr, plus)), RealMatrix(model_transport(fr, minus)),
                  RealMatrix(model_transport(fr, rest))};
  const double k = (a + b - 2 * c) / 6;
  out.coeffs << k, k, 1;
  out.residual =
      (m - (out.coeffs(0) * out.matrices[0] + out.coeffs(1) * out.matrices[1] + out.coeffs(2) * out.matrices[2]))
          .norm();
  out.orthogonality_residual = std::max({std::abs(hs_inner(out.matrices[0], out.matrices[1])),
                                         std::abs(hs_inner(out.matrices[0], out.matrices[2])),
                                         std::abs(hs_inner(out.matrices[1], out.matrices[2]))});
  return out;
}

}  // namespace orthoset
