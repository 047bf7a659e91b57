#ifndef PCM_REFINEMENT_HPP
#define PCM_REFINEMENT_HPP

#include "pcm/geometry.hpp"
#include "pcm/membership.hpp"
#include "pcm/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pcm {

/// Lagrange multipliers and residuals witnessing that a refined position is
/// the global minimizer of the agent's relocation sub-problem.
template <typename Scalar>
struct KktCertificate {
  Vector<Scalar> lambda;          // one per PoI, zero off the active set
  std::vector<Index> active;      // PoI indices whose ball boundary holds x*
  Scalar mu_bar = Scalar(1);      // weight of the centroid in x* = mu_bar*xhat + sum mu_i p_i
  Vector<Scalar> mu;              // weights of the active PoIs, aligned with `active`
  Scalar u_hat = Scalar(0);       // sum_i u_i^m
  Scalar stationarity_residual = Scalar(0);
  Scalar max_feasibility_violation = Scalar(0);
  Scalar max_complementarity_violation = Scalar(0);
  bool slater_degenerate = false;  // admissible set has empty interior; no multipliers claimed
};

struct KktCheck {
  bool feasible = false;
  bool nonnegative = false;
  bool complementary = false;
  bool stationary = false;
  double feasibility_violation = 0;
  double min_lambda = 0;
  double complementarity_violation = 0;
  double stationarity_residual = 0;

  bool ok() const { return feasible && nonnegative && complementary && stationary; }
  explicit operator bool() const { return ok(); }
};

template <typename Scalar>
struct RefinementResult {
  Point<Scalar> position;
  Point<Scalar> centroid;
  KktCertificate<Scalar> certificate;
};

template <typename Scalar>
Point<Scalar> weighted_centroid(const PointSet<Scalar>& pois, const Vector<Scalar>& memberships, int m) {
  if (memberships.size() != pois.rows()) throw DimensionMismatch("membership column and PoI count differ");
  Point<Scalar> sum = Point<Scalar>::Zero(pois.cols());
  Scalar mass(0);
  for (Index i = 0; i < pois.rows(); ++i) {
    if (memberships(i) == Scalar(0)) continue;
    const Scalar w = ipow(memberships(i), m);
    sum += w * pois.row(i).transpose();
    mass += w;
  }
  if (!(mass > Scalar(0))) throw ZeroMass("agent has no positive membership");
  return sum / mass;
}

/// Radius of the smallest ball enclosing the given points (Welzl, d <= 3).
template <typename Scalar>
Scalar min_enclosing_radius(const PointSet<Scalar>& points) {
  const Index n = points.rows();
  const Index d = points.cols();
  if (n == 0) return Scalar(0);

  auto circumball = [&](const std::vector<Index>& boundary, Point<Scalar>& center) -> Scalar {
    if (boundary.empty()) {
      center = Point<Scalar>::Zero(d);
      return Scalar(-1);
    }
    const Point<Scalar> p0 = points.row(boundary[0]).transpose();
    const Index k = static_cast<Index>(boundary.size()) - 1;
    if (k == 0) {
      center = p0;
      return Scalar(0);
    }
    Matrix<Scalar> A(k, d);
    for (Index a = 0; a < k; ++a) A.row(a) = points.row(boundary[a + 1]) - p0.transpose();
    const Matrix<Scalar> gram = A * A.transpose();
    const Vector<Scalar> rhs = Scalar(0.5) * gram.diagonal();
    const Vector<Scalar> coeff = gram.completeOrthogonalDecomposition().solve(rhs);
    center = p0 + A.transpose() * coeff;
    Scalar rad(0);
    for (Index b : boundary) rad = std::max(rad, (points.row(b).transpose() - center).norm());
    return rad;
  };

  const Scalar slack = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  auto welzl = [&](auto&& self, Index count, std::vector<Index>& boundary, Point<Scalar>& center) -> Scalar {
    if (count == 0 || static_cast<Index>(boundary.size()) == d + 1) return circumball(boundary, center);
    const Index p = count - 1;
    Scalar rad = self(self, count - 1, boundary, center);
    if (rad >= Scalar(0) && (points.row(p).transpose() - center).norm() <= rad * (Scalar(1) + slack) + slack)
      return rad;
    boundary.push_back(p);
    rad = self(self, count - 1, boundary, center);
    boundary.pop_back();
    return rad;
  };

  std::vector<Index> boundary;
  Point<Scalar> center(d);
  return welzl(welzl, n, boundary, center);
}

/// Checks the optimality conditions of a refined position:
/// (a) x* in every support ball, (b) lambda >= 0, (c) complementary
/// slackness, and stationarity of the Lagrangian.
template <typename Scalar>
KktCheck verify_kkt(const PointSet<Scalar>& pois, const Vector<Scalar>& memberships, int m, Scalar rho,
                    const Point<Scalar>& x_star, const KktCertificate<Scalar>& cert) {
  if (memberships.size() != pois.rows() || cert.lambda.size() != pois.rows() || x_star.size() != pois.cols())
    throw DimensionMismatch("inconsistent shapes in KKT check");
  KktCheck check;
  Scalar feas(0), comp(0);
  Scalar min_lambda = cert.lambda.size() ? cert.lambda.minCoeff() : Scalar(0);
  Point<Scalar> grad = Point<Scalar>::Zero(pois.cols());
  const bool bounded = std::isfinite(static_cast<double>(rho));
  for (Index i = 0; i < pois.rows(); ++i) {
    const Point<Scalar> diff = pois.row(i).transpose() - x_star;
    const Scalar dist = diff.norm();
    if (memberships(i) > Scalar(0) && bounded) feas = std::max(feas, dist - rho);
    if (bounded) comp = std::max(comp, std::abs(cert.lambda(i) * (dist * dist - rho * rho)));
    // Terms outside the support carry u = lambda = 0.
    grad += (ipow(memberships(i), m) + cert.lambda(i)) * diff;
  }
  check.feasibility_violation = static_cast<double>(feas);
  check.min_lambda = static_cast<double>(min_lambda);
  check.complementarity_violation = static_cast<double>(comp);
  check.stationarity_residual = static_cast<double>(grad.norm());
  check.feasible = check.feasibility_violation <= tol::feas;
  check.nonnegative = check.min_lambda >= -tol::kkt_nonneg;
  check.complementary = check.complementarity_violation < tol::kkt_complementarity;
  check.stationary = check.stationarity_residual < tol::kkt_stationarity;
  return check;
}

/// Refinement phase for one agent: the membership-weighted centroid
/// projected onto the intersection of the sensing balls around every PoI
/// the agent positively covers. `witness` is the agent's current position,
/// which certifies that intersection is non-empty.
///
/// The multipliers are rebuilt from the projection: x* is written as a
/// convex combination mu_bar*xhat + sum mu_i p_i over the active balls
/// (least squares), then lambda = u_hat (I + mu 1^T / mu_bar) mu.
/// Throws CertificateFailure if those multipliers do not verify, unless the
/// admissible set is a single point (flagged slater_degenerate instead).
template <typename Scalar>
RefinementResult<Scalar> refine_position(const PointSet<Scalar>& pois, const Vector<Scalar>& memberships, int m,
                                         Scalar rho, const Point<Scalar>& witness) {
  check_fuzzifier(m);
  if (witness.size() != pois.cols()) throw DimensionMismatch("agent and PoI dimension differ");
  RefinementResult<Scalar> out;
  out.centroid = weighted_centroid(pois, memberships, m);
  KktCertificate<Scalar>& cert = out.certificate;
  cert.lambda = Vector<Scalar>::Zero(pois.rows());
  cert.mu = Vector<Scalar>();
  for (Index i = 0; i < pois.rows(); ++i)
    if (memberships(i) > Scalar(0)) cert.u_hat += ipow(memberships(i), m);

  // Unbounded radius: the C-means update, no balls involved.
  if (!std::isfinite(static_cast<double>(rho))) {
    out.position = out.centroid;
    return out;
  }

  std::vector<Index> support;
  for (Index i = 0; i < pois.rows(); ++i)
    if (memberships(i) > Scalar(0)) support.push_back(i);
  PointSet<Scalar> centers(static_cast<Index>(support.size()), pois.cols());
  for (std::size_t s = 0; s < support.size(); ++s) centers.row(static_cast<Index>(s)) = pois.row(support[s]);

  const BallIntersection<Scalar> region(centers, rho, witness);
  const ProjectionResult<Scalar> proj = project_intersection(region, out.centroid);
  out.position = proj.point;

  auto finish = [&]() {
    const KktCheck check = verify_kkt(pois, memberships, m, rho, out.position, cert);
    cert.stationarity_residual = Scalar(check.stationarity_residual);
    cert.max_feasibility_violation = Scalar(check.feasibility_violation);
    cert.max_complementarity_violation = Scalar(check.complementarity_violation);
    return check;
  };

  if (proj.active.empty()) {
    // Centroid already admissible: all multipliers vanish.
    if (!finish()) throw CertificateFailure("interior refinement failed its own KKT check");
    return out;
  }

  for (Index a : proj.active) cert.active.push_back(support[a]);
  const Index k = static_cast<Index>(proj.active.size());
  const Index d = pois.cols();

  // [xhat - x*, p_a - x*; 1, 1] [mu_bar; mu] = [0; 1]
  Matrix<Scalar> system(d + 1, k + 1);
  system.block(0, 0, d, 1) = out.centroid - out.position;
  for (Index a = 0; a < k; ++a)
    system.block(0, a + 1, d, 1) = centers.row(proj.active[a]).transpose() - out.position;
  system.row(d).setOnes();
  Vector<Scalar> rhs = Vector<Scalar>::Zero(d + 1);
  rhs(d) = Scalar(1);
  const Vector<Scalar> coeffs = system.completeOrthogonalDecomposition().solve(rhs);
  cert.mu_bar = coeffs(0);
  cert.mu = coeffs.tail(k);

  bool built = cert.mu_bar > Scalar(0) && (cert.mu.array() >= Scalar(-tol::kkt_nonneg)).all();
  if (built) {
    const Matrix<Scalar> sherman =
        Matrix<Scalar>::Identity(k, k) + cert.mu * Vector<Scalar>::Ones(k).transpose() / cert.mu_bar;
    const Vector<Scalar> lambda_active = cert.u_hat * (sherman * cert.mu);
    for (Index a = 0; a < k; ++a) cert.lambda(cert.active[a]) = lambda_active(a);
  }
  const KktCheck check = finish();
  if (built && check.ok()) return out;

  const Scalar enclosing = min_enclosing_radius(centers);
  if (enclosing >= rho - Scalar(tol::active)) {
    cert.slater_degenerate = true;
    return out;
  }
  throw CertificateFailure(
      "refinement multipliers fail verification (stationarity " + std::to_string(check.stationarity_residual) +
      ", min lambda " + std::to_string(check.min_lambda) + ", complementarity " +
      std::to_string(check.complementarity_violation) + ")");
}

}  // namespace pcm

#endif  // PCM_REFINEMENT_HPP
