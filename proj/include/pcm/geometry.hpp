#ifndef PCM_GEOMETRY_HPP
#define PCM_GEOMETRY_HPP

#include "pcm/types.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace pcm {

template <typename Scalar>
class Ball {
 public:
  Ball(Point<Scalar> center, Scalar radius) : center_(std::move(center)), radius_(radius) {
    if (!(radius_ > Scalar(0))) throw InvalidArgument("ball radius must be positive");
    if (!center_.allFinite()) throw InvalidArgument("ball center must be finite");
  }

  const Point<Scalar>& center() const { return center_; }
  Scalar radius() const { return radius_; }
  Index dimension() const { return center_.size(); }

 private:
  Point<Scalar> center_;
  Scalar radius_;
};

/// Intersection of equal-radius closed balls. Non-emptiness is established
/// at construction by a witness point lying in every ball.
template <typename Scalar>
class BallIntersection {
 public:
  BallIntersection(PointSet<Scalar> centers, Scalar radius, const Point<Scalar>& witness)
      : centers_(std::move(centers)), radius_(radius) {
    if (centers_.rows() == 0) throw InvalidArgument("ball intersection needs at least one ball");
    if (!(radius_ > Scalar(0))) throw InvalidArgument("ball radius must be positive");
    if (!centers_.allFinite()) throw InvalidArgument("ball centers must be finite");
    if (witness.size() != centers_.cols()) throw DimensionMismatch("witness dimension differs from ball centers");
    check_witness(witness);
    witness_ = witness;
  }

  BallIntersection(const std::vector<Ball<Scalar>>& balls, const Point<Scalar>& witness) {
    if (balls.empty()) throw InvalidArgument("ball intersection needs at least one ball");
    radius_ = balls.front().radius();
    centers_.resize(static_cast<Index>(balls.size()), balls.front().dimension());
    for (std::size_t i = 0; i < balls.size(); ++i) {
      if (balls[i].radius() != radius_) throw InvalidArgument("balls of heterogeneous radii");
      if (balls[i].dimension() != centers_.cols()) throw DimensionMismatch("balls of mixed dimension");
      centers_.row(static_cast<Index>(i)) = balls[i].center().transpose();
    }
    if (witness.size() != centers_.cols()) throw DimensionMismatch("witness dimension differs from ball centers");
    check_witness(witness);
    witness_ = witness;
  }

  const PointSet<Scalar>& centers() const { return centers_; }
  Scalar radius() const { return radius_; }
  const Point<Scalar>& witness() const { return witness_; }
  Index size() const { return centers_.rows(); }
  Index dimension() const { return centers_.cols(); }

 private:
  void check_witness(const Point<Scalar>& witness) const {
    for (Index i = 0; i < centers_.rows(); ++i) {
      if ((centers_.row(i).transpose() - witness).norm() > radius_ + Scalar(tol::feas))
        throw EmptyAdmissibleSet("witness lies outside ball " + std::to_string(i));
    }
  }

  PointSet<Scalar> centers_;
  Point<Scalar> witness_;
  Scalar radius_{};
};

template <typename Scalar>
struct ProjectionResult {
  Point<Scalar> point;
  std::vector<Index> active;  // balls whose boundary holds the point
  int sweeps = 0;             // Dykstra sweeps (0 when the input was already inside)
};

template <typename Scalar>
Point<Scalar> project_ball(const Ball<Scalar>& ball, const Point<Scalar>& v) {
  if (v.size() != ball.dimension()) throw DimensionMismatch("point and ball differ in dimension");
  const Point<Scalar> offset = v - ball.center();
  const Scalar dist = offset.norm();
  if (dist <= ball.radius()) return v;
  const Scalar alpha = ball.radius() / dist;
  return alpha * v + (Scalar(1) - alpha) * ball.center();
}

template <typename Scalar>
bool is_in_intersection(const BallIntersection<Scalar>& region, const Point<Scalar>& v, Scalar tolerance) {
  if (v.size() != region.dimension()) throw DimensionMismatch("point and region differ in dimension");
  for (Index i = 0; i < region.size(); ++i) {
    if ((region.centers().row(i) - v.transpose()).norm() > region.radius() + tolerance) return false;
  }
  return true;
}

namespace detail {

// Projection onto a single ball given by row i of `centers`.
template <typename Scalar>
void project_onto_row(const PointSet<Scalar>& centers, Index i, Scalar radius, const Point<Scalar>& y,
                      Point<Scalar>& out) {
  const auto c = centers.row(i).transpose();
  const Scalar dist = (y - c).norm();
  if (dist <= radius) {
    out = y;
  } else {
    const Scalar alpha = radius / dist;
    out = alpha * y + (Scalar(1) - alpha) * c;
  }
}

// Pulls a point that overshoots some ball by rounding error back inside, so
// that distances computed as |c - x| compare <= radius exactly. Radial
// snaps handle the usual few-ulp overshoot; near-tangent balls can bounce
// between each other, and then the point slides toward the witness by the
// smallest power-of-two fraction that clears every ball.
template <typename Scalar>
bool snap_inside(const PointSet<Scalar>& centers, Scalar radius, const Point<Scalar>& witness, Point<Scalar>& x) {
  auto inside = [&](const Point<Scalar>& y) {
    for (Index i = 0; i < centers.rows(); ++i)
      if ((centers.row(i) - y.transpose()).norm() > radius) return false;
    return true;
  };
  const Scalar shrink = Scalar(1) - Scalar(4) * std::numeric_limits<Scalar>::epsilon();
  Point<Scalar> y = x;
  for (int pass = 0; pass < 8; ++pass) {
    for (Index i = 0; i < centers.rows(); ++i) {
      const Scalar dist = (centers.row(i) - y.transpose()).norm();
      if (dist <= radius) continue;
      const Point<Scalar> c = centers.row(i).transpose();
      y = c + (y - c) * (radius * shrink / dist);
    }
    if (inside(y)) {
      x = y;
      return true;
    }
  }
  if (!inside(witness)) return false;
  for (Scalar t = std::numeric_limits<Scalar>::epsilon(); t < Scalar(1); t *= Scalar(2)) {
    y = x + t * (witness - x);
    if (inside(y)) {
      x = y;
      return true;
    }
  }
  x = witness;
  return true;
}

// Solves the active-set KKT system of the projection problem
//   z - v + sum_i g_i (z - c_i) = 0,   |z - c_i|^2 = rho^2  (i in active)
// by Newton's method, starting from a Dykstra iterate. Returns false when the
// system is not square-solvable or the iteration does not settle.
template <typename Scalar>
bool newton_polish(const PointSet<Scalar>& centers, Scalar radius, const Point<Scalar>& v,
                   const std::vector<Index>& active, Vector<Scalar> gamma, Point<Scalar>& z) {
  const Index d = z.size();
  const Index k = static_cast<Index>(active.size());
  if (k == 0 || k > d) return false;
  const Index dim = d + k;
  Vector<Scalar> residual(dim);
  Matrix<Scalar> jac(dim, dim);
  auto evaluate = [&](const Point<Scalar>& zz, const Vector<Scalar>& gg) {
    residual.head(d) = zz - v;
    for (Index a = 0; a < k; ++a) {
      const Point<Scalar> diff = zz - centers.row(active[a]).transpose();
      residual.head(d) += gg(a) * diff;
      residual(d + a) = Scalar(0.5) * (diff.squaredNorm() - radius * radius);
    }
  };
  for (int iter = 0; iter < 50; ++iter) {
    evaluate(z, gamma);
    jac.setZero();
    jac.topLeftCorner(d, d).diagonal().setConstant(Scalar(1) + gamma.sum());
    for (Index a = 0; a < k; ++a) {
      const Point<Scalar> diff = z - centers.row(active[a]).transpose();
      jac.block(0, d + a, d, 1) = diff;
      jac.block(d + a, 0, 1, d) = diff.transpose();
    }
    Eigen::FullPivLU<Matrix<Scalar>> lu(jac);
    if (!lu.isInvertible()) return false;
    const Vector<Scalar> step = lu.solve(-residual);
    z += step.head(d);
    gamma += step.tail(k);
    if (!z.allFinite() || !gamma.allFinite()) return false;
    if (step.norm() <= Scalar(16) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + z.norm())) break;
  }
  evaluate(z, gamma);
  const Scalar scale = Scalar(1) + v.norm() + radius;
  if (residual.norm() > Scalar(1e3) * std::numeric_limits<Scalar>::epsilon() * scale) return false;
  return (gamma.array() >= Scalar(0)).all();
}

}  // namespace detail

/// Metric projection of `v` onto the ball intersection, computed by Dykstra's
/// cyclic corrected projections and finished by a Newton solve on the
/// detected active set. Points already inside are returned unchanged.
template <typename Scalar>
ProjectionResult<Scalar> project_intersection(const BallIntersection<Scalar>& region, const Point<Scalar>& v) {
  if (v.size() != region.dimension()) throw DimensionMismatch("point and region differ in dimension");
  if (!v.allFinite()) throw InvalidArgument("cannot project a non-finite point");

  ProjectionResult<Scalar> result;
  if (is_in_intersection(region, v, Scalar(0))) {
    result.point = v;
    return result;
  }

  const PointSet<Scalar>& centers = region.centers();
  const Scalar radius = region.radius();
  const Index nballs = region.size();
  const Index d = region.dimension();

  Point<Scalar> x = v;
  Point<Scalar> y(d), next(d);
  Matrix<Scalar> increments = Matrix<Scalar>::Zero(nballs, d);
  const Scalar step_tol = Scalar(tol::dykstra_step);

  bool settled = false;
  int sweep = 0;
  while (sweep < tol::dykstra_max_sweeps) {
    ++sweep;
    Scalar moved_sq(0);
    for (Index i = 0; i < nballs; ++i) {
      y = x + increments.row(i).transpose();
      detail::project_onto_row(centers, i, radius, y, next);
      increments.row(i) = (y - next).transpose();
      moved_sq += (next - x).squaredNorm();
      x = next;
    }
    if (std::sqrt(moved_sq) < step_tol) {
      settled = true;
      break;
    }
  }
  result.sweeps = sweep;

  // Dykstra keeps x + sum_i q_i == v, and at a fixpoint q_i = g_i (x - c_i)
  // with g_i = |q_i| / rho, which seeds the Newton polish. An unsettled
  // iterate (thin or zig-zagging intersections) gets a wider candidate band
  // and is accepted only through a verified KKT point of the projection.
  const Scalar band = settled ? Scalar(tol::active) : Scalar(1e-3);
  std::vector<Index> support;
  std::vector<Scalar> seeds;
  for (Index i = 0; i < nballs; ++i) {
    const Scalar g = increments.row(i).norm() / radius;
    const Scalar gap = std::abs((x - centers.row(i).transpose()).norm() - radius);
    if (g > Scalar(0) && gap < band) {
      support.push_back(i);
      seeds.push_back(g);
    }
  }
  Point<Scalar> polished = x;
  Vector<Scalar> gamma = Eigen::Map<Vector<Scalar>>(seeds.data(), static_cast<Index>(seeds.size()));
  const bool certified = detail::newton_polish(centers, radius, v, support, gamma, polished) &&
                         (!settled || (polished - x).norm() <= Scalar(tol::active)) &&
                         is_in_intersection(region, polished, Scalar(tol::dykstra_step));
  if (certified) {
    x = polished;
  } else if (!settled) {
    // The band may hold more than d balls; the projection is unique, so any
    // subset that certifies is the answer.
    const Index count = static_cast<Index>(support.size());
    bool found = false;
    for (unsigned mask = 1; count < 16 && mask < (1u << count) && !found; ++mask) {
      if (std::popcount(mask) > d) continue;
      std::vector<Index> subset;
      Vector<Scalar> sub_gamma(std::popcount(mask));
      for (Index b = 0; b < count; ++b) {
        if (!(mask & (1u << b))) continue;
        sub_gamma(static_cast<Index>(subset.size())) = seeds[static_cast<std::size_t>(b)];
        subset.push_back(support[static_cast<std::size_t>(b)]);
      }
      Point<Scalar> trial = x;
      if (detail::newton_polish(centers, radius, v, subset, sub_gamma, trial) &&
          is_in_intersection(region, trial, Scalar(tol::dykstra_step))) {
        x = trial;
        found = true;
      }
    }
    if (!found) throw ConvergenceFailure("Dykstra projection did not settle within the sweep cap");
  }

  detail::snap_inside(centers, radius, region.witness(), x);
  if (!is_in_intersection(region, x, Scalar(tol::feas)))
    throw ConvergenceFailure("Dykstra projection ended outside the feasibility slack");

  for (Index i = 0; i < nballs; ++i) {
    if (std::abs((x - centers.row(i).transpose()).norm() - radius) < Scalar(tol::active))
      result.active.push_back(i);
  }
  result.point = std::move(x);
  return result;
}

}  // namespace pcm

#endif  // PCM_GEOMETRY_HPP
