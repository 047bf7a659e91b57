#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcm/geometry.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace pcm;
using pcm::testing::pt;
using pcm::testing::pts;

namespace {

// Grid search for the nearest point of the intersection; test-only oracle.
Point<double> grid_nearest(const PointSet<double>& centers, double rho, const Point<double>& v, double lo_x,
                           double hi_x, double lo_y, double hi_y, double step) {
  double best = std::numeric_limits<double>::infinity();
  Point<double> arg = v;
  for (double x = lo_x; x <= hi_x; x += step) {
    for (double y = lo_y; y <= hi_y; y += step) {
      bool inside = true;
      for (Index i = 0; i < centers.rows() && inside; ++i)
        inside = std::hypot(x - centers(i, 0), y - centers(i, 1)) <= rho;
      if (!inside) continue;
      const double dist = std::hypot(x - v(0), y - v(1));
      if (dist < best) best = dist, arg = pt(x, y);
    }
  }
  return arg;
}

struct RandomRegion {
  BallIntersection<double> region;
  Point<double> witness;
};

RandomRegion random_region(std::mt19937_64& rng, int dim = 2) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 6);
  const double rho = 0.1 + 0.5 * unit(rng);
  Point<double> witness(dim);
  for (int c = 0; c < dim; ++c) witness(c) = unit(rng);
  const int k = count(rng);
  PointSet<double> centers(k, dim);
  for (int i = 0; i < k; ++i) {
    Point<double> dir(dim);
    std::normal_distribution<double> normal;
    for (int c = 0; c < dim; ++c) dir(c) = normal(rng);
    dir.normalize();
    centers.row(i) = (witness + rho * unit(rng) * dir).transpose();
  }
  return {BallIntersection<double>(centers, rho, witness), witness};
}

Point<double> random_point(std::mt19937_64& rng, int dim = 2) {
  std::uniform_real_distribution<double> wide(-1.0, 2.0);
  Point<double> v(dim);
  for (int c = 0; c < dim; ++c) v(c) = wide(rng);
  return v;
}

}  // namespace

TEST_CASE("project_ball closed form") {
  const Ball<double> unit(pt(0, 0), 1.0);
  CHECK(project_ball(unit, pt(0.5, 0)) == pt(0.5, 0));
  const Point<double> far = project_ball(unit, pt(3, 4));
  CHECK(far(0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(far(1) == doctest::Approx(0.8).epsilon(1e-15));
  const Ball<double> offset(pt(1, 1), 0.5);
  CHECK(project_ball(offset, pt(1, 1)) == pt(1, 1));
}

TEST_CASE("ball construction rejects bad radii") {
  CHECK_THROWS_AS(Ball<double>(pt(0, 0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(Ball<double>(pt(0, 0), -1.0), InvalidArgument);
  std::vector<Ball<double>> mixed{Ball<double>(pt(0, 0), 1.0), Ball<double>(pt(1, 0), 0.5)};
  CHECK_THROWS_AS(BallIntersection<double>(mixed, pt(0.6, 0)), InvalidArgument);
}

TEST_CASE("intersection needs a witness inside every ball") {
  CHECK_THROWS_AS(BallIntersection<double>(pts({{0, 0}, {1, 0}}), 0.4, pt(0.5, 0)), EmptyAdmissibleSet);
  CHECK_NOTHROW(BallIntersection<double>(pts({{0, 0}, {1, 0}}), 0.5, pt(0.5, 0)));
}

TEST_CASE("is_in_intersection") {
  CHECK(is_in_intersection(BallIntersection<double>(pts({{0, 0}}), 1.0, pt(0, 0)), pt(0, 0), 0.0));
  const BallIntersection<double> pair(pts({{0, 0}, {1, 0}}), 0.5, pt(0.5, 0));
  CHECK(is_in_intersection(pair, pt(0.5, 0), 1e-12));
  CHECK_FALSE(is_in_intersection(pair, pt(0.6, 0), 1e-12));
}

TEST_CASE("project_intersection: single ball reduces to project_ball") {
  const BallIntersection<double> region(pts({{0, 0}}), 0.6, pt(0, 0));
  const auto result = project_intersection(region, pt(2, 0));
  CHECK(result.point(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(std::abs(result.point(1)) < 1e-12);
  REQUIRE(result.active.size() == 1);
  CHECK(result.active[0] == 0);
}

TEST_CASE("project_intersection: lens corner") {
  const PointSet<double> centers = pts({{0, 0}, {1, 0}});
  const BallIntersection<double> region(centers, 0.6, pt(0.5, 0));
  const Point<double> v = pt(0.5, 1);
  const auto result = project_intersection(region, v);

  // Oracle: grid search over the lens, step 1e-4.
  const Point<double> grid = grid_nearest(centers, 0.6, v, 0.4, 0.6, 0.0, 0.6, 1e-4);
  CHECK(std::abs(grid(0) - 0.5) < 2e-4);
  CHECK(std::abs(grid(1) - 0.33166) < 2e-4);

  // Frozen: x = 0.5 by symmetry, y = sqrt(0.36 - 0.25).
  CHECK(std::abs(result.point(0) - 0.5) < tol::feas);
  CHECK(std::abs(result.point(1) - std::sqrt(0.11)) < tol::feas);
  CHECK(result.active == std::vector<Index>{0, 1});
}

TEST_CASE("project_intersection: interval endpoint along the axis") {
  const BallIntersection<double> region(pts({{0, 0}, {0.8, 0}}), 0.5, pt(0.4, 0));
  // Oracle: along the axis the intersection is [0.8-0.5, 0.0+0.5] = [0.3, 0.5];
  // 0.16 clamps to 0.3.
  const double clamped = std::clamp(0.16, 0.8 - 0.5, 0.0 + 0.5);
  const auto result = project_intersection(region, pt(0.16, 0));
  CHECK(std::abs(result.point(0) - clamped) < tol::feas);
  CHECK(std::abs(result.point(1)) < tol::feas);
  CHECK(result.active == std::vector<Index>{1});
}

TEST_CASE("project_intersection: interior points are returned unchanged") {
  const BallIntersection<double> region(pts({{0, 0}, {0.8, 0}}), 0.5, pt(0.4, 0));
  const Point<double> v = pt(0.41, 0.05);
  const auto result = project_intersection(region, v);
  CHECK(result.point == v);
  CHECK(result.active.empty());
  CHECK(result.sweeps == 0);
}

TEST_CASE("project_intersection: dimension mismatch") {
  const BallIntersection<double> region(pts({{0, 0}}), 0.5, pt(0, 0));
  Point<double> v3(3);
  v3 << 0, 0, 0;
  CHECK_THROWS_AS(project_intersection(region, v3), DimensionMismatch);
}

TEST_CASE("project_intersection properties on random regions") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = trial % 4 == 3 ? 3 : 2;
    const RandomRegion rr = random_region(rng, dim);
    const Point<double> v = random_point(rng, dim);
    const Point<double> w = random_point(rng, dim);
    const auto pv = project_intersection(rr.region, v);
    const auto pw = project_intersection(rr.region, w);
    CAPTURE(trial);

    // Feasibility.
    CHECK(is_in_intersection(rr.region, pv.point, tol::feas));
    // Non-expansiveness.
    CHECK((pv.point - pw.point).norm() <= (v - w).norm() + tol::feas);
    // Idempotence.
    const auto again = project_intersection(rr.region, pv.point);
    CHECK((again.point - pv.point).norm() <= tol::feas);
    // Optimality versus the witness (also in the set): never farther.
    CHECK((pv.point - v).norm() <= (rr.witness - v).norm() + tol::feas);

    if (!is_in_intersection(rr.region, v, 0.0)) {
      REQUIRE_FALSE(pv.active.empty());
      for (Index i : pv.active) {
        const double gap = (pv.point - rr.region.centers().row(i).transpose()).norm() - rr.region.radius();
        CHECK(std::abs(gap) < tol::active);
      }
      // Convex-combination structure on the active set.
      const Index k = static_cast<Index>(pv.active.size());
      Matrix<double> system(dim + 1, k + 1);
      system.block(0, 0, dim, 1) = v - pv.point;
      for (Index a = 0; a < k; ++a)
        system.block(0, a + 1, dim, 1) = rr.region.centers().row(pv.active[a]).transpose() - pv.point;
      system.row(dim).setOnes();
      Vector<double> rhs = Vector<double>::Zero(dim + 1);
      rhs(dim) = 1;
      const Vector<double> mu = system.completeOrthogonalDecomposition().solve(rhs);
      CHECK((system * mu - rhs).norm() < 1e-8);
      CHECK(mu(0) > 0);
      CHECK(mu.tail(k).minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("single-ball agreement on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Point<double> c = pt(unit(rng), unit(rng));
    const double rho = 0.05 + unit(rng);
    const Point<double> v = pt(3 * unit(rng) - 1, 3 * unit(rng) - 1);
    const Ball<double> ball(c, rho);
    PointSet<double> centers(1, 2);
    centers.row(0) = c.transpose();
    const auto viaIntersection = project_intersection(BallIntersection<double>(centers, rho, c), v);
    CHECK((viaIntersection.point - project_ball(ball, v)).norm() <= tol::feas);
  }
}

TEST_CASE("long double instantiation") {
  using LD = long double;
  PointSet<LD> centers(2, 2);
  centers << 0, 0, 1, 0;
  Point<LD> witness(2), v(2);
  witness << 0.5L, 0;
  v << 0.5L, 1;
  const auto result = project_intersection(BallIntersection<LD>(centers, LD(0.6), witness), v);
  CHECK(std::abs(static_cast<double>(result.point(1)) - std::sqrt(0.11)) < 1e-10);
}
