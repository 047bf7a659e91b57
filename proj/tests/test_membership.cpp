#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcm/membership.hpp"
#include "pcm/oracle.hpp"
#include "pcm/solver.hpp"
#include "support.hpp"

#include <random>

using namespace pcm;
using pcm::testing::pt;
using pcm::testing::pts;
using pcm::testing::vec;

namespace {

// One PoI against a handful of agents, through the row kernel (the matrix
// entry point would reject the idle agents such rows create).
MembershipMatrix<double> assign_row_table(std::initializer_list<double> row, double rho, int m = 2) {
  check_fuzzifier(m);
  Matrix<double> d(1, static_cast<Index>(row.size()));
  Index j = 0;
  for (double v : row) d(0, j++) = v;
  MembershipMatrix<double> U{Matrix<double>::Zero(1, d.cols()), m};
  auto out = U.values.row(0);
  if (!assign_row(d.row(0), rho, m, out)) throw UncoveredPoI(0, 0);
  return U;
}

double row_cost(const Vector<double>& u, const Vector<double>& delta, int m) {
  double total = 0;
  for (Index j = 0; j < u.size(); ++j) total += ipow(u(j), m) * delta(j) * delta(j);
  return total;
}

}  // namespace

TEST_CASE("compute_distances") {
  CHECK(compute_distances(pts({{0, 0}}), pts({{3, 4}})).values()(0, 0) == 5.0);
  CHECK(compute_distances(pts({{1, 1}}), pts({{1, 1}})).values()(0, 0) == 0.0);
  const auto d = compute_distances(pts({{0, 0}, {1, 0}}), pts({{0, 0}}));
  CHECK(d(0, 0) == 0.0);
  CHECK(d(1, 0) == 1.0);
  PointSet<double> three = PointSet<double>::Zero(1, 3);
  CHECK_THROWS_AS(compute_distances(pts({{0, 0}}), three), DimensionMismatch);
}

TEST_CASE("assign_memberships: examples") {
  SUBCASE("symmetric pair") {
    const auto U = assign_row_table({0.2, 0.2}, 0.5);
    CHECK(U(0, 0) == doctest::Approx(0.5));
    CHECK(U(0, 1) == doctest::Approx(0.5));
  }
  SUBCASE("coincident agent takes everything") {
    const auto U = assign_row_table({0.0, 0.3}, 0.5);
    CHECK(U(0, 0) == 1.0);
    CHECK(U(0, 1) == 0.0);
  }
  SUBCASE("0.3 / 0.4 split") {
    // Oracle: brute-force scan of the 1-simplex at resolution 1e-3.
    double best_t = 0, best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 1000; ++k) {
      const double t = k / 1000.0;
      const double cost = t * t * 0.09 + (1 - t) * (1 - t) * 0.16;
      if (cost < best) best = cost, best_t = t;
    }
    CHECK(best_t == doctest::Approx(0.64).epsilon(1e-3));
    const auto U = assign_row_table({0.3, 0.4}, 0.5);
    CHECK(U(0, 0) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(U(0, 1) == doctest::Approx(0.36).epsilon(1e-12));
  }
}

TEST_CASE("assign_memberships: coincidences split uniformly") {
  const auto U = assign_row_table({0.0, 0.0, 0.2}, 0.5);
  CHECK(U(0, 0) == 0.5);
  CHECK(U(0, 1) == 0.5);
  CHECK(U(0, 2) == 0.0);
}

TEST_CASE("assign_memberships: boundary distance counts as sensed") {
  const auto U = assign_row_table({0.5, 0.25}, 0.5);
  CHECK(U(0, 0) > 0);
}

TEST_CASE("assign_memberships: errors") {
  CHECK_THROWS_AS(assign_row_table({0.6, 0.7}, 0.5), UncoveredPoI);
  // Agent 1 senses only the PoI that agent 0 sits on.
  Matrix<double> d(2, 2);
  d << 0.0, 0.3, 0.2, 0.9;
  CHECK_THROWS_AS(assign_memberships(DistanceTable<double>(d), 0.5, 2), IdleAgent);
  try {
    assign_memberships(DistanceTable<double>(d), 0.5, 2);
  } catch (const IdleAgent& e) {
    CHECK(e.agent == 1);
  }
  CHECK_THROWS_AS(assign_row_table({0.1}, 0.5, 1), InvalidArgument);
}

TEST_CASE("truncation_report") {
  Matrix<double> d1(1, 2);
  d1 << 0.2, 0.3;
  const DistanceTable<double> t1(d1);
  CHECK(truncation_report(assign_memberships(t1, 0.5, 2), t1, 0.5).empty());

  Matrix<double> d2(1, 2);
  d2 << 0.2, 0.9;
  const DistanceTable<double> t2(d2);
  const MembershipMatrix<double> U2{(Matrix<double>(1, 2) << 1, 0).finished(), 2};
  CHECK(truncation_report(U2, t2, 0.5) == std::vector<std::pair<Index, Index>>{{0, 1}});

  Matrix<double> d3(2, 1);
  d3 << 0.6, 0.4;
  const MembershipMatrix<double> U3{(Matrix<double>(2, 1) << 0, 1).finished(), 2};
  CHECK(truncation_report(U3, DistanceTable<double>(d3), 0.5) == std::vector<std::pair<Index, Index>>{{0, 0}});
}

TEST_CASE("membership properties on random rows") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int r = 1 + trial % 6;
    const int m = 2 + trial % 3;
    const double rho = 0.3 + 0.4 * unit(rng);
    Matrix<double> d(1, r);
    for (int j = 0; j < r; ++j) d(0, j) = 0.01 + unit(rng);
    d(0, 0) = std::min(d(0, 0), rho);  // at least one sensing agent
    MembershipMatrix<double> U{Matrix<double>::Zero(1, r), m};
    auto row = U.values.row(0);
    REQUIRE(assign_row(d.row(0), rho, m, row));
    CAPTURE(trial);
    CHECK(std::abs(U.values.row(0).sum() - 1) <= tol::row_sum);

    // Closer agent, larger membership.
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        if (d(0, a) <= rho && d(0, b) <= rho && d(0, a) < d(0, b)) CHECK(U(0, a) > U(0, b));

    // Zero beyond rho, positive within.
    for (int j = 0; j < r; ++j) CHECK((d(0, j) <= rho) == (U(0, j) > 0));

    // Scale invariance of a row.
    const double s = 0.5 + unit(rng);
    Vector<double> scaled(r);
    const Matrix<double> ds = d * s;
    REQUIRE(assign_row(ds.row(0), rho * s, m, scaled));
    CHECK((scaled.transpose() - U.values.row(0)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("unbounded radius equals the classical formula bit for bit") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 5, r = 2 + trial % 4, m = 2 + trial % 2;
    Matrix<double> d(n, r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < r; ++j) d(i, j) = unit(rng);
    const auto U = assign_memberships(DistanceTable<double>(d), d.maxCoeff(), m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < r; ++j) {
        double denom = 0;
        for (int h = 0; h < r; ++h) denom += std::pow(d(i, j) / d(i, h), 2.0 / (m - 1));
        CHECK(U(i, j) == 1.0 / denom);
      }
    }
  }
}

TEST_CASE("row-restricted optimality against the simplex oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int r = 1 + trial % 3;
    const int m = 2 + trial % 2;
    const double rho = 0.5;
    Vector<double> delta(r);
    for (int j = 0; j < r; ++j) delta(j) = 0.02 + 0.8 * unit(rng);
    delta(0) = std::min(delta(0), rho);
    Vector<double> analytic(r);
    REQUIRE(assign_row(delta, rho, m, analytic));
    const Vector<double> brute = oracle::brute_memberships<double>(delta, rho, m, 1e-3);
    CAPTURE(trial);
    CHECK(std::abs(row_cost(analytic, delta, m) - row_cost(brute, delta, m)) < 1e-4);
    CHECK(row_cost(analytic, delta, m) <= row_cost(brute, delta, m) + 1e-12);
  }
}

TEST_CASE("assignment never increases J for fixed positions") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = pcm::testing::random_instance(rng(), 5, 40, 2, 5);
    const auto dist = compute_distances(inst.scenario.pois, inst.scenario.agents);
    const auto best = assign_memberships(dist, inst.config.rho, 2);
    // Any admissible alternative: uniform over sensing agents per row.
    MembershipMatrix<double> alt{Matrix<double>::Zero(dist.pois(), dist.agents()), 2};
    for (Index i = 0; i < dist.pois(); ++i) {
      int count = 0;
      for (Index j = 0; j < dist.agents(); ++j) count += dist(i, j) <= inst.config.rho;
      for (Index j = 0; j < dist.agents(); ++j)
        if (dist(i, j) <= inst.config.rho) alt.values(i, j) = 1.0 / count;
    }
    CHECK(objective(inst.scenario.pois, inst.scenario.agents, best) <=
          objective(inst.scenario.pois, inst.scenario.agents, alt) + 1e-12);
  }
}
