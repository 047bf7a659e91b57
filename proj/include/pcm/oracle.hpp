#ifndef PCM_ORACLE_HPP
#define PCM_ORACLE_HPP

// Brute-force reference solvers for the two phases. They share no code with
// membership.hpp / refinement.hpp beyond the Eigen types: dense grids over
// the feasible set followed by a Nelder-Mead polish.

#include "pcm/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace pcm::oracle {

/// Derivative-free simplex minimizer. `restarts` rebuilds the simplex
/// around the incumbent with a shrinking edge, which lets the method creep
/// along kinks of penalized objectives.
template <typename Scalar>
Vector<Scalar> nelder_mead(const std::function<Scalar(const Vector<Scalar>&)>& f, Vector<Scalar> start, Scalar edge,
                           int restarts = 12, int max_evals = 4000) {
  const Index k = start.size();
  for (int round = 0; round < restarts; ++round, edge *= Scalar(0.25)) {
    std::vector<Vector<Scalar>> simplex(k + 1, start);
    std::vector<Scalar> value(k + 1);
    for (Index a = 0; a < k; ++a) simplex[a + 1](a) += edge;
    for (Index a = 0; a <= k; ++a) value[a] = f(simplex[a]);

    for (int evals = 0; evals < max_evals; ++evals) {
      std::vector<Index> order(k + 1);
      for (Index a = 0; a <= k; ++a) order[a] = a;
      std::sort(order.begin(), order.end(), [&](Index a, Index b) { return value[a] < value[b]; });
      const Index best = order.front(), worst = order.back(), second = order[k - 1];
      if (std::abs(value[worst] - value[best]) <= Scalar(1e-16) * (Scalar(1) + std::abs(value[best]))) {
        Scalar spread(0);
        for (Index a = 0; a <= k; ++a) spread = std::max(spread, (simplex[a] - simplex[best]).norm());
        if (spread < Scalar(1e-13)) break;
      }

      Vector<Scalar> centroid = Vector<Scalar>::Zero(k);
      for (Index a = 0; a <= k; ++a)
        if (a != worst) centroid += simplex[a];
      centroid /= Scalar(k);

      const Vector<Scalar> reflected = centroid + (centroid - simplex[worst]);
      const Scalar fr = f(reflected);
      if (fr < value[best]) {
        const Vector<Scalar> expanded = centroid + Scalar(2) * (centroid - simplex[worst]);
        const Scalar fe = f(expanded);
        if (fe < fr) {
          simplex[worst] = expanded;
          value[worst] = fe;
        } else {
          simplex[worst] = reflected;
          value[worst] = fr;
        }
      } else if (fr < value[second]) {
        simplex[worst] = reflected;
        value[worst] = fr;
      } else {
        const Vector<Scalar> contracted = centroid + Scalar(0.5) * (simplex[worst] - centroid);
        const Scalar fc = f(contracted);
        if (fc < value[worst]) {
          simplex[worst] = contracted;
          value[worst] = fc;
        } else {
          for (Index a = 0; a <= k; ++a) {
            if (a == best) continue;
            simplex[a] = simplex[best] + Scalar(0.5) * (simplex[a] - simplex[best]);
            value[a] = f(simplex[a]);
          }
        }
      }
    }
    const auto it = std::min_element(value.begin(), value.end());
    start = simplex[static_cast<std::size_t>(it - value.begin())];
  }
  return start;
}

/// Minimizes sum_j u_j^m delta_j^2 over the simplex restricted to agents
/// within rho, by a dense grid (r <= 3) and a Nelder-Mead polish.
template <typename Scalar>
Vector<Scalar> brute_memberships(const Vector<Scalar>& delta, Scalar rho, int m, Scalar grid_step) {
  const Index r = delta.size();
  if (r > 3) throw OracleScaleExceeded("membership oracle handles at most 3 agents");
  std::vector<Index> support;
  for (Index j = 0; j < r; ++j)
    if (delta(j) <= rho) support.push_back(j);
  if (support.empty()) throw InvalidArgument("no agent within the sensing radius");

  const Index k = static_cast<Index>(support.size());
  Vector<Scalar> out = Vector<Scalar>::Zero(r);
  if (k == 1) {
    out(support[0]) = Scalar(1);
    return out;
  }

  auto cost = [&](const Vector<Scalar>& free) {
    // free holds the first k-1 weights; the last one closes the simplex.
    Scalar last = Scalar(1) - free.sum();
    Scalar violation = std::max(Scalar(0), -last);
    for (Index a = 0; a < free.size(); ++a) violation += std::max(Scalar(0), -free(a)) + std::max(Scalar(0), free(a) - Scalar(1));
    Scalar total(0);
    for (Index a = 0; a < k; ++a) {
      const Scalar w = std::clamp(a + 1 < k ? free(a) : last, Scalar(0), Scalar(1));
      Scalar p(1);
      for (int e = 0; e < m; ++e) p *= w;
      total += p * delta(support[a]) * delta(support[a]);
    }
    return total + Scalar(1e6) * violation;
  };

  Vector<Scalar> best_free(k - 1);
  Scalar best_value = std::numeric_limits<Scalar>::infinity();
  const long steps = static_cast<long>(std::llround(Scalar(1) / grid_step));
  Vector<Scalar> trial(k - 1);
  if (k == 2) {
    for (long a = 0; a <= steps; ++a) {
      trial(0) = Scalar(a) / Scalar(steps);
      const Scalar v = cost(trial);
      if (v < best_value) best_value = v, best_free = trial;
    }
  } else {
    for (long a = 0; a <= steps; ++a)
      for (long b = 0; a + b <= steps; ++b) {
        trial(0) = Scalar(a) / Scalar(steps);
        trial(1) = Scalar(b) / Scalar(steps);
        const Scalar v = cost(trial);
        if (v < best_value) best_value = v, best_free = trial;
      }
  }
  const std::function<Scalar(const Vector<Scalar>&)> f = cost;
  best_free = nelder_mead<Scalar>(f, best_free, grid_step);
  Scalar last = Scalar(1);
  for (Index a = 0; a + 1 < k; ++a) {
    out(support[a]) = std::clamp(best_free(a), Scalar(0), Scalar(1));
    last -= out(support[a]);
  }
  out(support[k - 1]) = std::max(Scalar(0), last);
  return out;
}

/// Minimizes sum_i u_i^m |p_i - x|^2 over the intersection of the rho-balls
/// around the PoIs with u_i > 0 (d = 2 only): dense grid over the feasible
/// points of the clipped bounding box, Nelder-Mead on an exact penalty, and
/// an enumeration of boundary arcs and circle crossings.
template <typename Scalar>
Point<Scalar> brute_position(const PointSet<Scalar>& pois, const Vector<Scalar>& memberships, int m, Scalar rho,
                             Scalar grid_step) {
  if (pois.cols() != 2) throw DimensionMismatch("position oracle is two-dimensional");
  std::vector<Index> support;
  for (Index i = 0; i < pois.rows(); ++i)
    if (memberships(i) > Scalar(0)) support.push_back(i);
  if (support.empty()) throw InvalidArgument("no positive membership");

  std::vector<Scalar> weight(pois.rows(), Scalar(0));
  Scalar total_weight(0);
  for (Index i : support) {
    Scalar p(1);
    for (int e = 0; e < m; ++e) p *= memberships(i);
    weight[i] = p;
    total_weight += p;
  }

  // Every feasible point lies in each support ball's bounding box.
  Scalar lo_x = -std::numeric_limits<Scalar>::infinity(), lo_y = lo_x;
  Scalar hi_x = std::numeric_limits<Scalar>::infinity(), hi_y = hi_x;
  for (Index i : support) {
    lo_x = std::max(lo_x, pois(i, 0) - rho);
    hi_x = std::min(hi_x, pois(i, 0) + rho);
    lo_y = std::max(lo_y, pois(i, 1) - rho);
    hi_y = std::min(hi_y, pois(i, 1) + rho);
  }
  if (lo_x > hi_x || lo_y > hi_y) throw EmptyAdmissibleSet("support balls have disjoint bounding boxes");

  auto objective = [&](Scalar x, Scalar y) {
    Scalar total(0);
    for (Index i : support) {
      const Scalar dx = pois(i, 0) - x, dy = pois(i, 1) - y;
      total += weight[i] * (dx * dx + dy * dy);
    }
    return total;
  };
  auto violation = [&](Scalar x, Scalar y) {
    Scalar worst(0);
    for (Index i : support) {
      const Scalar dx = pois(i, 0) - x, dy = pois(i, 1) - y;
      worst += std::max(Scalar(0), std::sqrt(dx * dx + dy * dy) - rho);
    }
    return worst;
  };

  Scalar best_value = std::numeric_limits<Scalar>::infinity();
  Vector<Scalar> best(2);
  const long nx = static_cast<long>(std::ceil((hi_x - lo_x) / grid_step));
  const long ny = static_cast<long>(std::ceil((hi_y - lo_y) / grid_step));
  for (long a = 0; a <= nx; ++a) {
    const Scalar x = std::min(hi_x, lo_x + Scalar(a) * grid_step);
    for (long b = 0; b <= ny; ++b) {
      const Scalar y = std::min(hi_y, lo_y + Scalar(b) * grid_step);
      if (violation(x, y) > Scalar(0)) continue;
      const Scalar v = objective(x, y);
      if (v < best_value) {
        best_value = v;
        best << x, y;
      }
    }
  }
  if (!std::isfinite(static_cast<double>(best_value))) {
    // Feasible set thinner than the grid: seed from the box center.
    best << (lo_x + hi_x) / 2, (lo_y + hi_y) / 2;
  }

  Scalar span(0);
  for (Index i : support) span = std::max(span, pois.row(i).norm());
  const Scalar penalty = Scalar(1e3) * (Scalar(1) + total_weight) * (Scalar(1) + span + rho);
  const std::function<Scalar(const Vector<Scalar>&)> f = [&](const Vector<Scalar>& z) {
    return objective(z(0), z(1)) + penalty * violation(z(0), z(1));
  };
  const Vector<Scalar> polished = nelder_mead<Scalar>(f, best, grid_step, 16);

  // The penalty polish can stall on an arc when the weights are badly
  // scaled, so boundary candidates are enumerated as well: a dense angular
  // scan of every support circle with golden-section refinement, and every
  // pairwise circle crossing. The best nearly feasible candidate wins.
  const Scalar feasible_slack(1e-10);
  Scalar winner_value = std::numeric_limits<Scalar>::infinity();
  Vector<Scalar> winner = polished;
  auto consider = [&](Scalar x, Scalar y) {
    if (violation(x, y) > feasible_slack) return;
    const Scalar v = objective(x, y);
    if (v < winner_value) {
      winner_value = v;
      winner << x, y;
    }
  };
  consider(polished(0), polished(1));

  const Scalar two_pi = Scalar(2) * Scalar(M_PI);
  constexpr int kAngles = 4096;
  for (Index c : support) {
    auto on_arc = [&](Scalar t) {
      const Scalar x = pois(c, 0) + rho * std::cos(t), y = pois(c, 1) + rho * std::sin(t);
      return objective(x, y) + penalty * violation(x, y);
    };
    int best_k = 0;
    Scalar best_arc = std::numeric_limits<Scalar>::infinity();
    for (int k = 0; k < kAngles; ++k) {
      const Scalar v = on_arc(two_pi * Scalar(k) / Scalar(kAngles));
      if (v < best_arc) best_arc = v, best_k = k;
    }
    const Scalar h = two_pi / Scalar(kAngles);
    Scalar a = two_pi * Scalar(best_k) / Scalar(kAngles) - h, b = a + Scalar(2) * h;
    const Scalar g = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
    Scalar t1 = b - g * (b - a), t2 = a + g * (b - a);
    Scalar f1 = on_arc(t1), f2 = on_arc(t2);
    for (int it = 0; it < 200 && b - a > Scalar(1e-15); ++it) {
      if (f1 < f2) {
        b = t2, t2 = t1, f2 = f1;
        t1 = b - g * (b - a), f1 = on_arc(t1);
      } else {
        a = t1, t1 = t2, f1 = f2;
        t2 = a + g * (b - a), f2 = on_arc(t2);
      }
    }
    const Scalar t = (a + b) / Scalar(2);
    consider(pois(c, 0) + rho * std::cos(t), pois(c, 1) + rho * std::sin(t));
  }

  for (std::size_t s1 = 0; s1 < support.size(); ++s1) {
    for (std::size_t s2 = s1 + 1; s2 < support.size(); ++s2) {
      const Index i = support[s1], j = support[s2];
      const Scalar dx = pois(j, 0) - pois(i, 0), dy = pois(j, 1) - pois(i, 1);
      const Scalar dist = std::sqrt(dx * dx + dy * dy);
      if (dist == Scalar(0) || dist > Scalar(2) * rho) continue;
      const Scalar half = dist / Scalar(2);
      const Scalar height = std::sqrt(std::max(Scalar(0), rho * rho - half * half));
      const Scalar mx = pois(i, 0) + dx / Scalar(2), my = pois(i, 1) + dy / Scalar(2);
      consider(mx - height * dy / dist, my + height * dx / dist);
      consider(mx + height * dy / dist, my - height * dx / dist);
    }
  }
  return winner;
}

}  // namespace pcm::oracle

#endif  // PCM_ORACLE_HPP
