#ifndef PCM_TESTS_SUPPORT_HPP
#define PCM_TESTS_SUPPORT_HPP

#include "pcm/scenario_io.hpp"
#include "pcm/solver.hpp"

#include <cstdint>
#include <random>

namespace pcm::testing {

/// Seeded random scenario with n in [n_lo, n_hi], r in [r_lo, r_hi] and a
/// sensing radius drawn from [rho_lo, rho_hi]; draws are repeated until the
/// instance passes validation at that radius.
struct RandomInstance {
  Scenario scenario;
  SolverConfig config;
};

inline RandomInstance random_instance(std::uint64_t seed, int n_lo = 5, int n_hi = 150, int r_lo = 2, int r_hi = 6,
                                      double rho_lo = 0.2, double rho_hi = 0.6) {
  std::mt19937_64 rng(seed);
  for (;;) {
    GeneratorSpec spec;
    spec.n = std::uniform_int_distribution<int>(n_lo, n_hi)(rng);
    spec.r = std::uniform_int_distribution<int>(r_lo, r_hi)(rng);
    spec.seed = rng();
    const double rho = std::uniform_real_distribution<double>(rho_lo, rho_hi)(rng);
    try {
      return {generate_scenario(spec, rho), SolverConfig::with_rho(rho)};
    } catch (const Error&) {
      // Redraw: the sensing radius must let the instance validate.
    }
  }
}

inline Point<double> pt(double x, double y) {
  Point<double> p(2);
  p << x, y;
  return p;
}

inline PointSet<double> pts(std::initializer_list<std::pair<double, double>> list) {
  PointSet<double> out(static_cast<Index>(list.size()), 2);
  Index i = 0;
  for (const auto& [x, y] : list) {
    out(i, 0) = x;
    out(i, 1) = y;
    ++i;
  }
  return out;
}

inline Vector<double> vec(std::initializer_list<double> list) {
  Vector<double> out(static_cast<Index>(list.size()));
  Index i = 0;
  for (double v : list) out(i++) = v;
  return out;
}

}  // namespace pcm::testing

#endif  // PCM_TESTS_SUPPORT_HPP
