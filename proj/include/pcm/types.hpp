#ifndef PCM_TYPES_HPP
#define PCM_TYPES_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace pcm {

using Index = Eigen::Index;

/// A point in R^d, d in {2, 3}. Stored as a dynamic column vector so that
/// PoIs and agents share one type regardless of dimension.
template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A set of points, one per row (n x d).
template <typename Scalar>
using PointSet = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace tol {
// Feasibility slack for ball membership after projection.
inline constexpr double feas = 1e-8;
// Boundary activity detection.
inline constexpr double active = 1e-6;
// Coincidence between an agent and a PoI.
inline constexpr double zero = 1e-12;
// Row-sum slack of a membership matrix.
inline constexpr double row_sum = 1e-9;
// Dykstra: per-step movement threshold and sweep cap.
inline constexpr double dykstra_step = 1e-12;
inline constexpr int dykstra_max_sweeps = 10000;
// KKT certificate thresholds.
inline constexpr double kkt_nonneg = 1e-12;
inline constexpr double kkt_complementarity = 1e-8;
inline constexpr double kkt_stationarity = 1e-8;
}  // namespace tol

template <typename Scalar>
inline constexpr Scalar unbounded_radius = std::numeric_limits<Scalar>::infinity();

// ---------------------------------------------------------------------------
// Errors. Every failure the algorithm can surface derives from pcm::Error so
// callers can catch the family or a single kind.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class EmptyAdmissibleSet : public Error {
 public:
  using Error::Error;
};

class ZeroMass : public Error {
 public:
  using Error::Error;
};

/// Carries the offending PoI index and, when raised inside the solver loop,
/// the iteration at which it happened (-1 otherwise).
class UncoveredPoI : public Error {
 public:
  UncoveredPoI(Index poi, long iteration = -1)
      : Error("PoI " + std::to_string(poi) + " is not sensed by any agent" +
              (iteration >= 0 ? " (iteration " + std::to_string(iteration) + ")" : "")),
        poi(poi),
        iteration(iteration) {}
  Index poi;
  long iteration;
};

class IdleAgent : public Error {
 public:
  IdleAgent(Index agent, long iteration = -1)
      : Error("agent " + std::to_string(agent) + " has no positive association" +
              (iteration >= 0 ? " (iteration " + std::to_string(iteration) + ")" : "")),
        agent(agent),
        iteration(iteration) {}
  Index agent;
  long iteration;
};

class CertificateFailure : public Error {
 public:
  CertificateFailure(const std::string& what, Index agent = -1, long iteration = -1)
      : Error(what + (agent >= 0 ? " (agent " + std::to_string(agent) + ")" : "") +
              (iteration >= 0 ? " (iteration " + std::to_string(iteration) + ")" : "")),
        agent(agent),
        iteration(iteration) {}
  Index agent;
  long iteration;
};

class InsufficientInformation : public Error {
 public:
  InsufficientInformation(Index agent, Index poi, Index missing, long round)
      : Error("agent " + std::to_string(agent) + " lacks the distance from agent " +
              std::to_string(missing) + " to PoI " + std::to_string(poi) + " in round " +
              std::to_string(round)),
        agent(agent),
        poi(poi),
        missing(missing),
        round(round) {}
  Index agent;
  Index poi;
  Index missing;
  long round;
};

class InvalidThreshold : public Error {
 public:
  using Error::Error;
};

class OracleScaleExceeded : public Error {
 public:
  using Error::Error;
};

/// u^m for the integer fuzzifier m, by repeated multiplication.
template <typename Scalar>
inline Scalar ipow(Scalar base, int exponent) {
  Scalar result(1);
  for (int k = 0; k < exponent; ++k) result *= base;
  return result;
}

template <typename Derived>
inline bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace pcm

#endif  // PCM_TYPES_HPP
