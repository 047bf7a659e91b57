#ifndef PCM_MEMBERSHIP_HPP
#define PCM_MEMBERSHIP_HPP

#include "pcm/types.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace pcm {

/// n x r table of PoI-to-agent Euclidean distances.
template <typename Scalar>
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(Matrix<Scalar> values) : values_(std::move(values)) {
    if (!values_.allFinite() || (values_.array() < Scalar(0)).any())
      throw InvalidArgument("distances must be finite and non-negative");
  }

  const Matrix<Scalar>& values() const { return values_; }
  Scalar operator()(Index poi, Index agent) const { return values_(poi, agent); }
  Index pois() const { return values_.rows(); }
  Index agents() const { return values_.cols(); }

 private:
  Matrix<Scalar> values_;
};

/// n x r association matrix U together with the fuzzifier it was built for.
template <typename Scalar>
struct MembershipMatrix {
  Matrix<Scalar> values;
  int m = 2;

  Scalar operator()(Index poi, Index agent) const { return values(poi, agent); }
  Index pois() const { return values.rows(); }
  Index agents() const { return values.cols(); }
};

template <typename Scalar>
DistanceTable<Scalar> compute_distances(const PointSet<Scalar>& pois, const PointSet<Scalar>& agents) {
  if (pois.rows() == 0 || agents.rows() == 0) throw InvalidArgument("need at least one PoI and one agent");
  if (pois.cols() != agents.cols()) throw DimensionMismatch("PoIs and agents differ in dimension");
  Matrix<Scalar> delta(pois.rows(), agents.rows());
  for (Index i = 0; i < pois.rows(); ++i)
    for (Index j = 0; j < agents.rows(); ++j) delta(i, j) = (pois.row(i) - agents.row(j)).norm();
  return DistanceTable<Scalar>(std::move(delta));
}

inline void check_fuzzifier(int m) {
  if (m < 2) throw InvalidArgument("fuzzifier m must be an integer >= 2");
}

/// Optimal memberships of one PoI given its distances to every agent.
/// Agents farther than `rho` get zero. If some agents sit on the PoI
/// (distance below tol::zero) they split the unit mass uniformly.
/// Returns false when no agent senses the PoI; `out` is then all zero.
template <typename Scalar, typename RowIn, typename RowOut>
bool assign_row(const Eigen::MatrixBase<RowIn>& delta, Scalar rho, int m, Eigen::MatrixBase<RowOut>& out) {
  const Index r = delta.size();
  out.setZero();

  Index coincident = 0;
  Index sensed = 0;
  for (Index j = 0; j < r; ++j) {
    if (delta(j) <= rho) ++sensed;
    if (delta(j) < Scalar(tol::zero)) ++coincident;
  }
  if (sensed == 0) return false;

  if (coincident > 0) {
    const Scalar share = Scalar(1) / Scalar(coincident);
    for (Index j = 0; j < r; ++j)
      if (delta(j) < Scalar(tol::zero)) out(j) = share;
    return true;
  }

  const Scalar exponent = Scalar(2) / Scalar(m - 1);
  for (Index j = 0; j < r; ++j) {
    if (!(delta(j) <= rho)) continue;
    Scalar denom(0);
    for (Index h = 0; h < r; ++h) {
      if (delta(h) <= rho) denom += std::pow(delta(j) / delta(h), exponent);
    }
    out(j) = Scalar(1) / denom;
  }
  return true;
}

/// Assignment phase: the optimal U for fixed agent positions.
/// Throws UncoveredPoI / IdleAgent when constraints (I) or (II) cannot hold.
template <typename Scalar>
MembershipMatrix<Scalar> assign_memberships(const DistanceTable<Scalar>& dist, Scalar rho, int m) {
  check_fuzzifier(m);
  if (!(rho > Scalar(0))) throw InvalidArgument("sensing radius must be positive");
  MembershipMatrix<Scalar> U{Matrix<Scalar>::Zero(dist.pois(), dist.agents()), m};
  for (Index i = 0; i < dist.pois(); ++i) {
    auto row = U.values.row(i);
    if (!assign_row(dist.values().row(i), rho, m, row)) throw UncoveredPoI(i);
  }
  for (Index j = 0; j < dist.agents(); ++j) {
    if (!(U.values.col(j).sum() > Scalar(0))) throw IdleAgent(j);
  }
  return U;
}

/// (poi, agent) pairs outside the sensing radius, i.e. the associations
/// forced to zero by the proximity constraints.
template <typename Scalar>
std::vector<std::pair<Index, Index>> truncation_report(const MembershipMatrix<Scalar>& U,
                                                       const DistanceTable<Scalar>& dist, Scalar rho) {
  if (U.pois() != dist.pois() || U.agents() != dist.agents())
    throw DimensionMismatch("membership and distance tables differ in shape");
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < dist.pois(); ++i)
    for (Index j = 0; j < dist.agents(); ++j)
      if (dist(i, j) > rho) pairs.emplace_back(i, j);
  return pairs;
}

}  // namespace pcm

#endif  // PCM_MEMBERSHIP_HPP
