#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "egf/detail/linalg.hpp"
#include "egf/errors.hpp"
#include "egf/model.hpp"

namespace egf {

enum class InterpScheme { FullLagrange, PiecewiseLinear };

inline const char* to_string(InterpScheme s) {
  return s == InterpScheme::FullLagrange ? "lagrange" : "linear";
}

/// Knot models plus the parameter to interpolate to. All knots must share the
/// grid and the rank, with pairwise distinct parameters.
struct InterpolationSet {
  std::vector<EgfModel> knots;
  double target_theta = 0.0;

  void validate() const {
    if (knots.size() < 2) throw InvalidArgumentError("InterpolationSet: need at least 2 knots");
    for (size_t j = 1; j < knots.size(); ++j) {
      if (!same_grid(knots[j].grid, knots[0].grid))
        throw InvalidArgumentError("InterpolationSet: knot grids differ");
      if (knots[j].rank() != knots[0].rank())
        throw InvalidArgumentError("InterpolationSet: knot ranks differ");
    }
    for (size_t i = 0; i < knots.size(); ++i)
      for (size_t j = i + 1; j < knots.size(); ++j)
        if (knots[i].theta == knots[j].theta)
          throw InvalidArgumentError("InterpolationSet: knot parameters must be distinct");
  }
};

/// Horizontal tangent vector at the interpolation origin.
struct TangentVector {
  Eigen::MatrixXd gamma;  // n_sensors x k
};

// Index of the knot nearest to the target parameter; ties toward smaller theta.
inline int select_origin(const InterpolationSet& set) {
  set.validate();
  int best = 0;
  for (size_t j = 1; j < set.knots.size(); ++j) {
    const double dj = std::abs(set.knots[j].theta - set.target_theta);
    const double db = std::abs(set.knots[best].theta - set.target_theta);
    if (dj < db || (dj == db && set.knots[j].theta < set.knots[best].theta))
      best = static_cast<int>(j);
  }
  return best;
}

// Flips any knot column whose W-inner product with the same-index origin
// column is negative. Zero inner products keep the existing sign.
inline InterpolationSet align_signs(InterpolationSet set, int origin) {
  const EgfModel& org = set.knots.at(static_cast<size_t>(origin));
  const Eigen::MatrixXd worg = org.grid.weights.asDiagonal() * org.phi;  // W Phi_hat
  for (size_t j = 0; j < set.knots.size(); ++j) {
    if (static_cast<int>(j) == origin) continue;
    EgfModel& knot = set.knots[j];
    for (Eigen::Index k = 0; k < knot.rank(); ++k)
      if (knot.phi.col(k).dot(worg.col(k)) < 0.0) knot.phi.col(k) = -knot.phi.col(k);
  }
  return set;
}

// Greedy mode matching against the origin: for k = 1..K in order, each knot
// position k takes its unclaimed column of largest |W-inner product| with
// origin mode k. Columns and coefficients are permuted together.
inline InterpolationSet match_modes(InterpolationSet set, int origin) {
  const EgfModel& org = set.knots.at(static_cast<size_t>(origin));
  const Eigen::MatrixXd worg = org.grid.weights.asDiagonal() * org.phi;
  const Eigen::Index rank = org.rank();
  for (size_t j = 0; j < set.knots.size(); ++j) {
    if (static_cast<int>(j) == origin) continue;
    EgfModel& knot = set.knots[j];
    const Eigen::MatrixXd overlap = (worg.transpose() * knot.phi).cwiseAbs();  // k x l
    std::vector<bool> claimed(static_cast<size_t>(rank), false);
    std::vector<Eigen::Index> pick(static_cast<size_t>(rank));
    for (Eigen::Index k = 0; k < rank; ++k) {
      Eigen::Index best = -1;
      double best_val = -1.0;
      for (Eigen::Index l = 0; l < rank; ++l) {
        if (claimed[static_cast<size_t>(l)]) continue;
        if (overlap(k, l) > best_val) {
          best_val = overlap(k, l);
          best = l;
        }
      }
      claimed[static_cast<size_t>(best)] = true;
      pick[static_cast<size_t>(k)] = best;
    }
    Eigen::MatrixXd phi(knot.phi.rows(), rank);
    Eigen::VectorXd sigma(rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
      phi.col(k) = knot.phi.col(pick[static_cast<size_t>(k)]);
      sigma(k) = knot.sigma(pick[static_cast<size_t>(k)]);
    }
    knot.phi = std::move(phi);
    knot.sigma = std::move(sigma);
  }
  return set;
}

// Gamma = Psi_j - Psi_hat sym(Psi_hat^T Psi_j) with Psi = W^{1/2} Phi; the
// result is horizontal at the origin and vanishes for the origin itself.
inline TangentVector lift(const EgfModel& knot, const EgfModel& origin) {
  if (!same_grid(knot.grid, origin.grid) || knot.rank() != origin.rank())
    throw ShapeError("lift: knot and origin must share grid and rank");
  const Eigen::MatrixXd psi_j = detail::scale_rows_sqrt(knot.grid.weights, knot.phi);
  const Eigen::MatrixXd psi_o = detail::scale_rows_sqrt(origin.grid.weights, origin.phi);
  const Eigen::MatrixXd y = psi_o.transpose() * psi_j;
  return TangentVector{psi_j - psi_o * (0.5 * (y + y.transpose()))};
}

namespace detail {

inline std::vector<double> lagrange_weights(const std::vector<double>& thetas, double target) {
  const size_t n = thetas.size();
  std::vector<double> w(n, 1.0);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i)
      if (i != j) w[j] *= (target - thetas[i]) / (thetas[j] - thetas[i]);
  return w;
}

// Weights for interpolation on the two bracketing knots (the nearest two when
// the target lies outside the knot range).
inline std::vector<double> piecewise_linear_weights(const std::vector<double>& thetas,
                                                    double target) {
  const size_t n = thetas.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return thetas[a] < thetas[b]; });
  size_t lo = order[0], hi = order[1];
  if (target <= thetas[order[0]]) {
    lo = order[0];
    hi = order[1];
  } else if (target >= thetas[order[n - 1]]) {
    lo = order[n - 2];
    hi = order[n - 1];
  } else {
    for (size_t i = 0; i + 1 < n; ++i) {
      if (target >= thetas[order[i]] && target <= thetas[order[i + 1]]) {
        lo = order[i];
        hi = order[i + 1];
        break;
      }
    }
  }
  std::vector<double> w(n, 0.0);
  const double t = (target - thetas[lo]) / (thetas[hi] - thetas[lo]);
  w[lo] = 1.0 - t;
  w[hi] = t;
  return w;
}

inline std::vector<double> interpolation_weights(const std::vector<double>& thetas, double target,
                                                 InterpScheme scheme) {
  if (thetas.size() < 2)
    throw InvalidArgumentError("interpolation: need at least 2 knots");
  for (size_t i = 0; i < thetas.size(); ++i)
    for (size_t j = i + 1; j < thetas.size(); ++j)
      if (thetas[i] == thetas[j])
        throw InvalidArgumentError("interpolation: knot parameters must be distinct");
  // reproduce knots exactly
  for (size_t j = 0; j < thetas.size(); ++j) {
    if (target == thetas[j]) {
      std::vector<double> w(thetas.size(), 0.0);
      w[j] = 1.0;
      return w;
    }
  }
  return scheme == InterpScheme::FullLagrange ? lagrange_weights(thetas, target)
                                              : piecewise_linear_weights(thetas, target);
}

}  // namespace detail

// Entrywise polynomial interpolation of tangent vectors.
inline TangentVector interpolate_tangent(const std::vector<TangentVector>& gammas,
                                         const std::vector<double>& thetas, double target,
                                         InterpScheme scheme) {
  if (gammas.size() != thetas.size())
    throw ShapeError("interpolate_tangent: one parameter per tangent vector required");
  const std::vector<double> w = detail::interpolation_weights(thetas, target, scheme);
  TangentVector out;
  out.gamma = Eigen::MatrixXd::Zero(gammas[0].gamma.rows(), gammas[0].gamma.cols());
  for (size_t j = 0; j < gammas.size(); ++j) {
    if (gammas[j].gamma.rows() != out.gamma.rows() || gammas[j].gamma.cols() != out.gamma.cols())
      throw ShapeError("interpolate_tangent: tangent vector shapes differ");
    if (w[j] != 0.0) out.gamma += w[j] * gammas[j].gamma;
  }
  return out;
}

// Q factor of qr(Psi_hat + Gamma) under the R_ii >= 0 convention.
inline Eigen::MatrixXd retract(const EgfModel& origin, const TangentVector& gamma) {
  const Eigen::MatrixXd psi_o = detail::scale_rows_sqrt(origin.grid.weights, origin.phi);
  if (gamma.gamma.rows() != psi_o.rows() || gamma.gamma.cols() != psi_o.cols())
    throw ShapeError("retract: tangent vector shape differs from origin basis");
  const detail::ThinQr qr = detail::qr_positive(psi_o + gamma.gamma);
  const double rmax = qr.r.diagonal().cwiseAbs().maxCoeff();
  if (!(rmax > 0.0) ||
      qr.r.diagonal().cwiseAbs().minCoeff() <=
          1e3 * std::numeric_limits<double>::epsilon() * rmax * static_cast<double>(psi_o.rows()))
    throw RankError("retract: Psi_hat + Gamma is numerically rank deficient");
  return qr.q;
}

// Full pipeline: origin selection, mode matching, sign alignment, tangent
// lifts, entrywise interpolation of tangents and coefficients with the same
// scheme, QR retraction, and reordering of the output to match the origin.
inline EgfModel interpolate_egf(const InterpolationSet& raw, InterpScheme scheme) {
  raw.validate();
  const int origin_idx = select_origin(raw);
  // matching first, then sign alignment of the matched pairs; this order makes
  // the result invariant to column sign flips and permutations of the inputs
  const InterpolationSet set = align_signs(match_modes(raw, origin_idx), origin_idx);
  const EgfModel& origin = set.knots[static_cast<size_t>(origin_idx)];

  std::vector<TangentVector> gammas;
  std::vector<double> thetas;
  gammas.reserve(set.knots.size());
  for (const EgfModel& knot : set.knots) {
    gammas.push_back(lift(knot, origin));
    thetas.push_back(knot.theta);
  }

  const TangentVector gamma_star = interpolate_tangent(gammas, thetas, set.target_theta, scheme);
  const std::vector<double> w = detail::interpolation_weights(thetas, set.target_theta, scheme);
  Eigen::VectorXd sigma_star = Eigen::VectorXd::Zero(origin.rank());
  for (size_t j = 0; j < set.knots.size(); ++j)
    if (w[j] != 0.0) sigma_star += w[j] * set.knots[j].sigma;

  const Eigen::MatrixXd psi_star = retract(origin, gamma_star);

  EgfModel out;
  out.grid = origin.grid;
  out.theta = set.target_theta;
  out.provenance = Provenance::Interpolated;
  out.phi = detail::scale_rows_inv_sqrt(origin.grid.weights, psi_star);
  out.sigma = sigma_star;

  // order the output against the origin basis, then restore the descending
  // |sigma| invariant
  InterpolationSet pair;
  pair.knots = {origin, out};
  pair.target_theta = set.target_theta;
  pair = align_signs(match_modes(pair, 0), 0);
  out = pair.knots[1];
  out.theta = set.target_theta;
  out.provenance = Provenance::Interpolated;

  std::vector<Eigen::Index> order(static_cast<size_t>(out.rank()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(out.sigma(a)) > std::abs(out.sigma(b));
  });
  EgfModel sorted = out;
  for (Eigen::Index i = 0; i < out.rank(); ++i) {
    sorted.phi.col(i) = out.phi.col(order[static_cast<size_t>(i)]);
    sorted.sigma(i) = out.sigma(order[static_cast<size_t>(i)]);
  }
  return sorted;
}

}  // namespace egf
