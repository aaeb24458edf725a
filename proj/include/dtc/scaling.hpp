#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dtc/model.hpp"
#include "dtc/observables.hpp"

namespace dtc {

/// Mean lifetime of the scaling qubit at one chain length.
struct ScalingPoint {
  int L{};
  double mean_lifetime{};
  double standard_error{};
  std::int64_t n_realizations{};
  /// Realizations that never decayed within the horizon cap; they enter the
  /// mean at the cap, so the mean is only a lower bound.
  std::int64_t n_censored{};

  bool censored() const { return n_censored > 0; }
};

/// Fit of log <t_L> = log(prefactor) + rate * L.
struct ScalingFit {
  double prefactor{};
  double rate{};
  double r_squared{};
  std::vector<ScalingPoint> points;
  std::int64_t n_fitted{};
};

/// Ordinary least squares on (L, log t). Needs at least two distinct L and
/// positive finite lifetimes.
ScalingFit fit_log_least_squares(std::span<const std::pair<double, double>> pairs);

struct ScalingSpec {
  std::vector<int> lengths{3, 4, 5, 6};
  /// epsilon 0.10 and random basis initial states; the disorder law is free.
  FloquetDriveSpec base;
  int realizations = 100;
  std::uint64_t seed = 1;
  std::int64_t horizon_cap = 10'000'000;
  double threshold = kDefaultLifetimeThreshold;

  void validate() const;
};

/// Lifetime of one realization: random disorder and random basis state.
Lifetime scaling_realization(const ScalingSpec& spec, std::size_t length_index,
                             std::uint64_t realization);

/// Mean lifetimes per L and the log-linear fit over the uncensored lengths.
/// Fit fields are NaN when fewer than two lengths are uncensored.
ScalingFit lifetime_scaling_campaign(const ScalingSpec& spec, int workers = 1);

}  // namespace dtc
