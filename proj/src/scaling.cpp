#include "dtc/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "dtc/errors.hpp"
#include "dtc/evolution.hpp"
#include "dtc/state_vector.hpp"
#include "dtc/statistics.hpp"

namespace dtc {

ScalingFit fit_log_least_squares(std::span<const std::pair<double, double>> pairs) {
  std::set<double> distinct;
  for (const auto& [L, t] : pairs) {
    if (!std::isfinite(L) || !std::isfinite(t)) {
      throw InvalidInput("scaling fit needs finite (L, lifetime) pairs");
    }
    if (t <= 0.0) {
      throw InvalidInput("scaling fit needs positive lifetimes, got " + std::to_string(t) +
                         " at L=" + std::to_string(L));
    }
    distinct.insert(L);
  }
  if (distinct.size() < 2) {
    throw InvalidInput("scaling fit needs at least two distinct chain lengths");
  }

  const double n = static_cast<double>(pairs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [L, t] : pairs) {
    mean_x += L;
    mean_y += std::log(t);
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [L, t] : pairs) {
    const double dx = L - mean_x;
    const double dy = std::log(t) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ScalingFit fit;
  fit.rate = sxy / sxx;
  const double intercept = mean_y - fit.rate * mean_x;
  fit.prefactor = std::exp(intercept);
  double ss_res = 0.0;
  for (const auto& [L, t] : pairs) {
    const double r = std::log(t) - (intercept + fit.rate * L);
    ss_res += r * r;
  }
  // A flat response has no variance to explain; a perfect fit then scores 1.
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  fit.n_fitted = static_cast<std::int64_t>(pairs.size());
  return fit;
}

void ScalingSpec::validate() const {
  if (lengths.empty()) throw ConfigError("scaling campaign needs at least one L");
  for (int L : lengths) {
    if (L < 1 || L > StateVector::kMaxQubits) {
      throw ConfigError("scaling length L=" + std::to_string(L) + " out of range");
    }
    if (base.model == ModelKind::kHeisenberg && L > kDenseQubitCap) {
      throw CapacityError("heisenberg scaling at L=" + std::to_string(L) +
                          " exceeds the dense cap L <= " + std::to_string(kDenseQubitCap));
    }
  }
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (horizon_cap < 2) throw ConfigError("horizon_cap must be >= 2");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("lifetime threshold must lie in (0, 1)");
  }
  try {
    auto drive = base;
    drive.L = lengths.front();
    drive.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("scaling base drive: ") + e.what());
  }
}

Lifetime scaling_realization(const ScalingSpec& spec, std::size_t length_index,
                             std::uint64_t realization) {
  auto drive = spec.base;
  drive.L = spec.lengths.at(length_index);
  Rng rng(realization_seed(spec.seed, length_index, realization));
  const auto disorder = sample_realization(drive.distribution, drive.L, rng);
  const auto label = basis_label(rng() >> (64 - drive.L), drive.L);
  const auto plan = compile_step(drive, disorder);
  return evolve_until_decay(StateVector::basis(label), plan, scaling_qubit(drive.L),
                            spec.horizon_cap, spec.threshold);
}

ScalingFit lifetime_scaling_campaign(const ScalingSpec& spec, int workers) {
  spec.validate();
  const std::size_t n_lengths = spec.lengths.size();
  const auto n_real = static_cast<std::size_t>(spec.realizations);
  const std::size_t n_items = n_lengths * n_real;
  std::vector<Lifetime> lifetimes(n_items);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::exception_ptr error;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < std::max(1, workers); ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t item = next.fetch_add(1);
          if (item >= n_items || failed) return;
          try {
            lifetimes[item] = scaling_realization(spec, item / n_real, item % n_real);
          } catch (...) {
            std::lock_guard lock(mutex);
            if (!error) error = std::current_exception();
            failed = true;
            return;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<ScalingPoint> points;
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < n_lengths; ++i) {
    RunningStats stats;
    std::int64_t censored = 0;
    for (std::size_t r = 0; r < n_real; ++r) {
      const auto& life = lifetimes[i * n_real + r];
      if (!life.bounded()) ++censored;
      stats.add(static_cast<double>(life.periods.value_or(spec.horizon_cap)));
    }
    ScalingPoint point{spec.lengths[i], stats.mean(), stats.standard_error(),
                       stats.count(), censored};
    if (!point.censored() && point.mean_lifetime > 0.0) {
      pairs.emplace_back(point.L, point.mean_lifetime);
    }
    points.push_back(point);
  }

  ScalingFit fit;
  std::set<double> distinct;
  for (const auto& p : pairs) distinct.insert(p.first);
  if (distinct.size() >= 2) {
    fit = fit_log_least_squares(pairs);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    fit.prefactor = fit.rate = fit.r_squared = nan;
  }
  fit.points = std::move(points);
  return fit;
}

}  // namespace dtc
