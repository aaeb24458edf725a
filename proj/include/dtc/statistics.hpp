#pragma once

#include <cstdint>
#include <span>

namespace dtc {

/// Streaming mean and variance (Welford), mergeable with Chan's update.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  /// Standard error of the mean; 0 for fewer than two samples.
  double standard_error() const;

  static RunningStats of(std::span<const double> xs);

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace dtc
