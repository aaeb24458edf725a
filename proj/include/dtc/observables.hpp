#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dtc/evolution.hpp"
#include "dtc/state_vector.hpp"

namespace dtc {

/// Autocorrelator of one qubit sampled at even Floquet periods.
///
/// values[i] is the running minimum over n' <= n of
/// |<sigma^z_k(0)> <sigma^z_k(2n'T)>| at sample_periods[i] = 2n.
struct AutocorrelatorTrace {
  int qubit{};
  double period{1.0};                        // T, for converting to time
  std::vector<std::int64_t> sample_periods;  // 0, 2, 4, ...
  std::vector<double> expectations;          // <sigma^z_k> at each sample
  std::vector<double> values;                // running-minimum Z_k
  double initial_expectation{};

  /// Zero initial expectation makes the trace identically 0.
  bool degenerate() const { return initial_expectation == 0.0; }
  double final_value() const { return values.empty() ? 0.0 : values.back(); }
};

/// First even period at which Z drops below the threshold, if any.
struct Lifetime {
  int qubit{};
  double threshold{0.1};
  std::optional<std::int64_t> periods;  // nullopt: not within the horizon

  bool bounded() const { return periods.has_value(); }
};

inline constexpr double kDefaultLifetimeThreshold = 0.1;

/// Evolves `initial` for `n_periods` (even, >= 2) and records one trace per
/// requested qubit.
std::vector<AutocorrelatorTrace> record_trace(StateVector initial,
                                              const FloquetStepPlan& plan,
                                              std::span<const int> qubits,
                                              std::int64_t n_periods);

Lifetime lifetime(const AutocorrelatorTrace& trace,
                  double threshold = kDefaultLifetimeThreshold);

/// Streams the evolution without storing a trace and stops as soon as Z_k
/// drops below `threshold` or `max_periods` is reached.
Lifetime evolve_until_decay(StateVector initial, const FloquetStepPlan& plan,
                            int qubit, std::int64_t max_periods,
                            double threshold = kDefaultLifetimeThreshold);

/// Z_edge - Z_bulk at the common horizon.
double fspt_diagnostic(const AutocorrelatorTrace& edge, const AutocorrelatorTrace& bulk);

/// Bulk qubit for phase diagrams: 3 on four sites, the nearest interior
/// site past the middle in general.
int bulk_qubit(int L);

/// Qubit ceil(L/2) used for lifetime scaling.
int scaling_qubit(int L);

}  // namespace dtc
