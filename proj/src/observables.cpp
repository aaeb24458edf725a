#include "dtc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dtc/errors.hpp"

namespace dtc {

std::vector<AutocorrelatorTrace> record_trace(StateVector initial,
                                              const FloquetStepPlan& plan,
                                              std::span<const int> qubits,
                                              std::int64_t n_periods) {
  if (n_periods < 2 || n_periods % 2 != 0) {
    throw InvalidInput("n_periods must be even and >= 2, got " +
                       std::to_string(n_periods));
  }
  if (qubits.empty()) throw InvalidInput("no qubits requested");

  std::vector<AutocorrelatorTrace> traces(qubits.size());
  const auto n_samples = static_cast<std::size_t>(n_periods / 2 + 1);
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    auto& trace = traces[i];
    trace.qubit = qubits[i];
    trace.period = plan.period;
    trace.initial_expectation = initial.expect_z(qubits[i]);
    trace.sample_periods.reserve(n_samples);
    trace.expectations.reserve(n_samples);
    trace.values.reserve(n_samples);
    trace.sample_periods.push_back(0);
    trace.expectations.push_back(trace.initial_expectation);
    trace.values.push_back(std::abs(trace.initial_expectation * trace.initial_expectation));
  }

  StateVector& state = initial;
  for (std::int64_t period = 1; period <= n_periods; ++period) {
    apply_period(state, plan);
    if (period % 2 != 0) continue;
    for (auto& trace : traces) {
      const double z = state.expect_z(trace.qubit);
      const double overlap = std::abs(trace.initial_expectation * z);
      trace.sample_periods.push_back(period);
      trace.expectations.push_back(z);
      trace.values.push_back(std::min(trace.values.back(), overlap));
    }
  }
  return traces;
}

Lifetime lifetime(const AutocorrelatorTrace& trace, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidInput("lifetime threshold must lie in (0, 1)");
  }
  Lifetime result{trace.qubit, threshold, std::nullopt};
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    if (trace.values[i] < threshold) {
      result.periods = trace.sample_periods[i];
      break;
    }
  }
  return result;
}

Lifetime evolve_until_decay(StateVector initial, const FloquetStepPlan& plan,
                            int qubit, std::int64_t max_periods, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidInput("lifetime threshold must lie in (0, 1)");
  }
  if (max_periods < 0) throw InvalidInput("max_periods must be >= 0");
  Lifetime result{qubit, threshold, std::nullopt};
  const double z0 = initial.expect_z(qubit);
  if (std::abs(z0 * z0) < threshold) {
    result.periods = 0;
    return result;
  }
  // The running minimum falls below the threshold exactly when one sample does.
  for (std::int64_t period = 1; period <= max_periods; ++period) {
    apply_period(initial, plan);
    if (period % 2 != 0) continue;
    if (std::abs(z0 * initial.expect_z(qubit)) < threshold) {
      result.periods = period;
      return result;
    }
  }
  return result;
}

double fspt_diagnostic(const AutocorrelatorTrace& edge, const AutocorrelatorTrace& bulk) {
  if (edge.sample_periods != bulk.sample_periods) {
    throw InvalidInput("fspt_diagnostic: traces have different sample times");
  }
  if (edge.values.empty()) throw InvalidInput("fspt_diagnostic: empty traces");
  return edge.values.back() - bulk.values.back();
}

int bulk_qubit(int L) {
  if (L < 1) throw InvalidInput("chain length must be >= 1");
  if (L <= 2) return 1;
  return std::min(L / 2 + 1, L - 1);
}

int scaling_qubit(int L) {
  if (L < 1) throw InvalidInput("chain length must be >= 1");
  return (L + 1) / 2;
}

}  // namespace dtc
