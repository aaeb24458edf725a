#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtc/model.hpp"
#include "dtc/scaling.hpp"
#include "dtc/sweep.hpp"

namespace dtc {

enum class OutputFormat { kCsv, kJson };

std::string_view to_string(OutputFormat format);
OutputFormat output_format_from_string(std::string_view name);

/// A fully resolved run configuration.
///
/// Parsed from a JSON object. Unknown keys are rejected. Every field has a
/// default; the drive defaults are the four-qubit charge-noise setup
/// (L=4, t1=t2=1, J0=5, sigma_J=3, h0=2e4, sigma_h=50), 200 periods and
/// 100 realizations.
struct RunConfig {
  std::string description;
  FloquetDriveSpec drive;
  /// Basis label, "all" (every basis state as an axis), "random" (fresh
  /// state per realization) or "random:N" (N labels drawn once, as an axis).
  std::string initial_state = "1000";
  std::vector<ObservableId> observables{ObservableId::z(1), ObservableId::z_bulk()};
  std::int64_t horizon = 200;
  int realizations = 100;
  std::uint64_t seed = 1;
  std::vector<SweepAxis> axes;
  /// False when the file has no "axes" key; sweeps then scan epsilon.
  bool axes_given = false;
  std::string output;
  OutputFormat format = OutputFormat::kCsv;
  double work_budget = 1e10;

  // scaling
  std::vector<int> scaling_lengths{3, 4, 5, 6};
  std::int64_t horizon_cap = 10'000'000;
  double threshold = kDefaultLifetimeThreshold;
  /// (L, lifetime) pairs that replace simulation in the scaling command.
  std::vector<std::pair<double, double>> synthetic_lifetimes;

  // h2i
  std::vector<int> h2i_pulse_counts{8, 64, 256};
};

/// Default epsilon axis used by sweeps whose config has no "axes" key.
SweepAxis default_epsilon_axis();

/// Parses JSON text. Errors name the source, the line and the offending key.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// The resolved configuration (every default filled in) as JSON text.
std::string resolved_config_json(const RunConfig& config);

/// Campaign for the sweep command. Expands "all" and "random:N" initial
/// states into an initial_state axis.
CampaignSpec to_campaign(const RunConfig& config);

ScalingSpec to_scaling(const RunConfig& config);

}  // namespace dtc
