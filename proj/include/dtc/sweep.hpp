#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dtc/evolution.hpp"
#include "dtc/model.hpp"

namespace dtc {

/// Coordinate along one axis: numeric, or a basis label / model name.
using AxisValue = std::variant<double, std::string>;

std::string format_axis_value(const AxisValue& value);

enum class AxisParameter {
  kEpsilon,
  kJ0,
  kSigmaJ,
  kH0,
  kSigmaH,
  kT2,
  kH2IPulses,
  kL,
  kInitialState,
  kModel,
};

std::string_view to_string(AxisParameter parameter);
AxisParameter axis_parameter_from_string(std::string_view name);
bool is_numeric(AxisParameter parameter);

struct SweepAxis {
  AxisParameter parameter{};
  std::vector<AxisValue> values;

  /// `count` evenly spaced points from `min` to `max` inclusive.
  static SweepAxis linear(AxisParameter parameter, double min, double max, int count);
  static SweepAxis list(AxisParameter parameter, std::vector<double> values);
  static SweepAxis labels(AxisParameter parameter, std::vector<std::string> values);

  void validate() const;
};

/// Which quantity a campaign records per realization.
struct ObservableId {
  enum class Kind { kZ, kLifetime, kFspt };

  Kind kind = Kind::kZ;
  /// Qubit index; 0 selects bulk_qubit(L). Unused for kFspt.
  int qubit = 0;

  std::string name() const;
  static ObservableId parse(std::string_view text);

  static ObservableId z(int qubit) { return {Kind::kZ, qubit}; }
  static ObservableId z_bulk() { return {Kind::kZ, 0}; }
  static ObservableId fspt() { return {Kind::kFspt, 0}; }
  static ObservableId lifetime(int qubit = 0) { return {Kind::kLifetime, qubit}; }

  friend bool operator==(const ObservableId&, const ObservableId&) = default;
};

/// Initial state drawn independently per realization.
inline constexpr std::string_view kRandomInitialState = "random";

struct CampaignSpec {
  std::vector<SweepAxis> axes;
  FloquetDriveSpec base;
  /// Basis label such as "1000", or "random" for a fresh uniformly random
  /// basis state per realization.
  std::string initial_state = "1000";
  std::vector<ObservableId> observables{ObservableId::z(1), ObservableId::z_bulk()};
  std::int64_t horizon = 200;
  int realizations = 100;
  std::uint64_t seed = 1;
  /// Cap on cells x realizations x horizon periods.
  double work_budget = 1e10;

  std::size_t cell_count() const;
  /// Coordinates of cell `index`; the last axis varies fastest.
  std::vector<AxisValue> cell_coordinates(std::size_t index) const;
  /// The drive for cell `index` (base with the axis values applied).
  FloquetDriveSpec cell_drive(std::size_t index) const;
  std::string cell_initial_state(std::size_t index) const;

  /// Throws ConfigError for inconsistent cells, CapacityError over budget.
  void validate() const;
};

/// Ensemble average of one observable over one grid cell.
struct SweepRecord {
  std::vector<AxisValue> coordinates;
  std::string observable;
  double mean{};
  double standard_error{};
  std::int64_t n_realizations{};
  std::uint64_t seed{};
};

struct CampaignOptions {
  int workers = 1;
  /// Cells before this index are skipped (resume support).
  std::size_t first_cell = 0;
  /// Called once per finished cell, in cell order, with that cell's records.
  std::function<void(std::span<const SweepRecord>)> on_cell;
};

/// Everything drawn for one (cell, realization) pair of a campaign.
struct PreparedRealization {
  FloquetDriveSpec drive;
  DisorderRealization disorder;
  std::string initial_label;
  FloquetStepPlan plan;
};

/// Draws the disorder (and the initial state when it is "random") from the
/// seed schedule and compiles the Floquet step.
PreparedRealization prepare_realization(const CampaignSpec& spec, std::size_t cell,
                                        std::uint64_t realization);

/// Per-realization observable values of one cell, in `spec.observables` order.
std::vector<double> evaluate_realization(const CampaignSpec& spec, std::size_t cell,
                                         std::uint64_t realization);

/// Runs every cell from `options.first_cell` on and returns their records in
/// cell order. Output is independent of the worker count.
std::vector<SweepRecord> run_campaign(const CampaignSpec& spec,
                                      const CampaignOptions& options = {});

}  // namespace dtc
