#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dtc/observables.hpp"
#include "dtc/scaling.hpp"
#include "dtc/sweep.hpp"

namespace dtc {

/// Floats in every output file are printed with 17 significant digits.
std::string format_double(double value);

// ---- sweep records ---------------------------------------------------------
//
// CSV: axis_1,...,axis_m,observable,mean,stderr,n_realizations,seed
// JSON: {"metadata": {...}, "axes": [...], "records": [{...}, ...]}

std::string sweep_csv_header(std::span<const std::string> axis_names);
std::string sweep_csv_row(const SweepRecord& record);

std::string sweep_records_json(std::span<const std::string> axis_names,
                               std::span<const SweepRecord> records,
                               const std::string& metadata_json);

struct RecordTable {
  std::vector<std::string> axis_names;
  std::vector<SweepRecord> records;
};

/// Parses and schema-checks a sweep CSV. Axis columns whose name is a string
/// axis (initial_state, model) are read as strings, others as numbers.
RecordTable read_sweep_csv(std::istream& in);
RecordTable read_sweep_json(std::istream& in);

// ---- per-period evolution traces -------------------------------------------
//
// CSV: time,qubit,expectation,running_min_Z (time in Floquet periods)

struct TraceRow {
  std::int64_t time{};
  int qubit{};
  double expectation{};
  double running_min_z{};
};

std::string trace_csv_header();
std::string trace_csv_row(const TraceRow& row);
std::string trace_rows_json(std::span<const TraceRow> rows, const std::string& metadata_json);
std::vector<TraceRow> read_trace_csv(std::istream& in);

// ---- lifetime scaling -----------------------------------------------------
//
// per-L CSV: L,mean_lifetime,stderr,n_realizations,n_censored,fitted,seed
// fit CSV:   prefactor,rate,r_squared,n_fitted,seed

std::string scaling_points_csv(const ScalingFit& fit, std::uint64_t seed);
std::string scaling_fit_csv(const ScalingFit& fit, std::uint64_t seed);
std::string scaling_json(const ScalingFit& fit, std::uint64_t seed,
                         const std::string& metadata_json);
ScalingFit read_scaling_fit_csv(std::istream& in);

/// Metadata block shared by all JSON outputs: resolved config, code version
/// and a timestamp (SOURCE_DATE_EPOCH when set, for reproducible files).
std::string metadata_json(const std::string& command, const std::string& config_json);

}  // namespace dtc
