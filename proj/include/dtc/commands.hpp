#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dtc/config.hpp"

namespace dtc {

/// Flags shared by every subcommand; they override the config file.
struct CommandOptions {
  int workers = 1;
  /// Output path; empty means the config's "output", and "-" or an empty
  /// config value mean standard output.
  std::string output;
  std::optional<OutputFormat> format;
  /// Continue an interrupted CSV sweep from its last complete cell.
  bool resume = false;
};

/// Single-cell evolution; writes time,qubit,expectation,running_min_Z for
/// every period 0..horizon.
void cmd_evolve(const RunConfig& config, const CommandOptions& options);

/// Phase-diagram grid; one record per (cell, observable).
void cmd_sweep(const RunConfig& config, const CommandOptions& options);

/// Lifetime-vs-L campaign plus the log-linear fit. CSV output writes the
/// per-L table to the output path and the fit next to it as <stem>.fit.csv.
void cmd_scaling(const RunConfig& config, const CommandOptions& options);

/// Sweep with a leading h2i_pulses axis {0, pulses...}. Cells with 0 pulses
/// are the Ising reference; positive counts switch to the Heisenberg model.
void cmd_h2i(const RunConfig& config, const CommandOptions& options);

/// Campaign the h2i command runs for `config`.
CampaignSpec h2i_campaign(const RunConfig& config);

/// Where the fit table of a scaling run goes for a given per-L path.
std::filesystem::path fit_path_for(const std::filesystem::path& points_path);

}  // namespace dtc
