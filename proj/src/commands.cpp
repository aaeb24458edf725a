#include "dtc/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "dtc/errors.hpp"
#include "dtc/observables.hpp"
#include "dtc/records.hpp"

namespace dtc {

namespace {

std::string resolve_output(const RunConfig& config, const CommandOptions& options) {
  const std::string path = options.output.empty() ? config.output : options.output;
  return path.empty() ? "-" : path;
}

OutputFormat resolve_format(const RunConfig& config, const CommandOptions& options) {
  return options.format.value_or(config.format);
}

// Writes `text` to a file (truncating) or to stdout for "-".
void write_all(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

std::vector<std::string> axis_names(const CampaignSpec& spec) {
  std::vector<std::string> names;
  for (const auto& axis : spec.axes) names.emplace_back(to_string(axis.parameter));
  return names;
}

std::vector<int> trace_qubits(const RunConfig& config) {
  std::set<int> qubits;
  const int L = config.drive.L;
  for (const auto& obs : config.observables) {
    if (obs.kind == ObservableId::Kind::kFspt) {
      qubits.insert(1);
      qubits.insert(bulk_qubit(L));
    } else {
      qubits.insert(obs.qubit == 0 ? bulk_qubit(L) : obs.qubit);
    }
  }
  for (int k : qubits) {
    if (k > L) {
      throw ConfigError("observable qubit " + std::to_string(k) + " exceeds L=" +
                        std::to_string(L));
    }
  }
  return {qubits.begin(), qubits.end()};
}

// Checks an existing partial sweep file against the campaign and returns the
// number of complete cells it holds.
std::size_t resume_point(const std::string& path, const CampaignSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return 0;
  RecordTable table;
  try {
    table = read_sweep_csv(in);
  } catch (const std::exception& e) {
    throw ConfigError("cannot resume from " + path + ": " + e.what());
  }
  if (table.axis_names != axis_names(spec)) {
    throw ConfigError("cannot resume from " + path + ": axis columns differ from config");
  }
  const std::size_t n_obs = spec.observables.size();
  const std::size_t complete = table.records.size() / n_obs;
  for (std::size_t i = 0; i < complete * n_obs; ++i) {
    const auto& r = table.records[i];
    const std::size_t cell = i / n_obs;
    const auto expected = spec.cell_coordinates(cell);
    bool same = r.seed == spec.seed && r.observable == spec.observables[i % n_obs].name() &&
                r.coordinates.size() == expected.size();
    for (std::size_t a = 0; same && a < expected.size(); ++a) {
      same = format_axis_value(r.coordinates[a]) == format_axis_value(expected[a]);
    }
    if (!same) {
      throw ConfigError("cannot resume from " + path + ": record " + std::to_string(i + 1) +
                        " does not match cell " + std::to_string(cell) + " of this config");
    }
  }
  // Drop any trailing partial cell.
  std::string text = sweep_csv_header(table.axis_names) + "\n";
  for (std::size_t i = 0; i < complete * n_obs; ++i) text += sweep_csv_row(table.records[i]) + "\n";
  write_all(path, text);
  return complete;
}

void run_sweep_campaign(const std::string& command, const RunConfig& config,
                        const CampaignSpec& spec, const CommandOptions& options) {
  spec.validate();
  const auto path = resolve_output(config, options);
  const auto format = resolve_format(config, options);
  const auto names = axis_names(spec);
  CampaignOptions run;
  run.workers = options.workers;

  if (format == OutputFormat::kJson) {
    if (options.resume) throw ConfigError("--resume needs CSV output");
    const auto records = run_campaign(spec, run);
    write_all(path, sweep_records_json(names, records,
                                       metadata_json(command, resolved_config_json(config))));
    return;
  }

  if (path == "-") {
    if (options.resume) throw ConfigError("--resume needs an output file");
    std::cout << sweep_csv_header(names) << "\n";
    run.on_cell = [](std::span<const SweepRecord> records) {
      for (const auto& r : records) std::cout << sweep_csv_row(r) << "\n";
      std::cout.flush();
    };
    run_campaign(spec, run);
    return;
  }

  std::ofstream out;
  if (options.resume && std::filesystem::exists(path)) {
    run.first_cell = resume_point(path, spec);
    out.open(path, std::ios::binary | std::ios::app);
  } else {
    out.open(path, std::ios::binary | std::ios::trunc);
    out << sweep_csv_header(names) << "\n";
  }
  if (!out) throw std::runtime_error("cannot open output file " + path);
  // Append and flush per completed cell so an interrupted campaign can resume.
  run.on_cell = [&out, &path](std::span<const SweepRecord> records) {
    for (const auto& r : records) out << sweep_csv_row(r) << "\n";
    if (!out.flush()) throw std::runtime_error("failed writing " + path);
  };
  run_campaign(spec, run);
}

}  // namespace

std::filesystem::path fit_path_for(const std::filesystem::path& points_path) {
  auto fit = points_path;
  fit.replace_filename(points_path.stem().string() + ".fit" +
                       (points_path.has_extension() ? points_path.extension().string()
                                                    : std::string(".csv")));
  return fit;
}

void cmd_evolve(const RunConfig& config, const CommandOptions& options) {
  if (!config.axes.empty()) throw ConfigError("evolve runs a single cell; remove \"axes\"");
  if (config.initial_state == "all" || config.initial_state.starts_with("random:")) {
    throw ConfigError("evolve needs one initial state, got '" + config.initial_state + "'");
  }
  CampaignSpec spec;
  spec.base = config.drive;
  spec.initial_state = config.initial_state;
  spec.observables = config.observables;
  spec.horizon = config.horizon;
  spec.realizations = 1;
  spec.seed = config.seed;
  spec.work_budget = config.work_budget;
  spec.validate();

  const auto qubits = trace_qubits(config);
  // Realization 0 of cell 0: the same draw a one-cell sweep makes first.
  const auto run = prepare_realization(spec, 0, 0);
  StateVector state = StateVector::basis(run.initial_label);

  std::vector<TraceRow> rows;
  rows.reserve(static_cast<std::size_t>(config.horizon + 1) * qubits.size());
  std::vector<double> initial(qubits.size());
  std::vector<double> running(qubits.size());
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    initial[i] = state.expect_z(qubits[i]);
    running[i] = std::abs(initial[i] * initial[i]);
    rows.push_back({0, qubits[i], initial[i], running[i]});
  }
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    apply_period(state, run.plan);
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      const double z = state.expect_z(qubits[i]);
      if (t % 2 == 0) running[i] = std::min(running[i], std::abs(initial[i] * z));
      rows.push_back({t, qubits[i], z, running[i]});
    }
  }

  const auto path = resolve_output(config, options);
  if (resolve_format(config, options) == OutputFormat::kJson) {
    write_all(path, trace_rows_json(rows, metadata_json("evolve", resolved_config_json(config))));
    return;
  }
  std::string text = trace_csv_header() + "\n";
  for (const auto& row : rows) text += trace_csv_row(row) + "\n";
  write_all(path, text);
}

void cmd_sweep(const RunConfig& config, const CommandOptions& options) {
  RunConfig resolved = config;
  if (!resolved.axes_given) {
    resolved.axes = {default_epsilon_axis()};
    resolved.axes_given = true;
  }
  run_sweep_campaign("sweep", resolved, to_campaign(resolved), options);
}

CampaignSpec h2i_campaign(const RunConfig& config) {
  for (const auto& axis : config.axes) {
    if (axis.parameter == AxisParameter::kH2IPulses) {
      throw ConfigError("h2i adds its own h2i_pulses axis; remove it from \"axes\"");
    }
  }
  for (int n : config.h2i_pulse_counts) {
    if (n < 2 || n % 2 != 0) {
      throw ConfigError("h2i pulse counts must be even and >= 2, got " + std::to_string(n));
    }
  }
  RunConfig reference = config;
  reference.drive.model = ModelKind::kIsing;
  reference.drive.h2i_pulses = 0;
  std::vector<double> pulses{0.0};
  for (int n : config.h2i_pulse_counts) pulses.push_back(n);
  reference.axes.insert(reference.axes.begin(),
                        SweepAxis::list(AxisParameter::kH2IPulses, pulses));
  return to_campaign(reference);
}

void cmd_h2i(const RunConfig& config, const CommandOptions& options) {
  run_sweep_campaign("h2i", config, h2i_campaign(config), options);
}

void cmd_scaling(const RunConfig& config, const CommandOptions& options) {
  ScalingFit fit;
  if (!config.synthetic_lifetimes.empty()) {
    fit = fit_log_least_squares(config.synthetic_lifetimes);
    for (const auto& [L, t] : config.synthetic_lifetimes) {
      fit.points.push_back({static_cast<int>(L), t, 0.0, 1, 0});
    }
  } else {
    fit = lifetime_scaling_campaign(to_scaling(config), options.workers);
  }

  const auto path = resolve_output(config, options);
  if (resolve_format(config, options) == OutputFormat::kJson) {
    write_all(path, scaling_json(fit, config.seed,
                                 metadata_json("scaling", resolved_config_json(config))));
    return;
  }
  if (path == "-") {
    write_all(path, scaling_points_csv(fit, config.seed) + "\n" +
                        scaling_fit_csv(fit, config.seed));
    return;
  }
  write_all(path, scaling_points_csv(fit, config.seed));
  write_all(fit_path_for(path).string(), scaling_fit_csv(fit, config.seed));
}

}  // namespace dtc
