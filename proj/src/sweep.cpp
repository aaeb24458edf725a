#include "dtc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "dtc/errors.hpp"
#include "dtc/evolution.hpp"
#include "dtc/observables.hpp"
#include "dtc/state_vector.hpp"
#include "dtc/statistics.hpp"

namespace dtc {

namespace {

struct AxisName {
  AxisParameter parameter;
  std::string_view name;
};

constexpr AxisName kAxisNames[] = {
    {AxisParameter::kEpsilon, "epsilon"},
    {AxisParameter::kJ0, "J0"},
    {AxisParameter::kSigmaJ, "sigma_J"},
    {AxisParameter::kH0, "h0"},
    {AxisParameter::kSigmaH, "sigma_h"},
    {AxisParameter::kT2, "t2"},
    {AxisParameter::kH2IPulses, "h2i_pulses"},
    {AxisParameter::kL, "L"},
    {AxisParameter::kInitialState, "initial_state"},
    {AxisParameter::kModel, "model"},
};

int as_integer(const AxisValue& value, AxisParameter parameter) {
  const double x = std::get<double>(value);
  if (x != std::floor(x)) {
    throw ConfigError(std::string(to_string(parameter)) + " axis value " +
                      format_axis_value(value) + " is not an integer");
  }
  return static_cast<int>(x);
}

void apply_axis(FloquetDriveSpec& drive, std::string& initial, AxisParameter parameter,
                const AxisValue& value) {
  switch (parameter) {
    case AxisParameter::kEpsilon: drive.epsilon = std::get<double>(value); break;
    case AxisParameter::kJ0: drive.distribution.J0 = std::get<double>(value); break;
    case AxisParameter::kSigmaJ: drive.distribution.sigma_J = std::get<double>(value); break;
    case AxisParameter::kH0: drive.distribution.h0 = std::get<double>(value); break;
    case AxisParameter::kSigmaH: drive.distribution.sigma_h = std::get<double>(value); break;
    case AxisParameter::kT2: drive.t2 = std::get<double>(value); break;
    case AxisParameter::kH2IPulses:
      // A positive pulse count implies the Heisenberg exchange; 0 keeps the
      // base model, which is how the Ising reference enters an H2I study.
      drive.h2i_pulses = as_integer(value, parameter);
      if (drive.h2i_pulses > 0) drive.model = ModelKind::kHeisenberg;
      break;
    case AxisParameter::kL: drive.L = as_integer(value, parameter); break;
    case AxisParameter::kInitialState: initial = std::get<std::string>(value); break;
    case AxisParameter::kModel:
      drive.model = model_kind_from_string(std::get<std::string>(value));
      break;
  }
}

std::uint64_t draw_basis_index(Rng& rng, int L) {
  return rng() >> (64 - L);
}

std::vector<int> qubits_needed(const std::vector<ObservableId>& observables, int L) {
  std::set<int> qubits;
  for (const auto& obs : observables) {
    if (obs.kind == ObservableId::Kind::kFspt) {
      qubits.insert(1);
      qubits.insert(bulk_qubit(L));
    } else {
      qubits.insert(obs.qubit == 0 ? bulk_qubit(L) : obs.qubit);
    }
  }
  return {qubits.begin(), qubits.end()};
}

}  // namespace

std::string format_axis_value(const AxisValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", std::get<double>(value));
  return buffer;
}

std::string_view to_string(AxisParameter parameter) {
  for (const auto& entry : kAxisNames) {
    if (entry.parameter == parameter) return entry.name;
  }
  return "?";
}

AxisParameter axis_parameter_from_string(std::string_view name) {
  for (const auto& entry : kAxisNames) {
    if (entry.name == name) return entry.parameter;
  }
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

bool is_numeric(AxisParameter parameter) {
  return parameter != AxisParameter::kInitialState && parameter != AxisParameter::kModel;
}

SweepAxis SweepAxis::linear(AxisParameter parameter, double min, double max, int count) {
  if (count < 1) throw ConfigError("axis point count must be >= 1");
  SweepAxis axis{parameter, {}};
  for (int i = 0; i < count; ++i) {
    const double x = count == 1 ? min : min + (max - min) * i / (count - 1);
    axis.values.emplace_back(x);
  }
  return axis;
}

SweepAxis SweepAxis::list(AxisParameter parameter, std::vector<double> values) {
  SweepAxis axis{parameter, {}};
  for (double v : values) axis.values.emplace_back(v);
  return axis;
}

SweepAxis SweepAxis::labels(AxisParameter parameter, std::vector<std::string> values) {
  SweepAxis axis{parameter, {}};
  for (auto& v : values) axis.values.emplace_back(std::move(v));
  return axis;
}

void SweepAxis::validate() const {
  const auto name = std::string(to_string(parameter));
  if (values.empty()) throw ConfigError("axis " + name + " has no values");
  for (const auto& v : values) {
    if (is_numeric(parameter)) {
      const auto* x = std::get_if<double>(&v);
      if (x == nullptr) throw ConfigError("axis " + name + " expects numeric values");
      if (!std::isfinite(*x)) throw ConfigError("axis " + name + " has a non-finite value");
    } else if (!std::holds_alternative<std::string>(v)) {
      throw ConfigError("axis " + name + " expects string values");
    }
  }
}

std::string ObservableId::name() const {
  switch (kind) {
    case Kind::kZ: return qubit == 0 ? "z_bulk" : "z" + std::to_string(qubit);
    case Kind::kLifetime:
      return qubit == 0 ? "lifetime" : "lifetime" + std::to_string(qubit);
    case Kind::kFspt: return "fspt";
  }
  return "?";
}

ObservableId ObservableId::parse(std::string_view text) {
  auto parse_qubit = [&](std::string_view digits) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                       [](char c) { return c >= '0' && c <= '9'; })) {
      throw ConfigError("unknown observable '" + std::string(text) + "'");
    }
    const int k = std::stoi(std::string(digits));
    if (k < 1) throw ConfigError("observable qubit must be >= 1 in '" + std::string(text) + "'");
    return k;
  };
  if (text == "fspt") return fspt();
  if (text == "z_bulk") return z_bulk();
  if (text == "lifetime") return lifetime();
  if (text.starts_with("lifetime")) return lifetime(parse_qubit(text.substr(8)));
  if (text.starts_with("z")) return z(parse_qubit(text.substr(1)));
  throw ConfigError("unknown observable '" + std::string(text) + "'");
}

std::size_t CampaignSpec::cell_count() const {
  std::size_t count = 1;
  for (const auto& axis : axes) count *= axis.values.size();
  return count;
}

std::vector<AxisValue> CampaignSpec::cell_coordinates(std::size_t index) const {
  std::vector<AxisValue> coordinates(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const auto n = axes[a].values.size();
    coordinates[a] = axes[a].values[index % n];
    index /= n;
  }
  return coordinates;
}

FloquetDriveSpec CampaignSpec::cell_drive(std::size_t index) const {
  FloquetDriveSpec drive = base;
  std::string initial = initial_state;
  const auto coordinates = cell_coordinates(index);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    apply_axis(drive, initial, axes[a].parameter, coordinates[a]);
  }
  return drive;
}

std::string CampaignSpec::cell_initial_state(std::size_t index) const {
  FloquetDriveSpec drive = base;
  std::string initial = initial_state;
  const auto coordinates = cell_coordinates(index);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    apply_axis(drive, initial, axes[a].parameter, coordinates[a]);
  }
  return initial;
}

void CampaignSpec::validate() const {
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (horizon < 2 || horizon % 2 != 0) {
    throw ConfigError("horizon must be an even number of periods >= 2");
  }
  if (observables.empty()) throw ConfigError("no observables requested");
  for (const auto& axis : axes) axis.validate();
  for (std::size_t i = 0; i < axes.size(); ++i) {
    for (std::size_t j = i + 1; j < axes.size(); ++j) {
      if (axes[i].parameter == axes[j].parameter) {
        throw ConfigError("axis " + std::string(to_string(axes[i].parameter)) +
                          " appears twice");
      }
    }
  }

  const double cells = static_cast<double>(cell_count());
  const double work = cells * realizations * static_cast<double>(horizon);
  if (work > work_budget) {
    char buffer[256];
    std::snprintf(buffer, sizeof buffer,
                  "campaign needs %.6g periods (%.0f cells x %d realizations x %lld "
                  "periods), work budget is %.6g",
                  work, cells, realizations, static_cast<long long>(horizon), work_budget);
    throw CapacityError(buffer);
  }

  for (std::size_t cell = 0; cell < cell_count(); ++cell) {
    const auto context = [&] {
      std::string where = "cell " + std::to_string(cell);
      const auto coordinates = cell_coordinates(cell);
      for (std::size_t a = 0; a < axes.size(); ++a) {
        where += std::string(a == 0 ? " (" : ", ") + std::string(to_string(axes[a].parameter)) +
                 "=" + format_axis_value(coordinates[a]);
      }
      return axes.empty() ? where : where + ")";
    };
    try {
      const auto drive = cell_drive(cell);
      drive.validate();
      if (drive.model == ModelKind::kHeisenberg && drive.L > kDenseQubitCap) {
        throw CapacityError("heisenberg model needs dense matrices; L=" +
                            std::to_string(drive.L) + " exceeds the dense cap L <= " +
                            std::to_string(kDenseQubitCap));
      }
      const auto initial = cell_initial_state(cell);
      if (initial != kRandomInitialState) {
        basis_index(initial);
        if (static_cast<int>(initial.size()) != drive.L) {
          throw InvalidInput("initial state '" + initial + "' does not have L=" +
                             std::to_string(drive.L) + " qubits");
        }
      }
      for (const auto& obs : observables) {
        if (obs.qubit > drive.L) {
          throw InvalidInput("observable " + obs.name() + " refers to a qubit beyond L=" +
                             std::to_string(drive.L));
        }
      }
    } catch (const CapacityError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(context() + ": " + e.what());
    }
  }
}

PreparedRealization prepare_realization(const CampaignSpec& spec, std::size_t cell,
                                        std::uint64_t realization) {
  PreparedRealization run;
  run.drive = spec.cell_drive(cell);
  Rng rng(realization_seed(spec.seed, cell, realization));
  run.disorder = sample_realization(run.drive.distribution, run.drive.L, rng);
  run.initial_label = spec.cell_initial_state(cell);
  if (run.initial_label == kRandomInitialState) {
    run.initial_label = basis_label(draw_basis_index(rng, run.drive.L), run.drive.L);
  }
  run.plan = compile_step(run.drive, run.disorder);
  return run;
}

std::vector<double> evaluate_realization(const CampaignSpec& spec, std::size_t cell,
                                         std::uint64_t realization) {
  const auto run = prepare_realization(spec, cell, realization);
  const auto& drive = run.drive;
  const auto qubits = qubits_needed(spec.observables, drive.L);
  const auto traces =
      record_trace(StateVector::basis(run.initial_label), run.plan, qubits, spec.horizon);

  auto trace_of = [&](int qubit) -> const AutocorrelatorTrace& {
    if (qubit == 0) qubit = bulk_qubit(drive.L);
    return *std::find_if(traces.begin(), traces.end(),
                         [qubit](const auto& t) { return t.qubit == qubit; });
  };

  std::vector<double> values;
  values.reserve(spec.observables.size());
  for (const auto& obs : spec.observables) {
    switch (obs.kind) {
      case ObservableId::Kind::kZ: values.push_back(trace_of(obs.qubit).final_value()); break;
      case ObservableId::Kind::kLifetime: {
        // Realizations that never decay are counted at the horizon.
        const auto life = lifetime(trace_of(obs.qubit));
        values.push_back(static_cast<double>(life.periods.value_or(spec.horizon)));
        break;
      }
      case ObservableId::Kind::kFspt:
        values.push_back(fspt_diagnostic(trace_of(1), trace_of(0)));
        break;
    }
  }
  return values;
}

std::vector<SweepRecord> run_campaign(const CampaignSpec& spec, const CampaignOptions& options) {
  spec.validate();
  const std::size_t n_cells = spec.cell_count();
  const std::size_t first = std::min(options.first_cell, n_cells);
  const auto n_real = static_cast<std::size_t>(spec.realizations);
  const std::size_t n_obs = spec.observables.size();
  const std::size_t n_items = (n_cells - first) * n_real;

  // values[(cell - first) * n_real + r][obs]
  std::vector<std::vector<double>> values(n_items);
  std::vector<std::size_t> remaining(n_cells - first, n_real);

  std::mutex mutex;
  std::condition_variable cell_done;
  std::atomic<std::size_t> next_item{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t item = next_item.fetch_add(1);
      if (item >= n_items || failed.load()) return;
      const std::size_t cell = first + item / n_real;
      const std::size_t r = item % n_real;
      try {
        values[item] = evaluate_realization(spec, cell, r);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        failed = true;
        cell_done.notify_all();
        return;
      }
      std::lock_guard lock(mutex);
      if (--remaining[cell - first] == 0) cell_done.notify_all();
    }
  };

  const int n_workers = std::max(1, options.workers);
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);

  // Single writer: reduce and emit cells strictly in order, each reduction
  // running over realizations in index order.
  std::vector<SweepRecord> records;
  records.reserve((n_cells - first) * n_obs);
  for (std::size_t cell = first; cell < n_cells; ++cell) {
    {
      std::unique_lock lock(mutex);
      cell_done.wait(lock, [&] { return failed.load() || remaining[cell - first] == 0; });
      if (failed) break;
    }
    const auto coordinates = spec.cell_coordinates(cell);
    const std::size_t begin = records.size();
    for (std::size_t o = 0; o < n_obs; ++o) {
      RunningStats stats;
      for (std::size_t r = 0; r < n_real; ++r) {
        stats.add(values[(cell - first) * n_real + r][o]);
      }
      records.push_back({coordinates, spec.observables[o].name(), stats.mean(),
                         stats.standard_error(), stats.count(), spec.seed});
    }
    if (options.on_cell) {
      try {
        options.on_cell(std::span<const SweepRecord>(records).subspan(begin));
      } catch (...) {
        failed = true;
        pool.clear();
        throw;
      }
    }
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
  return records;
}

}  // namespace dtc
