#include "dtc/records.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <istream>
#include <sstream>

#include "dtc/errors.hpp"
#include "json.hpp"

#ifndef DTC_VERSION
#define DTC_VERSION "unknown"
#endif

namespace dtc {

using nlohmann::json;

namespace {

constexpr const char* kSweepTail[] = {"observable", "mean", "stderr", "n_realizations", "seed"};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_double(const std::string& text, const std::string& column, std::size_t row) {
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw InvalidInput("row " + std::to_string(row) + ", column '" + column +
                       "': '" + text + "' is not a number");
  }
}

std::int64_t parse_int(const std::string& text, const std::string& column, std::size_t row) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw InvalidInput("row " + std::to_string(row) + ", column '" + column +
                       "': '" + text + "' is not an integer");
  }
}

std::uint64_t parse_seed(const std::string& text, const std::string& column, std::size_t row) {
  try {
    std::size_t used = 0;
    const auto x = std::stoull(text, &used);
    if (used != text.size() || text.starts_with('-')) throw std::invalid_argument("bad");
    return x;
  } catch (const std::exception&) {
    throw InvalidInput("row " + std::to_string(row) + ", column '" + column +
                       "': '" + text + "' is not a seed");
  }
}

bool is_string_axis(const std::string& name) {
  return name == "initial_state" || name == "model";
}

void check_record(const SweepRecord& r, std::size_t row) {
  if (r.n_realizations < 1) {
    throw InvalidInput("row " + std::to_string(row) + ": n_realizations must be >= 1");
  }
  if (!(r.standard_error >= 0.0)) {
    throw InvalidInput("row " + std::to_string(row) + ": stderr must be >= 0");
  }
}

json axis_value_json(const AxisValue& value) {
  if (const auto* x = std::get_if<double>(&value)) return *x;
  return std::get<std::string>(value);
}

std::string iso8601_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string sweep_csv_header(std::span<const std::string> axis_names) {
  std::string header;
  for (const auto& name : axis_names) header += name + ",";
  for (std::size_t i = 0; i < std::size(kSweepTail); ++i) {
    header += kSweepTail[i];
    header += i + 1 < std::size(kSweepTail) ? "," : "";
  }
  return header;
}

std::string sweep_csv_row(const SweepRecord& record) {
  std::string row;
  for (const auto& c : record.coordinates) row += format_axis_value(c) + ",";
  row += record.observable + "," + format_double(record.mean) + "," +
         format_double(record.standard_error) + "," +
         std::to_string(record.n_realizations) + "," + std::to_string(record.seed);
  return row;
}

std::string sweep_records_json(std::span<const std::string> axis_names,
                               std::span<const SweepRecord> records,
                               const std::string& metadata) {
  json rows = json::array();
  for (const auto& r : records) {
    json coordinates = json::object();
    for (std::size_t a = 0; a < axis_names.size(); ++a) {
      coordinates[axis_names[a]] = axis_value_json(r.coordinates.at(a));
    }
    rows.push_back({{"coordinates", coordinates},
                    {"observable", r.observable},
                    {"mean", r.mean},
                    {"stderr", r.standard_error},
                    {"n_realizations", r.n_realizations},
                    {"seed", r.seed}});
  }
  json doc = {{"metadata", json::parse(metadata)},
              {"axes", std::vector<std::string>(axis_names.begin(), axis_names.end())},
              {"records", rows}};
  return doc.dump(2) + "\n";
}

RecordTable read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("sweep file is empty");
  strip_cr(line);
  const auto header = split_csv(line);
  const std::size_t n_tail = std::size(kSweepTail);
  if (header.size() < n_tail) throw InvalidInput("sweep header has too few columns");
  RecordTable table;
  const std::size_t n_axes = header.size() - n_tail;
  for (std::size_t i = 0; i < n_tail; ++i) {
    if (header[n_axes + i] != kSweepTail[i]) {
      throw InvalidInput("sweep header column " + std::to_string(n_axes + i + 1) +
                         " should be '" + kSweepTail[i] + "', found '" +
                         header[n_axes + i] + "'");
    }
  }
  for (std::size_t a = 0; a < n_axes; ++a) {
    try {
      axis_parameter_from_string(header[a]);
    } catch (const ConfigError&) {
      throw InvalidInput("sweep header column " + std::to_string(a + 1) + " '" + header[a] +
                         "' is not a sweep axis");
    }
    table.axis_names.push_back(header[a]);
  }

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw InvalidInput("row " + std::to_string(row) + " has " +
                         std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(header.size()));
    }
    SweepRecord r;
    for (std::size_t a = 0; a < n_axes; ++a) {
      if (is_string_axis(header[a])) {
        r.coordinates.emplace_back(fields[a]);
      } else {
        r.coordinates.emplace_back(parse_double(fields[a], header[a], row));
      }
    }
    r.observable = fields[n_axes];
    ObservableId::parse(r.observable);
    r.mean = parse_double(fields[n_axes + 1], "mean", row);
    r.standard_error = parse_double(fields[n_axes + 2], "stderr", row);
    r.n_realizations = parse_int(fields[n_axes + 3], "n_realizations", row);
    r.seed = parse_seed(fields[n_axes + 4], "seed", row);
    check_record(r, row);
    table.records.push_back(std::move(r));
  }
  return table;
}

RecordTable read_sweep_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sweep JSON does not parse: ") + e.what());
  }
  RecordTable table;
  try {
    table.axis_names = doc.at("axes").get<std::vector<std::string>>();
    for (const auto& name : table.axis_names) axis_parameter_from_string(name);
    std::size_t row = 0;
    for (const auto& node : doc.at("records")) {
      ++row;
      SweepRecord r;
      const auto& coordinates = node.at("coordinates");
      for (const auto& name : table.axis_names) {
        const auto& v = coordinates.at(name);
        if (v.is_string()) {
          r.coordinates.emplace_back(v.get<std::string>());
        } else {
          r.coordinates.emplace_back(v.get<double>());
        }
      }
      r.observable = node.at("observable").get<std::string>();
      ObservableId::parse(r.observable);
      r.mean = node.at("mean").get<double>();
      r.standard_error = node.at("stderr").get<double>();
      r.n_realizations = node.at("n_realizations").get<std::int64_t>();
      r.seed = node.at("seed").get<std::uint64_t>();
      check_record(r, row);
      table.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sweep JSON schema violation: ") + e.what());
  } catch (const ConfigError& e) {
    throw InvalidInput(std::string("sweep JSON schema violation: ") + e.what());
  }
  return table;
}

std::string trace_csv_header() { return "time,qubit,expectation,running_min_Z"; }

std::string trace_csv_row(const TraceRow& row) {
  return std::to_string(row.time) + "," + std::to_string(row.qubit) + "," +
         format_double(row.expectation) + "," + format_double(row.running_min_z);
}

std::string trace_rows_json(std::span<const TraceRow> rows, const std::string& metadata) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"time", r.time},
                   {"qubit", r.qubit},
                   {"expectation", r.expectation},
                   {"running_min_Z", r.running_min_z}});
  }
  json doc = {{"metadata", json::parse(metadata)}, {"trace", out}};
  return doc.dump(2) + "\n";
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("trace file is empty");
  strip_cr(line);
  if (line != trace_csv_header()) {
    throw InvalidInput("trace header should be '" + trace_csv_header() + "', found '" +
                       line + "'");
  }
  std::vector<TraceRow> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) throw InvalidInput("row " + std::to_string(row) + " needs 4 fields");
    rows.push_back({parse_int(f[0], "time", row),
                    static_cast<int>(parse_int(f[1], "qubit", row)),
                    parse_double(f[2], "expectation", row),
                    parse_double(f[3], "running_min_Z", row)});
  }
  return rows;
}

std::string scaling_points_csv(const ScalingFit& fit, std::uint64_t seed) {
  std::string out = "L,mean_lifetime,stderr,n_realizations,n_censored,fitted,seed\n";
  for (const auto& p : fit.points) {
    out += std::to_string(p.L) + "," + format_double(p.mean_lifetime) + "," +
           format_double(p.standard_error) + "," + std::to_string(p.n_realizations) + "," +
           std::to_string(p.n_censored) + "," + (p.censored() ? "0" : "1") + "," +
           std::to_string(seed) + "\n";
  }
  return out;
}

std::string scaling_fit_csv(const ScalingFit& fit, std::uint64_t seed) {
  return "prefactor,rate,r_squared,n_fitted,seed\n" + format_double(fit.prefactor) + "," +
         format_double(fit.rate) + "," + format_double(fit.r_squared) + "," +
         std::to_string(fit.n_fitted) + "," + std::to_string(seed) + "\n";
}

std::string scaling_json(const ScalingFit& fit, std::uint64_t seed,
                         const std::string& metadata) {
  json points = json::array();
  for (const auto& p : fit.points) {
    points.push_back({{"L", p.L},
                      {"mean_lifetime", p.mean_lifetime},
                      {"stderr", p.standard_error},
                      {"n_realizations", p.n_realizations},
                      {"n_censored", p.n_censored},
                      {"fitted", !p.censored()},
                      {"seed", seed}});
  }
  auto number = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json doc = {{"metadata", json::parse(metadata)},
              {"points", points},
              {"fit",
               {{"prefactor", number(fit.prefactor)},
                {"rate", number(fit.rate)},
                {"r_squared", number(fit.r_squared)},
                {"n_fitted", fit.n_fitted},
                {"seed", seed}}}};
  return doc.dump(2) + "\n";
}

ScalingFit read_scaling_fit_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("fit file is empty");
  strip_cr(line);
  if (line != "prefactor,rate,r_squared,n_fitted,seed") {
    throw InvalidInput("unexpected fit header '" + line + "'");
  }
  if (!std::getline(in, line)) throw InvalidInput("fit file has no data row");
  strip_cr(line);
  const auto f = split_csv(line);
  if (f.size() != 5) throw InvalidInput("fit row needs 5 fields");
  ScalingFit fit;
  fit.prefactor = parse_double(f[0], "prefactor", 2);
  fit.rate = parse_double(f[1], "rate", 2);
  fit.r_squared = parse_double(f[2], "r_squared", 2);
  fit.n_fitted = parse_int(f[3], "n_fitted", 2);
  return fit;
}

std::string metadata_json(const std::string& command, const std::string& config_json) {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  json meta = {{"command", command},
               {"code_version", DTC_VERSION},
               {"timestamp", iso8601_utc(now)},
               {"config", json::parse(config_json)}};
  return meta.dump();
}

}  // namespace dtc
