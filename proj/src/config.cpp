#include "dtc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dtc/errors.hpp"
#include "dtc/state_vector.hpp"
#include "json.hpp"

namespace dtc {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "description", "L",           "epsilon",      "t1",           "t2",
    "model",       "h2i_pulses",  "J0",           "sigma_J",      "h0",
    "sigma_h",     "truncation",  "initial_state", "observables", "horizon",
    "realizations", "seed",       "axes",         "output",       "format",
    "work_budget", "scaling",     "h2i",
};
const std::set<std::string> kAxisKeys = {"name", "values", "min", "max", "count", "spacing"};
const std::set<std::string> kScalingKeys = {"lengths", "horizon_cap", "threshold",
                                            "synthetic_lifetimes"};
const std::set<std::string> kH2IKeys = {"pulses"};

// Line of the first occurrence of "key" in the text, for error context.
int line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) line += text[i] == '\n';
  return line;
}

class Reader {
 public:
  Reader(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    std::string where(source_);
    if (const int line = line_of_key(text_, key); line > 0) {
      where += ":" + std::to_string(line);
    }
    throw ConfigError(where + ": key '" + std::string(key) + "': " + message);
  }

  void check_keys(const json& object, const std::set<std::string>& allowed,
                  std::string_view context) const {
    if (!object.is_object()) fail(context, "expected an object");
    for (const auto& [key, value] : object.items()) {
      if (!allowed.contains(key)) {
        fail(key, "unknown key" +
                      (context.empty() ? std::string() : " in " + std::string(context)));
      }
    }
  }

  template <typename T>
  void read(const json& object, std::string_view key, T& out) const {
    const auto it = object.find(std::string(key));
    if (it == object.end()) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) fail(key, "expected a number");
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer() && !(it->is_number_float() && is_integral(*it))) {
          fail(key, "expected an integer");
        }
        const double x = it->template get<double>();
        out = static_cast<T>(x);
        if (std::is_unsigned_v<T> && x < 0) fail(key, "expected a nonnegative integer");
        return;
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) fail(key, "expected a string");
      }
      out = it->template get<T>();
    } catch (const json::exception& e) {
      fail(key, e.what());
    }
  }

 private:
  static bool is_integral(const json& value) {
    const double x = value.get<double>();
    return std::isfinite(x) && std::floor(x) == x;
  }

  std::string_view text_;
  std::string_view source_;
};

SweepAxis parse_axis(const Reader& reader, const json& node) {
  reader.check_keys(node, kAxisKeys, "axes");
  std::string name;
  if (!node.contains("name")) reader.fail("axes", "axis without a name");
  reader.read(node, "name", name);
  AxisParameter parameter{};
  try {
    parameter = axis_parameter_from_string(name);
  } catch (const ConfigError& e) {
    reader.fail("name", e.what());
  }

  if (node.contains("values")) {
    if (node.contains("min") || node.contains("max") || node.contains("count")) {
      reader.fail("values", "give either values or min/max/count, not both");
    }
    const auto& values = node.at("values");
    if (!values.is_array()) reader.fail("values", "expected an array");
    SweepAxis axis{parameter, {}};
    for (const auto& v : values) {
      if (is_numeric(parameter)) {
        if (!v.is_number()) reader.fail("values", "axis " + name + " expects numbers");
        axis.values.emplace_back(v.get<double>());
      } else {
        if (!v.is_string()) reader.fail("values", "axis " + name + " expects strings");
        axis.values.emplace_back(v.get<std::string>());
      }
    }
    if (axis.values.empty()) reader.fail("values", "axis " + name + " has no values");
    return axis;
  }

  if (!is_numeric(parameter)) reader.fail("name", "axis " + name + " needs explicit values");
  double min = 0.0, max = 0.0;
  int count = 0;
  std::string spacing = "linear";
  if (!node.contains("min") || !node.contains("max") || !node.contains("count")) {
    reader.fail("name", "axis " + name + " needs values or min/max/count");
  }
  reader.read(node, "min", min);
  reader.read(node, "max", max);
  reader.read(node, "count", count);
  reader.read(node, "spacing", spacing);
  if (count < 1) reader.fail("count", "must be >= 1");
  if (spacing == "linear") return SweepAxis::linear(parameter, min, max, count);
  if (spacing != "log") reader.fail("spacing", "expected linear or log");
  if (!(min > 0.0 && max > 0.0)) reader.fail("spacing", "log spacing needs min, max > 0");
  auto axis = SweepAxis::linear(parameter, std::log(min), std::log(max), count);
  for (auto& v : axis.values) v = std::exp(std::get<double>(v));
  // Pin the end points exactly.
  axis.values.front() = min;
  axis.values.back() = max;
  return axis;
}

json axis_to_json(const SweepAxis& axis) {
  json values = json::array();
  for (const auto& v : axis.values) {
    if (const auto* x = std::get_if<double>(&v)) {
      values.push_back(*x);
    } else {
      values.push_back(std::get<std::string>(v));
    }
  }
  return {{"name", std::string(to_string(axis.parameter))}, {"values", values}};
}

}  // namespace

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::kJson ? "json" : "csv";
}

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

SweepAxis default_epsilon_axis() {
  return SweepAxis::linear(AxisParameter::kEpsilon, 0.0, 0.2, 21);
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
      line += text[i] == '\n';
    }
    throw ConfigError(std::string(source) + ":" + std::to_string(line) +
                      ": JSON syntax error: " + e.what());
  }

  const Reader reader(text, source);
  reader.check_keys(root, kTopLevelKeys, "");

  RunConfig config;
  auto& drive = config.drive;
  auto& dist = drive.distribution;
  reader.read(root, "description", config.description);
  reader.read(root, "L", drive.L);
  reader.read(root, "epsilon", drive.epsilon);
  reader.read(root, "t1", drive.t1);
  reader.read(root, "t2", drive.t2);
  reader.read(root, "h2i_pulses", drive.h2i_pulses);
  reader.read(root, "J0", dist.J0);
  reader.read(root, "sigma_J", dist.sigma_J);
  reader.read(root, "h0", dist.h0);
  reader.read(root, "sigma_h", dist.sigma_h);
  reader.read(root, "initial_state", config.initial_state);
  reader.read(root, "horizon", config.horizon);
  reader.read(root, "realizations", config.realizations);
  reader.read(root, "seed", config.seed);
  reader.read(root, "output", config.output);
  reader.read(root, "work_budget", config.work_budget);

  auto read_enum = [&](std::string_view key, auto convert) {
    if (!root.contains(std::string(key))) return;
    std::string value;
    reader.read(root, key, value);
    try {
      convert(value);
    } catch (const std::exception& e) {
      reader.fail(key, e.what());
    }
  };
  read_enum("model", [&](const std::string& v) { drive.model = model_kind_from_string(v); });
  read_enum("truncation",
            [&](const std::string& v) { dist.truncation = truncation_from_string(v); });
  read_enum("format",
            [&](const std::string& v) { config.format = output_format_from_string(v); });

  if (root.contains("observables")) {
    const auto& node = root.at("observables");
    config.observables.clear();
    auto add = [&](const json& v) {
      if (!v.is_string()) reader.fail("observables", "expected observable names");
      try {
        config.observables.push_back(ObservableId::parse(v.get<std::string>()));
      } catch (const ConfigError& e) {
        reader.fail("observables", e.what());
      }
    };
    if (node.is_array()) {
      for (const auto& v : node) add(v);
    } else {
      add(node);
    }
    if (config.observables.empty()) reader.fail("observables", "no observables given");
  }

  if (root.contains("axes")) {
    config.axes_given = true;
    const auto& node = root.at("axes");
    if (!node.is_array()) reader.fail("axes", "expected an array of axis objects");
    for (const auto& a : node) config.axes.push_back(parse_axis(reader, a));
  }

  if (root.contains("scaling")) {
    const auto& node = root.at("scaling");
    reader.check_keys(node, kScalingKeys, "scaling");
    if (node.contains("lengths")) {
      if (!node.at("lengths").is_array()) reader.fail("lengths", "expected an array");
      config.scaling_lengths.clear();
      for (const auto& v : node.at("lengths")) {
        if (!v.is_number_integer()) reader.fail("lengths", "expected integers");
        config.scaling_lengths.push_back(v.get<int>());
      }
    }
    reader.read(node, "horizon_cap", config.horizon_cap);
    reader.read(node, "threshold", config.threshold);
    if (node.contains("synthetic_lifetimes")) {
      const auto& pairs = node.at("synthetic_lifetimes");
      if (!pairs.is_array()) reader.fail("synthetic_lifetimes", "expected [[L, t], ...]");
      for (const auto& p : pairs) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          reader.fail("synthetic_lifetimes", "expected [[L, t], ...]");
        }
        config.synthetic_lifetimes.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    }
  }

  if (root.contains("h2i")) {
    const auto& node = root.at("h2i");
    reader.check_keys(node, kH2IKeys, "h2i");
    if (node.contains("pulses")) {
      if (!node.at("pulses").is_array()) reader.fail("pulses", "expected an array");
      config.h2i_pulse_counts.clear();
      for (const auto& v : node.at("pulses")) {
        if (!v.is_number_integer()) reader.fail("pulses", "expected integers");
        config.h2i_pulse_counts.push_back(v.get<int>());
      }
    }
  }

  try {
    drive.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  if (config.realizations < 1) reader.fail("realizations", "must be >= 1");
  if (config.horizon < 2 || config.horizon % 2 != 0) {
    reader.fail("horizon", "must be an even number of periods >= 2");
  }
  if (!(config.work_budget > 0.0)) reader.fail("work_budget", "must be > 0");
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::string resolved_config_json(const RunConfig& config) {
  const auto& drive = config.drive;
  const auto& dist = drive.distribution;
  json observables = json::array();
  for (const auto& obs : config.observables) observables.push_back(obs.name());
  json axes = json::array();
  for (const auto& axis : config.axes) axes.push_back(axis_to_json(axis));
  json synthetic = json::array();
  for (const auto& [L, t] : config.synthetic_lifetimes) synthetic.push_back({L, t});

  json out = {
      {"description", config.description},
      {"L", drive.L},
      {"epsilon", drive.epsilon},
      {"t1", drive.t1},
      {"t2", drive.t2},
      {"model", std::string(to_string(drive.model))},
      {"h2i_pulses", drive.h2i_pulses},
      {"J0", dist.J0},
      {"sigma_J", dist.sigma_J},
      {"h0", dist.h0},
      {"sigma_h", dist.sigma_h},
      {"truncation", std::string(to_string(dist.truncation))},
      {"initial_state", config.initial_state},
      {"observables", observables},
      {"horizon", config.horizon},
      {"realizations", config.realizations},
      {"seed", config.seed},
      {"axes", axes},
      {"output", config.output},
      {"format", std::string(to_string(config.format))},
      {"work_budget", config.work_budget},
      {"scaling",
       {{"lengths", config.scaling_lengths},
        {"horizon_cap", config.horizon_cap},
        {"threshold", config.threshold},
        {"synthetic_lifetimes", synthetic}}},
      {"h2i", {{"pulses", config.h2i_pulse_counts}}},
  };
  return out.dump(2);
}

CampaignSpec to_campaign(const RunConfig& config) {
  CampaignSpec spec;
  spec.axes = config.axes;
  spec.base = config.drive;
  spec.observables = config.observables;
  spec.horizon = config.horizon;
  spec.realizations = config.realizations;
  spec.seed = config.seed;
  spec.work_budget = config.work_budget;

  const auto& initial = config.initial_state;
  const bool has_l_axis = std::any_of(spec.axes.begin(), spec.axes.end(), [](const auto& a) {
    return a.parameter == AxisParameter::kL;
  });
  const bool expands = initial == "all" || initial.starts_with("random:");
  if (expands) {
    if (has_l_axis) {
      throw ConfigError("initial_state '" + initial +
                        "' cannot be combined with an L axis; use \"random\"");
    }
    for (const auto& axis : spec.axes) {
      if (axis.parameter == AxisParameter::kInitialState) {
        throw ConfigError("initial_state '" + initial +
                          "' conflicts with an explicit initial_state axis");
      }
    }
    std::vector<std::string> labels;
    const int L = config.drive.L;
    if (initial == "all") {
      if (L > 16) throw CapacityError("initial_state 'all' enumerates 2^L states; L <= 16");
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << L); ++s) {
        labels.push_back(basis_label(s, L));
      }
    } else {
      const std::string count_text = initial.substr(7);
      int count = 0;
      try {
        std::size_t used = 0;
        count = std::stoi(count_text, &used);
        if (used != count_text.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw ConfigError("initial_state '" + initial + "': expected random:N");
      }
      if (count < 1) throw ConfigError("initial_state '" + initial + "': N must be >= 1");
      Rng rng(realization_seed(config.seed, ~std::uint64_t{0}, 0));
      for (int i = 0; i < count; ++i) labels.push_back(basis_label(rng() >> (64 - L), L));
    }
    // The state axis goes last so each panel keeps the other axes' ordering.
    spec.axes.push_back(SweepAxis::labels(AxisParameter::kInitialState, std::move(labels)));
    spec.initial_state = "";
  } else {
    spec.initial_state = initial;
  }
  return spec;
}

ScalingSpec to_scaling(const RunConfig& config) {
  ScalingSpec spec;
  spec.lengths = config.scaling_lengths;
  spec.base = config.drive;
  spec.realizations = config.realizations;
  spec.seed = config.seed;
  spec.horizon_cap = config.horizon_cap;
  spec.threshold = config.threshold;
  return spec;
}

}  // namespace dtc
