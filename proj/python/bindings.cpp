#include <fstream>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dtc/config.hpp"
#include "dtc/errors.hpp"
#include "dtc/evolution.hpp"
#include "dtc/observables.hpp"
#include "dtc/records.hpp"
#include "dtc/scaling.hpp"
#include "dtc/sweep.hpp"

namespace py = pybind11;
using namespace dtc;

namespace {

py::object axis_value(const AxisValue& v) {
  if (const auto* x = std::get_if<double>(&v)) return py::float_(*x);
  return py::str(std::get<std::string>(v));
}

py::dict record_dict(std::span<const std::string> axis_names, const SweepRecord& r) {
  py::dict coords;
  for (std::size_t a = 0; a < axis_names.size(); ++a) coords[py::str(axis_names[a])] = axis_value(r.coordinates[a]);
  py::dict d;
  d["coordinates"] = coords;
  d["observable"] = r.observable;
  d["mean"] = r.mean;
  d["stderr"] = r.standard_error;
  d["n_realizations"] = r.n_realizations;
  d["seed"] = r.seed;
  return d;
}

py::list record_list(std::span<const std::string> axis_names, std::span<const SweepRecord> records) {
  py::list out;
  for (const auto& r : records) out.append(record_dict(axis_names, r));
  return out;
}

std::vector<std::string> axis_names(const CampaignSpec& spec) {
  std::vector<std::string> names;
  for (const auto& a : spec.axes) names.emplace_back(to_string(a.parameter));
  return names;
}

py::dict fit_dict(const ScalingFit& fit) {
  py::list points;
  for (const auto& p : fit.points) {
    py::dict d;
    d["L"] = p.L;
    d["mean_lifetime"] = p.mean_lifetime;
    d["stderr"] = p.standard_error;
    d["n_realizations"] = p.n_realizations;
    d["n_censored"] = p.n_censored;
    points.append(d);
  }
  py::dict d;
  d["prefactor"] = fit.prefactor;
  d["rate"] = fit.rate;
  d["r_squared"] = fit.r_squared;
  d["n_fitted"] = fit.n_fitted;
  d["points"] = points;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact state-vector simulator for driven disordered spin chains";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<int>(), py::arg("n_qubits"))
      .def(py::init([](int n, const std::vector<Complex>& amps) { return StateVector(n, amps); }),
           py::arg("n_qubits"), py::arg("amplitudes"))
      .def_static("basis", &StateVector::basis, py::arg("bits"))
      .def_property_readonly("n_qubits", &StateVector::n_qubits)
      .def_property_readonly("dim", &StateVector::dim)
      .def_property_readonly("amplitudes",
                             [](const StateVector& s) {
                               return py::array_t<Complex>(static_cast<py::ssize_t>(s.dim()),
                                                           s.amplitudes().data());
                             })
      .def("norm_squared", &StateVector::norm_squared)
      .def("expect_z", &StateVector::expect_z, py::arg("k"))
      .def("apply_x_rotation", &StateVector::apply_x_rotation, py::arg("k"), py::arg("angle"),
           py::return_value_policy::reference_internal)
      .def("apply_z_rotation", &StateVector::apply_z_rotation, py::arg("k"), py::arg("angle"),
           py::return_value_policy::reference_internal)
      .def(
          "apply_diagonal_phases",
          [](StateVector& s, const std::vector<double>& phases) -> StateVector& {
            return s.apply_diagonal_phases(phases);
          },
          py::arg("phases"), py::return_value_policy::reference_internal);

  m.def("basis_index", &basis_index, py::arg("bits"));
  m.def("basis_label", &basis_label, py::arg("index"), py::arg("n_qubits"));

  py::enum_<ModelKind>(m, "ModelKind")
      .value("ISING", ModelKind::kIsing)
      .value("HEISENBERG", ModelKind::kHeisenberg);
  py::enum_<Truncation>(m, "Truncation")
      .value("RENORMALIZE", Truncation::kRenormalize)
      .value("CLIP", Truncation::kClip);

  py::class_<DisorderDistribution>(m, "DisorderDistribution")
      .def(py::init<>())
      .def(py::init([](double J0, double sigma_J, double h0, double sigma_h, Truncation t) {
             return DisorderDistribution{J0, sigma_J, h0, sigma_h, t};
           }),
           py::arg("J0") = 5.0, py::arg("sigma_J") = 3.0, py::arg("h0") = 2.0e4,
           py::arg("sigma_h") = 50.0, py::arg("truncation") = Truncation::kRenormalize)
      .def_readwrite("J0", &DisorderDistribution::J0)
      .def_readwrite("sigma_J", &DisorderDistribution::sigma_J)
      .def_readwrite("h0", &DisorderDistribution::h0)
      .def_readwrite("sigma_h", &DisorderDistribution::sigma_h)
      .def_readwrite("truncation", &DisorderDistribution::truncation);

  py::class_<DisorderRealization>(m, "DisorderRealization")
      .def(py::init([](std::vector<double> J, std::vector<double> h) {
             DisorderRealization r{std::move(J), std::move(h)};
             r.validate();
             return r;
           }),
           py::arg("bond_couplings"), py::arg("onsite_fields"))
      .def_readonly("bond_couplings", &DisorderRealization::bond_couplings)
      .def_readonly("onsite_fields", &DisorderRealization::onsite_fields)
      .def_static("zero", &DisorderRealization::zero, py::arg("n_qubits"));

  m.def(
      "sample_realization",
      [](const DisorderDistribution& d, int L, std::uint64_t seed) {
        Rng rng(seed);
        return sample_realization(d, L, rng);
      },
      py::arg("distribution"), py::arg("L"), py::arg("seed"));
  m.def("realization_seed", &realization_seed, py::arg("campaign_seed"), py::arg("cell"),
        py::arg("realization"));
  m.def("ising_phase_table", &ising_phase_table, py::arg("realization"), py::arg("t2"));
  m.def(
      "heisenberg_hamiltonian",
      [](const DisorderRealization& r) { return heisenberg_hamiltonian(r); }, py::arg("realization"));

  py::class_<FloquetDriveSpec>(m, "FloquetDriveSpec")
      .def(py::init([](int L, double epsilon, double t1, double t2, ModelKind model, int h2i_pulses,
                       DisorderDistribution distribution) {
             FloquetDriveSpec s{L, epsilon, t1, t2, model, h2i_pulses, distribution};
             s.validate();
             return s;
           }),
           py::arg("L") = 4, py::arg("epsilon") = 0.0, py::arg("t1") = 1.0, py::arg("t2") = 1.0,
           py::arg("model") = ModelKind::kIsing, py::arg("h2i_pulses") = 0,
           py::arg("distribution") = DisorderDistribution{})
      .def_readwrite("L", &FloquetDriveSpec::L)
      .def_readwrite("epsilon", &FloquetDriveSpec::epsilon)
      .def_readwrite("t1", &FloquetDriveSpec::t1)
      .def_readwrite("t2", &FloquetDriveSpec::t2)
      .def_readwrite("model", &FloquetDriveSpec::model)
      .def_readwrite("h2i_pulses", &FloquetDriveSpec::h2i_pulses)
      .def_readwrite("distribution", &FloquetDriveSpec::distribution)
      .def_property_readonly("period", &FloquetDriveSpec::period);

  py::class_<FloquetStepPlan>(m, "FloquetStepPlan")
      .def_readonly("n_qubits", &FloquetStepPlan::n_qubits)
      .def_readonly("u1_angle", &FloquetStepPlan::u1_angle)
      .def_readonly("period", &FloquetStepPlan::period)
      .def_property_readonly("kind",
                             [](const FloquetStepPlan& p) {
                               static const char* names[] = {"diagonal", "dense", "h2i"};
                               return std::string(names[p.interaction.index()]);
                             })
      .def("interaction_unitary", &interaction_unitary);

  m.def("compile_step", &compile_step, py::arg("spec"), py::arg("realization"));
  m.def(
      "apply_period",
      [](StateVector& s, const FloquetStepPlan& plan, std::int64_t periods) {
        for (std::int64_t t = 0; t < periods; ++t) apply_period(s, plan);
      },
      py::arg("state"), py::arg("plan"), py::arg("periods") = 1);
  m.def("operator_distance", &operator_distance, py::arg("a"), py::arg("b"));

  py::class_<AutocorrelatorTrace>(m, "AutocorrelatorTrace")
      .def_readonly("qubit", &AutocorrelatorTrace::qubit)
      .def_readonly("sample_periods", &AutocorrelatorTrace::sample_periods)
      .def_readonly("expectations", &AutocorrelatorTrace::expectations)
      .def_readonly("values", &AutocorrelatorTrace::values)
      .def_readonly("initial_expectation", &AutocorrelatorTrace::initial_expectation)
      .def("degenerate", &AutocorrelatorTrace::degenerate);

  m.def(
      "record_trace",
      [](const StateVector& initial, const FloquetStepPlan& plan, const std::vector<int>& qubits,
         std::int64_t n_periods) { return record_trace(initial, plan, qubits, n_periods); },
      py::arg("initial"), py::arg("plan"), py::arg("qubits"), py::arg("n_periods"));
  m.def(
      "lifetime",
      [](const AutocorrelatorTrace& t, double threshold) -> std::optional<std::int64_t> {
        return lifetime(t, threshold).periods;
      },
      py::arg("trace"), py::arg("threshold") = kDefaultLifetimeThreshold,
      "First even period with Z below the threshold, or None.");
  m.def("fspt_diagnostic", &fspt_diagnostic, py::arg("edge"), py::arg("bulk"));
  m.def("bulk_qubit", &bulk_qubit, py::arg("L"));

  m.def(
      "fit_log_least_squares",
      [](const std::vector<std::pair<double, double>>& pairs) { return fit_dict(fit_log_least_squares(pairs)); },
      py::arg("pairs"));

  m.def(
      "run_sweep",
      [](const std::string& config_text, int workers) {
        RunConfig config = parse_config(config_text);
        if (!config.axes_given) config.axes = {default_epsilon_axis()};
        const auto spec = to_campaign(config);
        CampaignOptions options;
        options.workers = workers;
        std::vector<SweepRecord> records;
        {
          py::gil_scoped_release release;
          records = run_campaign(spec, options);
        }
        return record_list(axis_names(spec), records);
      },
      py::arg("config"), py::arg("workers") = 1,
      "Runs the sweep described by a JSON config string and returns its records.");
  m.def(
      "run_scaling",
      [](const std::string& config_text, int workers) {
        const RunConfig config = parse_config(config_text);
        ScalingFit fit;
        {
          py::gil_scoped_release release;
          fit = lifetime_scaling_campaign(to_scaling(config), workers);
        }
        return fit_dict(fit);
      },
      py::arg("config"), py::arg("workers") = 1);

  m.def(
      "read_records",
      [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InvalidInput("cannot open " + path);
        const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
        const RecordTable table = json ? read_sweep_json(in) : read_sweep_csv(in);
        return py::make_tuple(table.axis_names, record_list(table.axis_names, table.records));
      },
      py::arg("path"), "Schema-checked read of a sweep CSV or JSON file: (axis_names, records).");

#ifdef DTC_VERSION
  m.attr("__version__") = DTC_VERSION;
#endif
}
