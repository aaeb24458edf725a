// Acceptance run: one PASS/FAIL line per criterion, then a summary.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dtc/commands.hpp"
#include "dtc/evolution.hpp"
#include "dtc/observables.hpp"
#include "dtc/scaling.hpp"
#include "dtc/sweep.hpp"
#include "oracle.hpp"

using namespace dtc;
using std::numbers::pi;

namespace {

int g_workers = 1;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Drive defaults: L=4, t1=t2=1, J0=5, sigma_J=3, h0=2e4, sigma_h=50.
FloquetDriveSpec base_drive() { return {}; }

// Mean of one observable per cell, in cell order.
std::vector<double> cell_means(const CampaignSpec& spec, std::vector<double>* stderrs = nullptr) {
  CampaignOptions options;
  options.workers = g_workers;
  const auto records = run_campaign(spec, options);
  std::vector<double> means;
  for (const auto& r : records) {
    means.push_back(r.mean);
    if (stderrs) stderrs->push_back(r.standard_error);
  }
  return means;
}

CampaignSpec z3_campaign(FloquetDriveSpec base, int realizations, std::uint64_t seed) {
  CampaignSpec spec;
  spec.base = base;
  spec.observables = {ObservableId::z(3)};
  spec.horizon = 200;
  spec.realizations = realizations;
  spec.seed = seed;
  return spec;
}

// ---------------------------------------------------------------------------

Outcome period_doubling() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(realization_seed(1, 0, 0));
  const auto plan = compile_step(base_drive(), sample_realization(base_drive().distribution, 4, rng));
  const std::vector<int> qubits{1, 2, 3, 4};
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 16; ++s) {
    for (const auto& t : record_trace(StateVector::basis(basis_label(s, 4)), plan, qubits, 10000)) {
      for (double v : t.values) worst = std::max(worst, std::abs(v - 1.0));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && seconds < 1.0,
          fmt("max |Z_k - 1| = %.2e over 16 states x 4 qubits x 10^4 periods (tol 1e-9); %.3f s (< 1 s)",
              worst, seconds)};
}

Outcome spin_echo() {
  double worst = 0.0;
  bool revivals = true;
  std::string revival_text;
  for (double eps : {0.05, 0.1, 0.25}) {
    FloquetDriveSpec spec;
    spec.L = 1;
    spec.epsilon = eps;
    const auto plan = compile_step(spec, DisorderRealization::zero(1));
    auto s = StateVector::basis("0");
    int first = -1;
    for (int n = 1; n <= 1000; ++n) {
      apply_period(s, plan);
      apply_period(s, plan);
      const double z = s.expect_z(1);
      worst = std::max(worst, std::abs(z - std::cos(2 * pi * n * eps)));
      if (first < 0 && std::abs(z - 1.0) < 1e-10) first = 2 * n;
    }
    const int expected = static_cast<int>(std::lround(2.0 / eps));
    revivals = revivals && first == expected;
    revival_text += fmt(" eps=%.2f:%d/%d", eps, first, expected);
  }
  return {worst <= 1e-10 && revivals,
          fmt("max |<z> - cos(2 pi n eps)| = %.2e (tol 1e-10); first revival (got/expected periods):",
              worst) + revival_text};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int heisenberg = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int L = 1 + static_cast<int>(rng() % 4);
    FloquetDriveSpec spec;
    spec.L = L;
    spec.epsilon = 0.25 * u(rng);
    spec.model = trial % 2 ? ModelKind::kHeisenberg : ModelKind::kIsing;
    spec.distribution.J0 = 6.0 * u(rng);
    spec.distribution.sigma_J = 3.0 * u(rng);
    spec.distribution.h0 = 20.0 * u(rng);
    spec.distribution.sigma_h = 5.0 * u(rng);
    Rng draw(rng());
    const auto r = sample_realization(spec.distribution, L, draw);
    const auto plan = compile_step(spec, r);
    heisenberg += spec.model == ModelKind::kHeisenberg;

    const oracle::Mat H = spec.model == ModelKind::kIsing
                              ? oracle::ising(r.bond_couplings, r.onsite_fields)
                              : oracle::heisenberg(r.bond_couplings, r.onsite_fields);
    const oracle::Mat UF = oracle::expm_i(H, spec.t2) * oracle::global_x(pi / 2 * (1 - spec.epsilon), L);
    const std::string label = basis_label(rng() % (1u << L), L);
    auto s = StateVector::basis(label);
    oracle::Vec v = oracle::basis(label);
    for (int t = 0; t < 20; ++t) {
      apply_period(s, plan);
      v = UF * v;
      for (std::size_t i = 0; i < s.dim(); ++i) worst = std::max(worst, std::abs(s.amplitude(i) - v(static_cast<long>(i))));
    }
  }
  return {worst <= 1e-9, fmt("50 specs (%d Heisenberg), 20 periods: max amplitude error %.2e (tol 1e-9)",
                             heisenberg, worst)};
}

Outcome fspt_signature() {
  auto base = base_drive();
  base.epsilon = 0.05;
  base.distribution.sigma_J = 0.0;
  CampaignSpec spec;
  spec.base = base;
  spec.observables = {ObservableId::z(1), ObservableId::z(3), ObservableId::fspt()};
  spec.realizations = 500;
  spec.seed = 101;
  const auto m = cell_means(spec);
  const bool pass = m[0] >= 0.7 && m[1] <= 0.3 && m[2] >= 0.4;
  return {pass, fmt("500 realizations: Z1 = %.3f (>= 0.7), Z3 = %.3f (<= 0.3), Z1 - Z3 = %.3f (>= 0.4)",
                    m[0], m[1], m[2])};
}

Outcome charge_noise_stabilization() {
  const std::vector<double> sigmas{0.02, 0.05, 0.5, 0.75, 1.0};
  const std::vector<double> eps{0.01, 0.02, 0.03, 0.04, 0.06, 0.08, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20};
  auto spec = z3_campaign(base_drive(), 2000, 105);
  spec.axes = {SweepAxis::list(AxisParameter::kSigmaJ, sigmas), SweepAxis::list(AxisParameter::kEpsilon, eps)};
  const auto m = cell_means(spec);
  auto at = [&](std::size_t si, std::size_t ei) { return m[si * eps.size() + ei]; };

  const double contrast = at(4, 1) - at(0, 1);
  const bool a = contrast >= 0.4;

  bool b = true;
  double b_min = 1.0;
  for (std::size_t si = 2; si < sigmas.size(); ++si) {
    for (std::size_t ei = 0; ei < 4; ++ei) b_min = std::min(b_min, at(si, ei));
  }
  b = b_min >= 0.5;

  double c_max = 0.0;
  for (std::size_t si = 0; si < 2; ++si) {
    for (std::size_t ei = 1; ei < eps.size(); ++ei) c_max = std::max(c_max, at(si, ei));
  }
  const bool c = c_max <= 0.2;

  return {a && b && c,
          fmt("eps=0.02: Z3(sJ=1.0) - Z3(sJ=0.02) = %.3f - %.3f = %.3f (>= 0.4) [%s]; "
              "min Z3 over sJ in {0.5,0.75,1.0}, eps in [0.01,0.04] = %.3f (>= 0.5) [%s]; "
              "max Z3 over sJ in {0.02,0.05}, eps >= 0.02 = %.3f (<= 0.2) [%s]",
              at(4, 1), at(0, 1), contrast, a ? "ok" : "FAIL", b_min, b ? "ok" : "FAIL", c_max,
              c ? "ok" : "FAIL")};
}

Outcome initial_state_independence() {
  auto noisy = z3_campaign(base_drive(), 100, 104);
  noisy.base.epsilon = 0.02;
  noisy.initial_state = "0000";
  std::vector<std::string> labels;
  for (std::uint64_t s = 0; s < 16; ++s) labels.push_back(basis_label(s, 4));
  noisy.axes = {SweepAxis::labels(AxisParameter::kInitialState, labels)};
  const auto m4 = cell_means(noisy);
  const double min4 = *std::min_element(m4.begin(), m4.end());

  auto clean = noisy;
  clean.base.distribution.sigma_J = 0.0;
  clean.seed = 103;
  const auto m3 = cell_means(clean);
  const double min3 = *std::min_element(m3.begin(), m3.end());

  // Ferromagnetic state over a coarse (eps, J0) grid without charge noise.
  auto ferro = clean;
  ferro.initial_state = "0000";
  ferro.axes = {SweepAxis::list(AxisParameter::kEpsilon, {0.02, 0.04, 0.06, 0.1}),
                SweepAxis::list(AxisParameter::kJ0, {0.5, 1.0, 1.5, 2.0, 3.0, 5.0})};
  const auto mf = cell_means(ferro);
  const double best_ferro = *std::max_element(mf.begin(), mf.end());

  const bool pass = min4 >= 0.5 && min3 <= 0.2 && best_ferro >= 0.5;
  return {pass, fmt("eps=0.02, 100 realizations: min over 16 states Z3 = %.3f with sJ=3 (>= 0.5), "
                    "%.3f with sJ=0 (<= 0.2); best |0000> cell with sJ=0: Z3 = %.3f (>= 0.5)",
                    min4, min3, best_ferro)};
}

Outcome sigma_h_insensitivity() {
  auto base = base_drive();
  base.epsilon = 0.02;
  base.distribution.J0 = 1.5;
  base.distribution.sigma_J = 3.0;
  double worst = 0.0;
  std::string text;
  for (double h0 : {5.0, 1.0e4}) {
    base.distribution.h0 = h0;
    auto spec = z3_campaign(base, 2000, 106);
    spec.axes = {SweepAxis::linear(AxisParameter::kSigmaH, 0.0, 100.0, 11)};
    const auto m = cell_means(spec);
    const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    worst = std::max(worst, *hi - *lo);
    text += fmt(" h0=%g: Z3 in [%.3f, %.3f];", h0, *lo, *hi);
  }
  return {worst <= 0.15, fmt("sigma_h in [0,100], 11 points, 2000 realizations:%s max spread %.3f (<= 0.15)",
                             text.c_str(), worst)};
}

Outcome j0_invariance() {
  // Exact part: every J shifted by 2 pi / t2 with the same uniform draws.
  double exact = 0.0;
  for (double t2 : {1.0, 2.0, 4.0}) {
    auto spec = z3_campaign(base_drive(), 50, 108);
    spec.base.t2 = t2;
    spec.base.distribution.sigma_J = 1.0;
    spec.observables = {ObservableId::z(1), ObservableId::z(3)};
    spec.axes = {SweepAxis::list(AxisParameter::kEpsilon, {0.02, 0.06, 0.1})};
    auto shifted = spec;
    shifted.base.distribution.J0 += 2 * pi / t2;
    const auto a = cell_means(spec);
    const auto b = cell_means(shifted);
    for (std::size_t i = 0; i < a.size(); ++i) exact = std::max(exact, std::abs(a[i] - b[i]));
  }

  // Statistical part: coarse (eps, sigma_J) diagrams at J0 = 5 and 10^4.
  auto coarse = z3_campaign(base_drive(), 500, 109);
  coarse.axes = {SweepAxis::list(AxisParameter::kEpsilon, {0.02, 0.06, 0.1, 0.14}),
                 SweepAxis::list(AxisParameter::kSigmaJ, {0.0, 0.1, 0.3, 0.6, 1.0})};
  std::vector<double> se5, se4;
  const auto m5 = cell_means(coarse, &se5);
  auto big = coarse;
  big.base.distribution.J0 = 1.0e4;
  const auto m4 = cell_means(big, &se4);
  int bad = 0;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < m5.size(); ++i) {
    const double combined = std::hypot(se5[i], se4[i]);
    const double z = std::abs(m5[i] - m4[i]) / std::max(combined, 1e-300);
    worst_z = std::max(worst_z, z);
    bad += std::abs(m5[i] - m4[i]) > 4.0 * combined;
  }
  return {exact <= 1e-10 && bad == 0,
          fmt("shift by 2 pi/t2 (t2 in {1,2,4}): max |dZ| = %.2e (tol 1e-10); J0=5 vs 10^4 on 4x5 grid, "
              "500 realizations: %d cells beyond 4 combined stderr (worst %.2f)",
              exact, bad, worst_z)};
}

Outcome lifetime_scaling() {
  ScalingSpec spec;
  spec.lengths = {3, 4, 5, 6};
  spec.base = base_drive();
  spec.base.epsilon = 0.10;
  spec.realizations = 400;
  spec.seed = 110;
  const auto fit = lifetime_scaling_campaign(spec, g_workers);

  std::vector<std::pair<double, double>> planted;
  for (int L = 3; L <= 13; ++L) planted.emplace_back(L, 1.3 * std::exp(2.2 * L));
  const auto fixture = fit_log_least_squares(planted);
  const bool exact = std::abs(fixture.prefactor - 1.3) <= 1e-9 && std::abs(fixture.rate - 2.2) <= 1e-12 &&
                     std::abs(fixture.r_squared - 1.0) <= 1e-12;

  std::string means;
  std::int64_t censored = 0;
  for (const auto& p : fit.points) {
    means += fmt(" L=%d:%.0f", p.L, p.mean_lifetime);
    censored += p.n_censored;
  }
  const bool pass = fit.n_fitted == 4 && fit.rate > 0.5 && fit.r_squared >= 0.9 && exact;
  return {pass, fmt("eps=0.10, J0=5, sJ=3, 400 realizations, cap 10^7:%s (censored %lld); b = %.3f (> 0.5), "
                    "R^2 = %.4f (>= 0.9), a = %.3f; planted 1.3 exp(2.2 L) recovered: a=%.12f b=%.12f",
                    means.c_str(), static_cast<long long>(censored), fit.rate, fit.r_squared,
                    fit.prefactor, fixture.prefactor, fixture.rate)};
}

Outcome h2i_convergence() {
  const auto d = base_drive().distribution;  // J0=5, sJ=3, h0=2e4, sh=50
  int monotone = 0;
  int ratios_ok = 0;
  double rmin = 1e300, rmax = 0.0;
  for (int r = 0; r < 50; ++r) {
    Rng rng(realization_seed(111, 0, r));
    const auto real = sample_realization(d, 4, rng);
    const Eigen::MatrixXd H = heisenberg_hamiltonian(real);
    const auto ising = hermitian_exponential(ising_hamiltonian(real), 1.0);
    auto error = [&](int n) {
      return operator_distance(make_h2i_composite(hermitian_exponential(H, 1.0 / n), 4, n).composite, ising);
    };
    monotone += error(8) > error(64) && error(64) > error(256);
    bool ok = true;
    for (int n : {32, 64, 128, 256}) {
      const double q = error(n) / error(2 * n);
      rmin = std::min(rmin, q);
      rmax = std::max(rmax, q);
      ok = ok && q >= 1.5 && q <= 2.5;
    }
    ratios_ok += ok;
  }
  const bool pass = monotone >= 45 && ratios_ok >= 45;
  return {pass, fmt("J0=5, sJ=3, h0=2e4, sh=50: strictly decreasing over n=8,64,256 on %d/50 (>= 45) [%s]; "
                    "error(n)/error(2n) in [1.5,2.5] for all n in {32..256} on %d/50 (>= 45) [%s], "
                    "observed ratios %.2f..%.2f",
                    monotone, monotone >= 45 ? "ok" : "FAIL", ratios_ok, ratios_ok >= 45 ? "ok" : "FAIL",
                    rmin, rmax)};
}

Outcome pulse_duration() {
  const double lo = 0.002, hi = 1.0;
  const int count = 25;
  std::vector<double> sigmas(count);
  for (int i = 0; i < count; ++i) sigmas[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
  std::vector<double> thresholds;
  bool within = true;
  std::string text;
  for (double t2 : {1.0, 2.0, 4.0}) {
    auto base = base_drive();
    base.epsilon = 0.02;
    base.t2 = t2;
    auto spec = z3_campaign(base, 2000, 112);
    spec.axes = {SweepAxis::list(AxisParameter::kSigmaJ, sigmas)};
    const auto m = cell_means(spec);
    // Smallest sigma_J from which Z3 stays >= 0.5; log-interpolated crossing.
    std::size_t i = m.size();
    while (i > 0 && m[i - 1] >= 0.5) --i;
    double crossing = NAN;
    if (i == 0) {
      crossing = sigmas[0];
    } else if (i < m.size()) {
      const double f = (0.5 - m[i - 1]) / (m[i] - m[i - 1]);
      crossing = std::exp(std::log(sigmas[i - 1]) + f * (std::log(sigmas[i]) - std::log(sigmas[i - 1])));
    }
    thresholds.push_back(crossing);
    const double target = 0.2 / t2;
    const bool ok = std::isfinite(crossing) && crossing >= target / 2 && crossing <= target * 2;
    within = within && ok;
    text += fmt(" t2=%g: sJ* = %.4f vs 0.2/t2 = %.3f [%s];", t2, crossing, target, ok ? "ok" : "FAIL");
  }
  const double r12 = thresholds[0] / thresholds[1];
  const double r24 = thresholds[1] / thresholds[2];
  const bool inverse = r12 >= 1.0 && r12 <= 4.0 && r24 >= 1.0 && r24 <= 4.0;
  return {within && inverse, fmt("eps=0.02, 2000 realizations:%s ratios sJ*(1)/sJ*(2) = %.2f, "
                                 "sJ*(2)/sJ*(4) = %.2f (1/t2 scaling within 2x: %s)",
                                 text.c_str(), r12, r24, inverse ? "ok" : "FAIL")};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  ::setenv("SOURCE_DATE_EPOCH", "0", 1);
  const fs::path dir = fs::temp_directory_path() / ("dtc_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  auto config = parse_config(R"({"axes":[{"name":"epsilon","min":0,"max":0.2,"count":6},
      {"name":"sigma_J","values":[0.1,3]}],"observables":["z1","z3","fspt","lifetime"],
      "epsilon":0.1,"initial_state":"random","realizations":40,"horizon":100,"seed":77,
      "scaling":{"lengths":[3,4],"horizon_cap":100000}})");
  bool same = true;
  std::size_t files = 0;
  for (const char* format : {"csv", "json"}) {
    std::string reference;
    std::string scaling_ref;
    for (int workers : {1, 2, 3, 8}) {
      CommandOptions opts;
      opts.workers = workers;
      opts.format = output_format_from_string(format);
      opts.output = (dir / fmt("sweep_%d.%s", workers, format)).string();
      cmd_sweep(config, opts);
      const auto text = slurp(opts.output);
      opts.output = (dir / fmt("scaling_%d.%s", workers, format)).string();
      cmd_scaling(config, opts);
      const auto scaling_text = slurp(opts.output);
      files += 2;
      if (reference.empty()) {
        reference = text;
        scaling_ref = scaling_text;
      }
      same = same && text == reference && scaling_text == scaling_ref && !text.empty();
    }
  }
  fs::remove_all(dir);
  return {same, fmt("sweep and scaling records, csv and json, workers 1/2/3/8: %zu files, byte-identical: %s",
                    files, same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the Floquet DTC simulator"};
  app.add_option("--workers", g_workers, "Worker threads for campaigns")->check(CLI::PositiveNumber);
  std::string only;
  app.add_option("--only", only, "Run only criteria whose name contains this text");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"period-doubling", period_doubling},
      {"spin-echo", spin_echo},
      {"oracle-equivalence", oracle_equivalence},
      {"fspt-signature", fspt_signature},
      {"charge-noise-stabilization", charge_noise_stabilization},
      {"initial-state-independence", initial_state_independence},
      {"sigma-h-insensitivity", sigma_h_insensitivity},
      {"j0-invariance", j0_invariance},
      {"lifetime-scaling", lifetime_scaling},
      {"h2i-convergence", h2i_convergence},
      {"pulse-duration", pulse_duration},
      {"determinism", determinism},
  };

  int failed = 0;
  int ran = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && name.find(only) == std::string::npos) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !out.pass;
    std::printf("%s %-28s %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), s);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed;
}
