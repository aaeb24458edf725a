#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dtc/errors.hpp"
#include "dtc/evolution.hpp"
#include "oracle.hpp"

using namespace dtc;
using std::numbers::pi;

namespace {

DisorderRealization draw(const DisorderDistribution& d, int L, std::uint64_t seed) {
  Rng rng(seed);
  return sample_realization(d, L, rng);
}

FloquetDriveSpec drive(int L, double eps, ModelKind model = ModelKind::kIsing, int pulses = 0) {
  FloquetDriveSpec s;
  s.L = L;
  s.epsilon = eps;
  s.model = model;
  s.h2i_pulses = pulses;
  return s;
}

// U_H(t2/n) bracket built from scratch: (P S P^dag S)^(n/2) with
// P = exp(+i pi/2 sum_{odd k} sigma^z_k).
oracle::Mat oracle_h2i(const oracle::Mat& H, int L, double t2, int n) {
  oracle::Mat zsum = oracle::Mat::Zero(1L << L, 1L << L);
  for (int k = 1; k <= L; k += 2) zsum += oracle::on_site(oracle::pauli('z'), k, L);
  const oracle::Mat P = oracle::expm_i(zsum, -pi / 2);
  const oracle::Mat S = oracle::expm_i(H, t2 / n);
  const oracle::Mat block = P * S * P.adjoint() * S;
  oracle::Mat out = oracle::Mat::Identity(1L << L, 1L << L);
  for (int i = 0; i < n / 2; ++i) out = block * out;
  return out;
}

double max_amp_diff(const StateVector& s, const oracle::Vec& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) m = std::max(m, std::abs(s.amplitude(i) - v(static_cast<long>(i))));
  return m;
}

}  // namespace

TEST_CASE("perfect pulses with an Ising interaction give exact period doubling") {
  const auto plan = compile_step(drive(4, 0.0), draw({}, 4, 1));
  auto s = StateVector::basis("0000");
  apply_period(s, plan);
  for (int k = 1; k <= 4; ++k) CHECK(s.expect_z(k) == doctest::Approx(-1.0).epsilon(1e-15));
  apply_period(s, plan);
  for (int k = 1; k <= 4; ++k) CHECK(s.expect_z(k) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("epsilon = 1 leaves basis states fixed") {
  const auto plan = compile_step(drive(3, 1.0), draw({}, 3, 2));
  auto s = StateVector::basis("101");
  for (int t = 0; t < 500; ++t) apply_period(s, plan);
  CHECK(s.expect_z(1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.expect_z(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.expect_z(3) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("Ising interaction never changes populations") {
  const auto plan = compile_step(drive(4, 0.3), draw({}, 4, 3));
  REQUIRE(std::holds_alternative<DiagonalPhases>(plan.interaction));
  auto s = StateVector::basis("1001");
  s.apply_diagonal_phases(std::get<DiagonalPhases>(plan.interaction).phases);
  CHECK(std::abs(s.amplitude(9)) == 1.0);
}

TEST_CASE("t2 = 0 makes the interaction segment the identity") {
  auto spec = drive(3, 0.1);
  spec.t2 = 0.0;
  const auto plan = compile_step(spec, draw({}, 3, 4));
  CHECK(std::get<DiagonalPhases>(plan.interaction).phases == std::vector<double>(8, 0.0));
  spec.model = ModelKind::kHeisenberg;
  const auto hplan = compile_step(spec, draw({}, 3, 4));
  const auto U = interaction_unitary(hplan);
  CHECK((U - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spin echo: uncoupled spins follow cos(2 pi n eps)") {
  for (int L : {1, 2, 3}) {
    for (double eps : {0.05, 0.1, 0.25}) {
      const auto plan = compile_step(drive(L, eps), DisorderRealization::zero(L));
      std::string label(static_cast<std::size_t>(L), '0');
      label[0] = '1';
      auto s = StateVector::basis(label);
      double worst = 0.0;
      for (int n = 1; n <= 1000; ++n) {
        apply_period(s, plan);
        apply_period(s, plan);
        const double c = std::cos(2 * pi * n * eps);
        worst = std::max(worst, std::abs(s.expect_z(1) + c));  // bit 1 starts at -1
        if (L > 1) worst = std::max(worst, std::abs(s.expect_z(2) - c));
      }
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("spin echo: first revival after 2/eps periods") {
  for (double eps : {0.05, 0.1, 0.25}) {
    const auto plan = compile_step(drive(1, eps), DisorderRealization::zero(1));
    auto s = StateVector::basis("0");
    const int revival = static_cast<int>(std::lround(2.0 / eps));
    int first = -1;
    for (int t = 1; t <= 2 * revival && first < 0; ++t) {
      apply_period(s, plan);
      if (t % 2 == 0 && std::abs(s.expect_z(1) - 1.0) < 1e-10) first = t;
    }
    CHECK(first == revival);
  }
  // eps = 0.1: back to the initial state after 20 periods.
  const auto plan = compile_step(drive(1, 0.1), DisorderRealization::zero(1));
  auto s = StateVector::basis("0");
  for (int t = 0; t < 20; ++t) apply_period(s, plan);
  CHECK(std::abs(std::abs(s.amplitude(0)) - 1.0) < 1e-12);
}

TEST_CASE("fast path equals brute-force dense evolution on random specs") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int pulse_choices[] = {0, 2, 4, 8};
  for (int trial = 0; trial < 50; ++trial) {
    const int L = 1 + static_cast<int>(rng() % 4);
    const bool heis = trial % 2 == 1;
    const int pulses = heis ? pulse_choices[rng() % 4] : 0;
    auto spec = drive(L, 0.3 * u(rng), heis ? ModelKind::kHeisenberg : ModelKind::kIsing, pulses);
    spec.t2 = 0.2 + 1.5 * u(rng);
    spec.distribution.J0 = 5.0 * u(rng);
    spec.distribution.sigma_J = 3.0 * u(rng);
    spec.distribution.h0 = 20.0 * u(rng);
    spec.distribution.sigma_h = 5.0 * u(rng);
    const auto r = draw(spec.distribution, L, rng());
    const auto plan = compile_step(spec, r);

    oracle::Mat U2;
    if (!heis) {
      U2 = oracle::expm_i(oracle::ising(r.bond_couplings, r.onsite_fields), spec.t2);
    } else if (pulses == 0) {
      U2 = oracle::expm_i(oracle::heisenberg(r.bond_couplings, r.onsite_fields), spec.t2);
    } else {
      U2 = oracle_h2i(oracle::heisenberg(r.bond_couplings, r.onsite_fields), L, spec.t2, pulses);
    }
    const oracle::Mat UF = U2 * oracle::global_x(pi / 2 * (1 - spec.epsilon), L);

    std::string label;
    for (int k = 0; k < L; ++k) label += (rng() & 1) ? '1' : '0';
    auto s = StateVector::basis(label);
    oracle::Vec v = oracle::basis(label);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      apply_period(s, plan);
      v = UF * v;
      worst = std::max(worst, max_amp_diff(s, v));
    }
    CHECK_MESSAGE(worst <= 1e-9, "trial " << trial << " L=" << L << " pulses=" << pulses);
  }
}

TEST_CASE("Ising fast path equals the dense exponential per amplitude") {
  DisorderDistribution d;
  for (int L : {1, 2, 3, 4}) {
    const auto r = draw(d, L, 100 + L);
    const auto plan = compile_step(drive(L, 0.07), r);
    const oracle::Mat U2 = oracle::expm_i(oracle::ising(r.bond_couplings, r.onsite_fields), 1.0);
    const auto dense = interaction_unitary(plan);
    // Exact diagonal phases (h0 = 2e4) versus Pade on the diagonal matrix.
    CHECK((dense - U2).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("Heisenberg dense unitary: unitary and a semigroup") {
  DisorderDistribution d;
  d.h0 = 3.0;
  d.sigma_h = 1.0;
  const auto r = draw(d, 4, 5);
  auto spec = drive(4, 0.0, ModelKind::kHeisenberg);
  spec.distribution = d;
  const auto once = compile_step(spec, r);
  spec.t2 = 2.0;
  const auto twice = compile_step(spec, r);
  const auto U = interaction_unitary(once);
  CHECK(unitarity_defect(U) <= 1e-10);
  CHECK((U * U - interaction_unitary(twice)).cwiseAbs().maxCoeff() <= 1e-12);
  const oracle::Mat ref = oracle::expm_i(oracle::heisenberg(r.bond_couplings, r.onsite_fields), 1.0);
  CHECK((U - ref).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("H2I bracket collapses to the identity without couplings or fields") {
  const auto I = Eigen::MatrixXcd::Identity(16, 16);
  for (int n : {2, 8, 64}) {
    const auto c = make_h2i_composite(I, 4, n);
    CHECK((c.composite - I).cwiseAbs().maxCoeff() < 1e-15);
  }
  auto spec = drive(4, 0.0, ModelKind::kHeisenberg, 8);
  const auto plan = compile_step(spec, DisorderRealization::zero(4));
  CHECK((interaction_unitary(plan) - I).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("H2I on an already-Ising interaction reproduces the plain U2") {
  DisorderDistribution d;
  d.h0 = 7.0;
  d.sigma_h = 2.0;
  const auto r = draw(d, 4, 6);
  const Eigen::MatrixXd H = ising_hamiltonian(r);
  const auto U2 = hermitian_exponential(H, 1.0);
  for (int n : {2, 4, 8, 64, 256}) {
    const auto c = make_h2i_composite(hermitian_exponential(H, 1.0 / n), 4, n);
    CHECK(operator_distance(c.composite, U2) < 1e-10);
  }
}

TEST_CASE("H2I pulse mask is the odd-labelled qubits") {
  CHECK(odd_site_mask(4) == 0b1010);
  CHECK(odd_site_mask(3) == 0b101);
  CHECK(odd_site_mask(1) == 0b1);
  const auto diag = z_pulse_diagonal(2, odd_site_mask(2));
  // exp(+i pi/2 sigma^z_1): +i for qubit 1 up, -i for down.
  CHECK(std::abs(diag(0) - oracle::cd(0, 1)) < 1e-15);
  CHECK(std::abs(diag(2) - oracle::cd(0, -1)) < 1e-15);
}

TEST_CASE("odd pulse counts are rejected") {
  const auto I = Eigen::MatrixXcd::Identity(4, 4);
  CHECK_THROWS_AS(make_h2i_composite(I, 2, 3), InvalidInput);
  CHECK_THROWS_AS(make_h2i_composite(I, 2, 0), InvalidInput);
  CHECK_THROWS_AS(h2i_bracket(I, 2, 1, 5), InvalidInput);
}

TEST_CASE("literal H2I sequence equals the precomposed bracket") {
  DisorderDistribution d;
  for (int n : {2, 8, 32}) {
    auto spec = drive(4, 0.04, ModelKind::kHeisenberg, n);
    const auto plan = compile_step(spec, draw(d, 4, 10 + n));
    auto a = StateVector::basis("1000");
    auto b = a;
    for (int t = 0; t < 30; ++t) {
      apply_period(a, plan);
      apply_h2i_period(b, plan);
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.amplitude(i) - b.amplitude(i)));
    CHECK(m < 1e-9);
  }
  const auto ising_plan = compile_step(drive(4, 0.0), draw(d, 4, 1));
  auto s = StateVector(4);
  CHECK_THROWS_AS(apply_h2i_period(s, ising_plan), InvalidInput);
}

TEST_CASE("H2I error halves per pulse doubling in the asymptotic regime") {
  DisorderDistribution d;
  d.J0 = 1.0;
  d.sigma_J = 0.5;
  d.h0 = 0.0;
  d.sigma_h = 1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = draw(d, 4, seed);
    const Eigen::MatrixXd H = heisenberg_hamiltonian(r);
    const auto target = hermitian_exponential(ising_hamiltonian(r), 1.0);
    auto error = [&](int n) {
      return operator_distance(make_h2i_composite(hermitian_exponential(H, 1.0 / n), 4, n).composite,
                               target);
    };
    for (int n : {32, 64, 128}) {
      const double ratio = error(n) / error(2 * n);
      CHECK_MESSAGE(ratio >= 1.5, "seed " << seed << " n=" << n);
      CHECK_MESSAGE(ratio <= 2.5, "seed " << seed << " n=" << n);
    }
  }
}

TEST_CASE("every plan kind preserves the norm over 10^4 periods") {
  DisorderDistribution d;
  for (auto [model, pulses] : {std::pair{ModelKind::kIsing, 0}, std::pair{ModelKind::kHeisenberg, 0},
                               std::pair{ModelKind::kHeisenberg, 8}}) {
    const auto plan = compile_step(drive(4, 0.13, model, pulses), draw(d, 4, 77));
    auto s = StateVector::basis("1000");
    for (int t = 0; t < 10000; ++t) apply_period(s, plan);
    CHECK(std::abs(s.norm_squared() - 1.0) <= 1e-10);
    if (!std::holds_alternative<DiagonalPhases>(plan.interaction)) {
      CHECK(unitarity_defect(interaction_unitary(plan)) <= 1e-10);
    }
  }
}

TEST_CASE("global spin flip at eps = 0 leaves |<sigma^z>| trajectories unchanged") {
  DisorderDistribution d;  // sigma_h = 50
  const auto plan = compile_step(drive(4, 0.0), draw(d, 4, 8));
  for (const std::string label : {"1000", "0110", "1011"}) {
    std::string flipped = label;
    for (auto& c : flipped) c = c == '0' ? '1' : '0';
    auto a = StateVector::basis(label);
    auto b = StateVector::basis(flipped);
    for (int t = 1; t <= 200; ++t) {
      apply_period(a, plan);
      apply_period(b, plan);
      if (t % 2) continue;
      for (int k = 1; k <= 4; ++k) CHECK(std::abs(a.expect_z(k)) == doctest::Approx(std::abs(b.expect_z(k))).epsilon(1e-12));
    }
  }
}

TEST_CASE("Heisenberg above the dense cap is a capacity error") {
  auto spec = drive(13, 0.0, ModelKind::kHeisenberg);
  CHECK_THROWS_AS(compile_step(spec, DisorderRealization::zero(13)), CapacityError);
  CHECK_THROWS_AS(compile_step(drive(4, 0.0), DisorderRealization::zero(3)), InvalidInput);
}
