#include "dtc/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dtc/errors.hpp"
#include "dtc/state_vector.hpp"

namespace dtc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidInput(std::string(name) + " must be finite");
  }
}

void check_dense(int L, int max_qubits) {
  if (L > max_qubits) {
    throw CapacityError("dense Hamiltonian requested for L=" + std::to_string(L) +
                        " but the dense cap is L <= " + std::to_string(max_qubits));
  }
}

// Diagonal of the ZZ + Z part, without any time factor.
std::vector<double> ising_diagonal(const DisorderRealization& r) {
  r.validate();
  const int L = r.n_qubits();
  const std::size_t dim = std::size_t{1} << L;
  std::vector<double> diag(dim, 0.0);
  for (std::size_t s = 0; s < dim; ++s) {
    double energy = 0.0;
    for (int n = 1; n <= L; ++n) {
      const double zn = (s & qubit_mask(L, n)) ? -1.0 : 1.0;
      energy += r.onsite_fields[static_cast<std::size_t>(n - 1)] * zn;
      if (n < L) {
        const double zn1 = (s & qubit_mask(L, n + 1)) ? -1.0 : 1.0;
        energy += r.bond_couplings[static_cast<std::size_t>(n - 1)] * zn * zn1;
      }
    }
    diag[s] = energy;
  }
  return diag;
}

}  // namespace

std::string_view to_string(Truncation mode) {
  return mode == Truncation::kClip ? "clip" : "renormalize";
}

Truncation truncation_from_string(std::string_view name) {
  if (name == "renormalize") return Truncation::kRenormalize;
  if (name == "clip") return Truncation::kClip;
  throw InvalidInput("unknown truncation mode '" + std::string(name) +
                     "' (expected renormalize or clip)");
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kHeisenberg ? "heisenberg" : "ising";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "ising") return ModelKind::kIsing;
  if (name == "heisenberg") return ModelKind::kHeisenberg;
  throw InvalidInput("unknown model '" + std::string(name) +
                     "' (expected ising or heisenberg)");
}

void DisorderDistribution::validate() const {
  check_finite(J0, "J0");
  check_finite(sigma_J, "sigma_J");
  check_finite(h0, "h0");
  check_finite(sigma_h, "sigma_h");
  if (J0 < 0.0) throw InvalidInput("J0 must be >= 0");
  if (sigma_J < 0.0) throw InvalidInput("sigma_J must be >= 0");
  if (sigma_h < 0.0) throw InvalidInput("sigma_h must be >= 0");
}

double DisorderDistribution::bond_lower() const {
  return std::max(J0 - sigma_J, 0.0);
}

void DisorderRealization::validate() const {
  const auto L = onsite_fields.size();
  if (L == 0) throw InvalidInput("realization has no sites");
  if (bond_couplings.size() != L - 1) {
    throw InvalidInput("realization has " + std::to_string(bond_couplings.size()) +
                       " bonds for " + std::to_string(L) + " sites");
  }
}

DisorderRealization DisorderRealization::zero(int n_qubits) {
  if (n_qubits < 1) throw InvalidInput("chain length must be >= 1");
  return {std::vector<double>(static_cast<std::size_t>(n_qubits - 1), 0.0),
          std::vector<double>(static_cast<std::size_t>(n_qubits), 0.0)};
}

void FloquetDriveSpec::validate() const {
  if (L < 1 || L > StateVector::kMaxQubits) {
    throw InvalidInput("L must be in [1, " + std::to_string(StateVector::kMaxQubits) +
                       "], got " + std::to_string(L));
  }
  check_finite(epsilon, "epsilon");
  check_finite(t1, "t1");
  check_finite(t2, "t2");
  if (t1 <= 0.0) throw InvalidInput("t1 must be > 0");
  if (t2 < 0.0) throw InvalidInput("t2 must be >= 0");
  if (h2i_pulses < 0 || h2i_pulses % 2 != 0) {
    throw InvalidInput("h2i_pulses must be a nonnegative even integer, got " +
                       std::to_string(h2i_pulses));
  }
  if (h2i_pulses > 0 && model != ModelKind::kHeisenberg) {
    throw InvalidInput("H2I pulses apply only to the heisenberg model");
  }
  distribution.validate();
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t realization_seed(std::uint64_t campaign_seed, std::uint64_t cell,
                               std::uint64_t realization) {
  std::uint64_t h = splitmix64(campaign_seed);
  h = splitmix64(h ^ splitmix64(cell + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(realization + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

DisorderRealization sample_realization(const DisorderDistribution& distribution,
                                       int L, Rng& rng) {
  distribution.validate();
  if (L < 1) throw InvalidInput("chain length must be >= 1");
  DisorderRealization r;
  r.bond_couplings.resize(static_cast<std::size_t>(L - 1));
  r.onsite_fields.resize(static_cast<std::size_t>(L));

  const bool clip = distribution.truncation == Truncation::kClip;
  const double j_lo = clip ? distribution.J0 - distribution.sigma_J
                           : distribution.bond_lower();
  const double j_width = distribution.bond_upper() - j_lo;
  for (auto& J : r.bond_couplings) {
    J = j_lo + j_width * uniform01(rng);
    if (clip) J = std::max(J, 0.0);
  }
  const double h_lo = distribution.h0 - distribution.sigma_h;
  const double h_width = 2.0 * distribution.sigma_h;
  for (auto& h : r.onsite_fields) h = h_lo + h_width * uniform01(rng);
  return r;
}

std::vector<double> ising_phase_table(const DisorderRealization& realization,
                                      double t2) {
  auto table = ising_diagonal(realization);
  for (auto& phase : table) phase *= t2;
  return table;
}

Eigen::MatrixXd ising_hamiltonian(const DisorderRealization& realization,
                                  int max_qubits) {
  check_dense(realization.n_qubits(), max_qubits);
  const auto diag = ising_diagonal(realization);
  return Eigen::Map<const Eigen::VectorXd>(diag.data(),
                                           static_cast<Eigen::Index>(diag.size()))
      .asDiagonal();
}

Eigen::MatrixXd heisenberg_hamiltonian(const DisorderRealization& realization,
                                       int max_qubits) {
  realization.validate();
  const int L = realization.n_qubits();
  check_dense(L, max_qubits);
  Eigen::MatrixXd H = ising_hamiltonian(realization, max_qubits);
  const auto dim = static_cast<std::uint64_t>(H.rows());
  // sigma^x sigma^x + sigma^y sigma^y = 2 (sigma^+ sigma^- + sigma^- sigma^+):
  // it swaps antiparallel neighbours with amplitude 2 J_n.
  for (int n = 1; n < L; ++n) {
    const double J = realization.bond_couplings[static_cast<std::size_t>(n - 1)];
    const auto pair = qubit_mask(L, n) | qubit_mask(L, n + 1);
    for (std::uint64_t s = 0; s < dim; ++s) {
      const auto bits = s & pair;
      if (bits == 0 || bits == pair) continue;
      H(static_cast<Eigen::Index>(s ^ pair), static_cast<Eigen::Index>(s)) += 2.0 * J;
    }
  }
  return H;
}

}  // namespace dtc
