#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dtc {

/// How the bond-coupling law treats the nonnegativity cut at J = 0.
enum class Truncation {
  /// Uniform on [max(J0 - sigma_J, 0), J0 + sigma_J].
  kRenormalize,
  /// Uniform on [J0 - sigma_J, J0 + sigma_J], negative draws set to 0.
  kClip,
};

std::string_view to_string(Truncation mode);
Truncation truncation_from_string(std::string_view name);

/// Uniform disorder laws for bond couplings and onsite fields.
struct DisorderDistribution {
  double J0 = 5.0;
  double sigma_J = 3.0;
  double h0 = 2.0e4;
  double sigma_h = 50.0;
  Truncation truncation = Truncation::kRenormalize;

  void validate() const;
  double bond_lower() const;
  double bond_upper() const { return J0 + sigma_J; }
};

/// One quenched draw: L-1 bond couplings and L onsite fields.
struct DisorderRealization {
  std::vector<double> bond_couplings;
  std::vector<double> onsite_fields;

  int n_qubits() const { return static_cast<int>(onsite_fields.size()); }
  void validate() const;

  /// No couplings and no fields on `n_qubits` sites.
  static DisorderRealization zero(int n_qubits);
};

enum class ModelKind { kIsing, kHeisenberg };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// Complete description of the binary Floquet drive.
struct FloquetDriveSpec {
  int L = 4;
  double epsilon = 0.0;
  double t1 = 1.0;
  double t2 = 1.0;
  ModelKind model = ModelKind::kIsing;
  /// Number of interleaved H2I pi-pulses; 0 disables them, otherwise even.
  int h2i_pulses = 0;
  DisorderDistribution distribution;

  void validate() const;
  double period() const { return t1 + t2; }
};

/// Largest chain for which dense 2^L x 2^L matrices are built.
inline constexpr int kDenseQubitCap = 12;

/// Pseudo-random stream used for every disorder draw.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw. Unlike
/// std::uniform_real_distribution the mapping is fixed across standard
/// libraries, so a seed pins the realization everywhere.
double uniform01(Rng& rng);

/// Seed for realization `realization` of grid cell `cell` in a campaign.
std::uint64_t realization_seed(std::uint64_t campaign_seed, std::uint64_t cell,
                               std::uint64_t realization);

DisorderRealization sample_realization(const DisorderDistribution& distribution,
                                       int L, Rng& rng);

/// Diagonal of H2 * t2 indexed by basis state:
/// t2 * (sum_n J_n z_n z_{n+1} + sum_n h_n z_n).
std::vector<double> ising_phase_table(const DisorderRealization& realization,
                                      double t2);

/// Dense sum_n J_n sigma_n . sigma_{n+1} + sum_n h_n sigma^z_n. The matrix is
/// real symmetric in the computational basis.
Eigen::MatrixXd heisenberg_hamiltonian(const DisorderRealization& realization,
                                       int max_qubits = kDenseQubitCap);

/// Dense diagonal Ising Hamiltonian; the same terms without the XX + YY part.
Eigen::MatrixXd ising_hamiltonian(const DisorderRealization& realization,
                                  int max_qubits = kDenseQubitCap);

}  // namespace dtc
