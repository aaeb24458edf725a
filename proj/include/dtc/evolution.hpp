#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "dtc/model.hpp"
#include "dtc/state_vector.hpp"

namespace dtc {

/// Ising interaction segment as a diagonal phase table.
struct DiagonalPhases {
  std::vector<double> phases;
};

/// Interaction segment as a dense unitary.
struct DenseUnitary {
  Eigen::MatrixXcd matrix;
};

/// Heisenberg segment broken into `pulses` slices with z pi-pulses on the
/// qubits in `pulse_mask` toggled between consecutive slices.
struct H2IComposite {
  Eigen::MatrixXcd segment;    // exp(-i H t2 / pulses)
  std::uint64_t pulse_mask{};  // basis-index bits of the pulsed qubits
  int pulses{};
  Eigen::MatrixXcd composite;  // the full bracket, precomposed
};

using InteractionStep = std::variant<DiagonalPhases, DenseUnitary, H2IComposite>;

/// Everything needed to advance a state by one Floquet period. Compiled
/// once per disorder realization and reused for every period.
struct FloquetStepPlan {
  int n_qubits{};
  double u1_angle{};  // (pi/2)(1 - epsilon), per qubit
  double period{};    // t1 + t2
  InteractionStep interaction;
};

/// exp(-i H t) for a real symmetric H via eigendecomposition.
Eigen::MatrixXcd hermitian_exponential(const Eigen::MatrixXd& hamiltonian, double t);

/// Basis-index mask of the odd-labelled qubits 1, 3, 5, ...
std::uint64_t odd_site_mask(int n_qubits);

/// Dense diagonal of exp(+i (pi/2) sum_{k in mask} sigma^z_k).
Eigen::VectorXcd z_pulse_diagonal(int n_qubits, std::uint64_t mask);

/// [P U P^dagger U]^(pulses/2) with P = prod_{k in mask} exp(+i (pi/2) sigma^z_k).
Eigen::MatrixXcd h2i_bracket(const Eigen::MatrixXcd& segment, int n_qubits,
                             std::uint64_t mask, int pulses);

/// H2I plan component from a slice unitary; `pulses` must be even and >= 2.
H2IComposite make_h2i_composite(Eigen::MatrixXcd segment, int n_qubits, int pulses);

FloquetStepPlan compile_step(const FloquetDriveSpec& spec,
                             const DisorderRealization& realization);

/// state <- U2 U1 state: pulse first, then the interaction segment.
void apply_period(StateVector& state, const FloquetStepPlan& plan);

/// One period for an H2I plan, applying the slices and toggling pulses one
/// by one rather than through the precomposed matrix.
void apply_h2i_period(StateVector& state, const FloquetStepPlan& plan);

/// The interaction segment of `plan` as a dense matrix.
Eigen::MatrixXcd interaction_unitary(const FloquetStepPlan& plan);

/// Largest singular value of a - b.
double operator_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// max |U^dagger U - I|, elementwise.
double unitarity_defect(const Eigen::MatrixXcd& u);

}  // namespace dtc
