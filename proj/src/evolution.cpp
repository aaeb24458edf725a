#include "dtc/evolution.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dtc/errors.hpp"

namespace dtc {

Eigen::MatrixXcd hermitian_exponential(const Eigen::MatrixXd& hamiltonian, double t) {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw InvalidInput("Hamiltonian must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  const Eigen::MatrixXcd V = solver.eigenvectors().cast<Complex>();
  Eigen::VectorXcd phases(solver.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases[i] = std::polar(1.0, -solver.eigenvalues()[i] * t);
  }
  return V * phases.asDiagonal() * V.adjoint();
}

std::uint64_t odd_site_mask(int n_qubits) {
  std::uint64_t mask = 0;
  for (int k = 1; k <= n_qubits; k += 2) mask |= qubit_mask(n_qubits, k);
  return mask;
}

Eigen::VectorXcd z_pulse_diagonal(int n_qubits, std::uint64_t mask) {
  // exp(+i (pi/2) sigma^z) = i sigma^z on each pulsed qubit.
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::VectorXcd diag(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    Complex value{1.0, 0.0};
    for (int k = 1; k <= n_qubits; ++k) {
      const auto bit = qubit_mask(n_qubits, k);
      if (!(mask & bit)) continue;
      value *= (s & bit) ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
    }
    diag[static_cast<Eigen::Index>(s)] = value;
  }
  return diag;
}

Eigen::MatrixXcd h2i_bracket(const Eigen::MatrixXcd& segment, int n_qubits,
                             std::uint64_t mask, int pulses) {
  if (pulses < 2 || pulses % 2 != 0) {
    throw InvalidInput("H2I pulse count must be even and >= 2, got " +
                       std::to_string(pulses));
  }
  const Eigen::VectorXcd p = z_pulse_diagonal(n_qubits, mask);
  const Eigen::MatrixXcd toggled = p.asDiagonal() * segment * p.conjugate().asDiagonal();
  const Eigen::MatrixXcd pair = toggled * segment;
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(segment.rows(), segment.cols());
  for (int i = 0; i < pulses / 2; ++i) result = pair * result;
  return result;
}

H2IComposite make_h2i_composite(Eigen::MatrixXcd segment, int n_qubits, int pulses) {
  H2IComposite h2i;
  h2i.pulse_mask = odd_site_mask(n_qubits);
  h2i.pulses = pulses;
  h2i.composite = h2i_bracket(segment, n_qubits, h2i.pulse_mask, pulses);
  h2i.segment = std::move(segment);
  return h2i;
}

FloquetStepPlan compile_step(const FloquetDriveSpec& spec,
                             const DisorderRealization& realization) {
  spec.validate();
  realization.validate();
  if (realization.n_qubits() != spec.L) {
    throw InvalidInput("realization has " + std::to_string(realization.n_qubits()) +
                       " sites but the drive has L=" + std::to_string(spec.L));
  }
  FloquetStepPlan plan;
  plan.n_qubits = spec.L;
  plan.u1_angle = std::numbers::pi / 2.0 * (1.0 - spec.epsilon);
  plan.period = spec.period();

  if (spec.model == ModelKind::kIsing) {
    plan.interaction = DiagonalPhases{ising_phase_table(realization, spec.t2)};
    return plan;
  }
  const Eigen::MatrixXd H = heisenberg_hamiltonian(realization);
  if (spec.h2i_pulses == 0) {
    plan.interaction = DenseUnitary{hermitian_exponential(H, spec.t2)};
  } else {
    plan.interaction = make_h2i_composite(
        hermitian_exponential(H, spec.t2 / spec.h2i_pulses), spec.L, spec.h2i_pulses);
  }
  return plan;
}

namespace {

void check_plan(const StateVector& state, const FloquetStepPlan& plan) {
  if (state.n_qubits() != plan.n_qubits) {
    throw InvalidInput("state has " + std::to_string(state.n_qubits()) +
                       " qubits, plan expects " + std::to_string(plan.n_qubits));
  }
}

}  // namespace

void apply_period(StateVector& state, const FloquetStepPlan& plan) {
  check_plan(state, plan);
  state.apply_global_x_rotation(plan.u1_angle);
  std::visit(
      [&state](const auto& step) {
        using T = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<T, DiagonalPhases>) {
          state.apply_diagonal_phases(step.phases);
        } else if constexpr (std::is_same_v<T, DenseUnitary>) {
          state.apply_matrix(step.matrix);
        } else {
          state.apply_matrix(step.composite);
        }
      },
      plan.interaction);
}

void apply_h2i_period(StateVector& state, const FloquetStepPlan& plan) {
  check_plan(state, plan);
  const auto* h2i = std::get_if<H2IComposite>(&plan.interaction);
  if (h2i == nullptr) throw InvalidInput("plan does not carry an H2I composite");
  if (h2i->pulses < 2 || h2i->pulses % 2 != 0) {
    throw InvalidInput("H2I pulse count must be even and >= 2, got " +
                       std::to_string(h2i->pulses));
  }
  const int L = plan.n_qubits;
  constexpr double kHalfPi = std::numbers::pi / 2.0;

  state.apply_global_x_rotation(plan.u1_angle);
  for (int pair = 0; pair < h2i->pulses / 2; ++pair) {
    state.apply_matrix(h2i->segment);
    // P^dagger = prod exp(-i (pi/2) sigma^z_k)
    for (int k = 1; k <= L; ++k) {
      if (h2i->pulse_mask & qubit_mask(L, k)) state.apply_z_rotation(k, kHalfPi);
    }
    state.apply_matrix(h2i->segment);
    for (int k = 1; k <= L; ++k) {
      if (h2i->pulse_mask & qubit_mask(L, k)) state.apply_z_rotation(k, -kHalfPi);
    }
  }
}

Eigen::MatrixXcd interaction_unitary(const FloquetStepPlan& plan) {
  return std::visit(
      [](const auto& step) -> Eigen::MatrixXcd {
        using T = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<T, DiagonalPhases>) {
          Eigen::VectorXcd diag(static_cast<Eigen::Index>(step.phases.size()));
          for (std::size_t s = 0; s < step.phases.size(); ++s) {
            diag[static_cast<Eigen::Index>(s)] = std::polar(1.0, -step.phases[s]);
          }
          return diag.asDiagonal();
        } else if constexpr (std::is_same_v<T, DenseUnitary>) {
          return step.matrix;
        } else {
          return step.composite;
        }
      },
      plan.interaction);
}

double operator_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("operator_distance: shape mismatch");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a - b);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  return (gram - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace dtc
