#include "dtc/state_vector.hpp"

#include <cmath>
#include <string>

#include "dtc/errors.hpp"

namespace dtc {

namespace {

void check_size(int n_qubits) {
  if (n_qubits < 1 || n_qubits > StateVector::kMaxQubits) {
    throw InvalidInput("qubit count must be in [1, " +
                       std::to_string(StateVector::kMaxQubits) + "], got " +
                       std::to_string(n_qubits));
  }
}

}  // namespace

std::uint64_t basis_index(std::string_view bits) {
  if (bits.empty()) throw InvalidInput("basis label must not be empty");
  if (bits.size() > static_cast<std::size_t>(StateVector::kMaxQubits)) {
    throw InvalidInput("basis label longer than " +
                       std::to_string(StateVector::kMaxQubits) + " qubits");
  }
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw InvalidInput("basis label '" + std::string(bits) +
                         "' contains non-binary character '" + c + "'");
    }
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return index;
}

std::string basis_label(std::uint64_t index, int n_qubits) {
  check_size(n_qubits);
  std::string label(static_cast<std::size_t>(n_qubits), '0');
  for (int k = 1; k <= n_qubits; ++k) {
    if (index & qubit_mask(n_qubits, k)) label[static_cast<std::size_t>(k - 1)] = '1';
  }
  return label;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_size(n_qubits);
  amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_size(n_qubits);
  if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
    throw InvalidInput("amplitude vector has length " +
                       std::to_string(amplitudes_.size()) + ", expected 2^" +
                       std::to_string(n_qubits));
  }
}

StateVector StateVector::basis(std::string_view bits) {
  const auto index = basis_index(bits);
  StateVector state(static_cast<int>(bits.size()));
  state.amplitudes_[0] = 0.0;
  state.amplitudes_[index] = 1.0;
  return state;
}

double StateVector::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return sum;
}

void StateVector::check_qubit(int k) const {
  if (k < 1 || k > n_qubits_) {
    throw InvalidInput("qubit index " + std::to_string(k) + " outside [1, " +
                       std::to_string(n_qubits_) + "]");
  }
}

double StateVector::expect_z(int k) const {
  check_qubit(k);
  const auto mask = qubit_mask(n_qubits_, k);
  double sum = 0.0;
  for (std::size_t s = 0; s < amplitudes_.size(); ++s) {
    const double p = std::norm(amplitudes_[s]);
    sum += (s & mask) ? -p : p;
  }
  return sum;
}

StateVector& StateVector::apply_x_rotation(int k, double angle) {
  check_qubit(k);
  const double c = std::cos(angle);
  const Complex mis{0.0, -std::sin(angle)};
  const auto mask = qubit_mask(n_qubits_, k);
  for (std::size_t s = 0; s < amplitudes_.size(); ++s) {
    if (s & mask) continue;
    const Complex a0 = amplitudes_[s];
    const Complex a1 = amplitudes_[s | mask];
    amplitudes_[s] = c * a0 + mis * a1;
    amplitudes_[s | mask] = mis * a0 + c * a1;
  }
  return *this;
}

StateVector& StateVector::apply_global_x_rotation(double angle) {
  for (int k = 1; k <= n_qubits_; ++k) apply_x_rotation(k, angle);
  return *this;
}

StateVector& StateVector::apply_z_rotation(int k, double angle) {
  check_qubit(k);
  const Complex up = std::polar(1.0, -angle);
  const Complex down = std::polar(1.0, angle);
  const auto mask = qubit_mask(n_qubits_, k);
  for (std::size_t s = 0; s < amplitudes_.size(); ++s) {
    amplitudes_[s] *= (s & mask) ? down : up;
  }
  return *this;
}

StateVector& StateVector::apply_diagonal_phases(std::span<const double> phases) {
  if (phases.size() != amplitudes_.size()) {
    throw InvalidInput("phase table has length " + std::to_string(phases.size()) +
                       ", state dimension is " + std::to_string(amplitudes_.size()));
  }
  for (std::size_t s = 0; s < amplitudes_.size(); ++s) {
    amplitudes_[s] *= std::polar(1.0, -phases[s]);
  }
  return *this;
}

StateVector& StateVector::apply_matrix(const Eigen::MatrixXcd& unitary) {
  const auto n = static_cast<Eigen::Index>(amplitudes_.size());
  if (unitary.rows() != n || unitary.cols() != n) {
    throw InvalidInput("matrix is " + std::to_string(unitary.rows()) + "x" +
                       std::to_string(unitary.cols()) + ", state dimension is " +
                       std::to_string(n));
  }
  scratch_.resize(amplitudes_.size());
  Eigen::Map<Eigen::VectorXcd> out(scratch_.data(), n);
  out.noalias() = unitary * as_eigen();
  amplitudes_.swap(scratch_);
  return *this;
}

}  // namespace dtc
