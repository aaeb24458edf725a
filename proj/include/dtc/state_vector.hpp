#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dtc {

using Complex = std::complex<double>;

/// Bit mask of qubit `k` (1-based) in a chain of `n_qubits`.
///
/// Qubit 1 is the most significant bit of the basis index, so the label
/// "1000" on four qubits is index 8. A bit value of 0 is spin up
/// (<sigma^z> = +1) and 1 is spin down (<sigma^z> = -1).
constexpr std::uint64_t qubit_mask(int n_qubits, int k) {
  return std::uint64_t{1} << (n_qubits - k);
}

/// Exact pure state of an L-qubit chain in the computational basis.
///
/// All mutating operations are unitary; the norm is never repaired.
class StateVector {
 public:
  /// Largest chain the dense amplitude vector is allowed to hold.
  static constexpr int kMaxQubits = 30;

  /// |0...0> on `n_qubits` qubits.
  explicit StateVector(int n_qubits);

  /// Takes ownership of `amplitudes`; its length must be 2^n_qubits.
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  /// Computational basis state from a label such as "1000".
  static StateVector basis(std::string_view bits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }

  double norm_squared() const noexcept;

  /// <sigma^z_k> for 1 <= k <= L.
  double expect_z(int k) const;

  /// exp(-i * angle * sigma^x) on qubit k. With angle = (pi/2)(1 - eps) this
  /// is exactly one qubit's factor of the imperfect global pi-pulse.
  StateVector& apply_x_rotation(int k, double angle);

  /// exp(-i * angle * sigma^z) on qubit k.
  StateVector& apply_z_rotation(int k, double angle);

  /// The same x rotation on every qubit.
  StateVector& apply_global_x_rotation(double angle);

  /// amplitude_s <- amplitude_s * exp(-i * phases_s).
  StateVector& apply_diagonal_phases(std::span<const double> phases);

  /// Dense matrix-vector product; `unitary` must be dim x dim.
  StateVector& apply_matrix(const Eigen::MatrixXcd& unitary);

  Eigen::Map<const Eigen::VectorXcd> as_eigen() const noexcept {
    return {amplitudes_.data(), static_cast<Eigen::Index>(amplitudes_.size())};
  }

 private:
  void check_qubit(int k) const;

  int n_qubits_;
  std::vector<Complex> amplitudes_;
  std::vector<Complex> scratch_;
};

/// Parses a bitstring label into a basis index under the MSB-first convention.
std::uint64_t basis_index(std::string_view bits);

/// Inverse of basis_index.
std::string basis_label(std::uint64_t index, int n_qubits);

}  // namespace dtc
