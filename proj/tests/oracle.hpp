#pragma once

// Brute-force dense constructions used as independent references in tests.
// Everything here is built from 2x2 Pauli matrices and Kronecker products,
// and exponentials use Eigen's Pade scaling-and-squaring, never the
// library's own eigendecomposition path.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

inline Mat pauli(char which) {
  Mat m(2, 2);
  const cd i{0.0, 1.0};
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -i, i, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

/// Operator acting as `op` on site k (1-based, leftmost factor is site 1)
/// and identity elsewhere.
inline Mat on_site(const Mat& op, int k, int L) {
  Mat out = Mat::Identity(1, 1);
  for (int site = 1; site <= L; ++site) {
    const Mat factor = site == k ? op : Mat::Identity(2, 2);
    Mat next = Eigen::kroneckerProduct(out, factor).eval();
    out = next;
  }
  return out;
}

inline Mat two_site(char a, int k, char b, int m, int L) {
  return on_site(pauli(a), k, L) * on_site(pauli(b), m, L);
}

inline Mat ising(const std::vector<double>& J, const std::vector<double>& h) {
  const int L = static_cast<int>(h.size());
  const long d = 1L << L;
  Mat H = Mat::Zero(d, d);
  for (int n = 1; n < L; ++n) H += J[n - 1] * two_site('z', n, 'z', n + 1, L);
  for (int n = 1; n <= L; ++n) H += h[n - 1] * on_site(pauli('z'), n, L);
  return H;
}

inline Mat heisenberg(const std::vector<double>& J, const std::vector<double>& h) {
  const int L = static_cast<int>(h.size());
  Mat H = ising(J, h);
  for (int n = 1; n < L; ++n) {
    H += J[n - 1] * (two_site('x', n, 'x', n + 1, L) + two_site('y', n, 'y', n + 1, L));
  }
  return H;
}

/// exp(-i H t) by Pade scaling and squaring.
inline Mat expm_i(const Mat& H, double t) {
  const Mat A = (cd{0.0, -t} * H).eval();
  return A.exp();
}

/// Global pulse prod_k exp(-i angle sigma^x_k) as a dense matrix.
inline Mat global_x(double angle, int L) {
  Mat sum = Mat::Zero(1L << L, 1L << L);
  for (int k = 1; k <= L; ++k) sum += on_site(pauli('x'), k, L);
  return expm_i(sum, angle);
}

inline Vec basis(const std::string& bits) {
  const int L = static_cast<int>(bits.size());
  Vec v = Vec::Zero(1L << L);
  long index = 0;
  for (char c : bits) index = 2 * index + (c == '1');
  v(index) = 1.0;
  return v;
}

inline double expect(const Mat& op, const Vec& psi) {
  return (psi.adjoint() * op * psi)(0, 0).real();
}

}  // namespace oracle
