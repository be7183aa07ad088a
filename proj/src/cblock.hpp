#pragma once

#include <complex>

#include <Eigen/Dense>

// Helpers for real-packed complex components: a complex value at index k
// occupies slots (k, k+1).
namespace superrad::detail {

using cd = std::complex<double>;

inline cd cget(const Eigen::VectorXd& x, int k) { return {x[k], x[k + 1]}; }

inline void cset(Eigen::VectorXd& x, int k, cd v) {
  x[k] = v.real();
  x[k + 1] = v.imag();
}

inline void cadd(Eigen::VectorXd& x, int k, cd v) {
  x[k] += v.real();
  x[k + 1] += v.imag();
}

// Jacobian blocks for a complex output at rows (r, r+1): c * z_k.
inline void add_cw(Eigen::MatrixXd& J, int r, int k, cd c) {
  J(r, k) += c.real();
  J(r, k + 1) -= c.imag();
  J(r + 1, k) += c.imag();
  J(r + 1, k + 1) += c.real();
}

// c * conj(z_k).
inline void add_cconj(Eigen::MatrixXd& J, int r, int k, cd c) {
  J(r, k) += c.real();
  J(r, k + 1) += c.imag();
  J(r + 1, k) += c.imag();
  J(r + 1, k + 1) -= c.real();
}

// c * x_k for a real component x_k.
inline void add_creal(Eigen::MatrixXd& J, int r, int k, cd c) {
  J(r, k) += c.real();
  J(r + 1, k) += c.imag();
}

}  // namespace superrad::detail
