#pragma once

#include <Eigen/Dense>

#include "bcl/fock.hpp"
#include "bcl/random.hpp"

namespace bcl::test {

inline Eigen::VectorXcd random_unit_vector(GaussianSampler& rng, int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(rng(), rng());
  v.normalize();
  return v;
}

inline PureState random_pure_state(GaussianSampler& rng, const Truncation& trunc) {
  return PureState(random_unit_vector(rng, trunc.dim), trunc, 0.0);
}

/// Haar-random pure state supported on the lowest `support` levels.
inline PureState random_low_energy_state(GaussianSampler& rng, const Truncation& trunc,
                                         int support) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(trunc.dim);
  for (int i = 0; i < support; ++i) v(i) = Complex(rng(), rng());
  v.normalize();
  return PureState(std::move(v), trunc, 0.0);
}

/// Ginibre-induced random density matrix, unit trace.
inline DensityMatrix random_density_matrix(GaussianSampler& rng, const Truncation& trunc) {
  const int d = trunc.dim;
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng(), rng());
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(std::move(rho), trunc, 0.0);
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace bcl::test
