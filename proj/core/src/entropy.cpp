#include "bcl/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bcl {

namespace {

std::string format_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by Newton
// iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

EntropyReport von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error("von_neumann_entropy: eigendecomposition failed");
  const Eigen::VectorXd& raw = es.eigenvalues();  // ascending
  if (raw(0) < -1e-8)
    throw SpectrumError("von_neumann_entropy: eigenvalue " + format_double(raw(0)) +
                        " below -1e-8; invalid state upstream");
  const int d = static_cast<int>(raw.size());
  Eigen::VectorXd spectrum(d);
  double clipped = 0.0;
  double entropy = 0.0;
  for (int i = 0; i < d; ++i) {
    double lambda = raw(d - 1 - i);  // descending
    if (lambda < 0.0) {
      clipped += -lambda;
      lambda = 0.0;
    }
    spectrum(i) = lambda;
    if (lambda > 0.0) entropy -= lambda * std::log(lambda);
  }
  return {entropy, std::move(spectrum), clipped, rho.leakage()};
}

double g_function(double x) {
  if (x < 0.0) throw DomainError("g_function: x must be >= 0");
  if (x == 0.0) return 0.0;
  return (x + 1.0) * std::log1p(x) - x * std::log(x);
}

double holevo_chi_general(double n_out, double n_ase) {
  if (n_out < 0.0 || n_ase < 0.0)
    throw DomainError("holevo_chi_general: photon numbers must be >= 0");
  return g_function(n_out + n_ase) - g_function(n_ase);
}

double holevo_chi_amplifier(double gain, double n_photons) {
  if (!(gain >= 1.0)) throw DomainError("holevo_chi_amplifier: gain must be >= 1");
  if (n_photons < 0.0) throw DomainError("holevo_chi_amplifier: n_photons must be >= 0");
  return holevo_chi_general(n_photons * gain, gain - 1.0);
}

DensityMatrix thermal_from_coherent_ensemble(double n_mean, const Truncation& trunc,
                                             const QuadratureSpec& quad) {
  if (n_mean < 0.0) throw DomainError("thermal_from_coherent_ensemble: n_mean must be >= 0");
  if (n_mean > trunc.dim / 8.0)
    throw QuadratureError("thermal_from_coherent_ensemble: n_mean exceeds dim/8 adequacy bound");
  if (quad.angular_nodes <= trunc.dim)
    throw QuadratureError("thermal_from_coherent_ensemble: angular grid (" +
                          std::to_string(quad.angular_nodes) +
                          " nodes) cannot cancel coherences of a dim-" +
                          std::to_string(trunc.dim) + " basis");
  if (quad.radial_nodes < 8)
    throw QuadratureError("thermal_from_coherent_ensemble: radial grid too coarse");
  if (!(quad.tail_tol > 0.0 && quad.tail_tol < 1.0))
    throw QuadratureError("thermal_from_coherent_ensemble: tail_tol must be in (0, 1)");

  const int d = trunc.dim;
  if (n_mean == 0.0) {
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(d, d);
    vac(0, 0) = 1.0;
    return DensityMatrix(std::move(vac), trunc, 0.0);
  }

  // d2a/pi = du dphi / (2 pi) under u = R^2; weight exp(-u/N)/N.
  const double u_max = n_mean * std::log(1.0 / quad.tail_tol);
  std::vector<double> nodes, weights;
  gauss_legendre(quad.radial_nodes, nodes, weights);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < quad.radial_nodes; ++i) {
    const double u = 0.5 * (nodes[i] + 1.0) * u_max;
    const double wu = 0.5 * u_max * weights[i];
    const double radial_weight = wu * std::exp(-u / n_mean) / n_mean;
    for (int j = 0; j < quad.angular_nodes; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / quad.angular_nodes;
      const Complex alpha = std::sqrt(u) * std::polar(1.0, phi);
      const Eigen::VectorXcd ket = coherent_amplitudes(alpha, d);
      rho.noalias() += (radial_weight / quad.angular_nodes) * (ket * ket.adjoint());
    }
  }
  rho = 0.5 * (rho + rho.adjoint().eval());

  const double trace = rho.trace().real();
  const double expected_tail = std::pow(n_mean / (1.0 + n_mean), d);
  const double deficit = std::abs(1.0 - expected_tail - trace);
  if (deficit > 1e-4)
    throw QuadratureError("thermal_from_coherent_ensemble: quadrature trace off by " +
                          format_double(deficit) + "; grid inadequate");
  return DensityMatrix(std::move(rho), trunc, std::max(0.0, 1.0 - trace));
}

ConcavityBound classical_ensemble_entropy_bound(std::span<const WeightedState> samples,
                                                const ChannelSpec& spec) {
  if (samples.empty()) throw DomainError("classical_ensemble_entropy_bound: empty ensemble");
  double weight_sum = 0.0;
  for (const auto& [weight, state] : samples) {
    if (weight < -1e-15) throw DomainError("classical_ensemble_entropy_bound: negative weight");
    if (moments(state).variance_proxy() > 1e-8)
      throw DomainError("classical_ensemble_entropy_bound: ensemble state is not coherent");
    weight_sum += weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9)
    throw DomainError("classical_ensemble_entropy_bound: weights must sum to 1");

  const Truncation& trunc = samples.front().state.trunc();
  CompiledChannel channel(spec, trunc);
  Eigen::MatrixXcd mixture = Eigen::MatrixXcd::Zero(trunc.dim, trunc.dim);
  double average_entropy = 0.0;
  double leakage = 0.0;
  for (const auto& [weight, state] : samples) {
    if (weight == 0.0) continue;
    ChannelApplication app = channel.apply(state);
    mixture += weight * app.output.matrix();
    leakage += weight * app.leakage;
    average_entropy += weight * von_neumann_entropy(app.output).entropy_nats;
  }
  mixture = 0.5 * (mixture + mixture.adjoint().eval());
  DensityMatrix mixed(std::move(mixture), trunc, leakage);
  return {von_neumann_entropy(mixed).entropy_nats, average_entropy};
}

double gaussian_effective_gain(double gain, double r) {
  if (!(gain >= 1.0)) throw DomainError("gaussian_effective_gain: gain must be >= 1");
  const double sh = std::sinh(r);
  const double half = gain - 0.5;
  return 0.5 + std::sqrt(half * half + gain * (gain - 1.0) * sh * sh);
}

double gaussian_effective_gain_from_moments(double gain, double mean_n, double mean_abs_a_sq) {
  if (!(gain >= 1.0)) throw DomainError("gaussian_effective_gain_from_moments: gain must be >= 1");
  if (mean_abs_a_sq < 0.0 || mean_n < mean_abs_a_sq - 1e-10)
    throw DomainError("gaussian_effective_gain_from_moments: need mean_n >= |<a>|^2 >= 0");
  const double proxy = std::max(0.0, mean_n - mean_abs_a_sq);
  const double half = gain - 0.5;
  return 0.5 + half * std::sqrt(1.0 + gain * (gain - 1.0) / (half * half) * proxy);
}

}  // namespace bcl
