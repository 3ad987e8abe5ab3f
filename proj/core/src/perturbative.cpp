#include "bcl/perturbative.hpp"

#include <cmath>

#include "bcl/entropy.hpp"

namespace bcl {

double epsilon_prime(double epsilon, const Moments& m) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon_prime: epsilon must be > 0");
  const double proxy = m.variance_proxy();
  if (proxy < -1e-10)
    throw DomainError("epsilon_prime: <a'a> < |<a>|^2 beyond tolerance; moments invalid");
  return (1.0 + std::max(proxy, 0.0)) * epsilon;
}

double first_order_entropy(double eps_prime) {
  if (!(eps_prime > 0.0 && eps_prime < 1.0))
    throw DomainError("first_order_entropy: eps_prime must be in (0, 1)");
  return -(1.0 - eps_prime) * std::log1p(-eps_prime) - eps_prime * std::log(eps_prime);
}

DensityMatrix first_order_density_matrix(const PureState& psi, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1e-3))
    throw DomainError("first_order_density_matrix: epsilon must be in (0, 1e-3]");
  const DensityMatrix rho0 = DensityMatrix::from_pure(psi);
  const ChannelApplication app = apply_amplifier(rho0, 1.0 + epsilon);
  Eigen::MatrixXcd rho1 = (app.output.matrix() - (1.0 - epsilon) * rho0.matrix()) / epsilon;
  rho1 = 0.5 * (rho1 + rho1.adjoint().eval());
  return DensityMatrix(std::move(rho1), psi.trunc(), app.leakage / epsilon);
}

double cascade_lambda1(double epsilon, double gain, const Moments& m) {
  if (!(epsilon > 0.0)) throw DomainError("cascade_lambda1: epsilon must be > 0");
  if (!(gain >= 1.0)) throw DomainError("cascade_lambda1: gain must be >= 1");
  const double proxy = std::max(m.variance_proxy(), 0.0);
  return epsilon * ((gain - 1.0) + gain * proxy);
}

std::pair<double, double> secular_roots(double epsilon, double gain, const Moments& m) {
  if (!(epsilon > 0.0)) throw DomainError("secular_roots: epsilon must be > 0");
  if (!(gain >= 1.0)) throw DomainError("secular_roots: gain must be >= 1");
  const double mean_n = m.mean_n;
  const double abs_a_sq = std::norm(m.mean_a);
  const double b = 1.0 - epsilon * gain * mean_n;
  const double c =
      epsilon * (1.0 - epsilon * (gain - 1.0) - epsilon * gain * mean_n) *
          ((gain - 1.0) + gain * mean_n) -
      epsilon * gain * abs_a_sq;
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0)
    throw DomainError("secular_roots: negative discriminant; parameters out of regime");
  const double sq = std::sqrt(disc);
  const double lambda0 = 0.5 * (b + sq);
  const double lambda1 = lambda0 != 0.0 ? c / lambda0 : 0.5 * (b - sq);
  return {lambda0, lambda1};
}

PerturbativePrediction predict_first_order(const PerturbativeRegime& regime, double epsilon,
                                           const Moments& m) {
  double lambda = 0.0;
  if (std::holds_alternative<InfinitesimalGain>(regime)) {
    lambda = epsilon_prime(epsilon, m);
  } else {
    lambda = cascade_lambda1(epsilon, std::get<AmplifierThenLoss>(regime).gain, m);
  }
  const double entropy = lambda > 0.0 && lambda < 1.0 ? first_order_entropy(lambda) : 0.0;
  return {epsilon, lambda, entropy, regime};
}

std::vector<ConvergenceRow> convergence_study(const PureState& psi,
                                              const PerturbativeRegime& regime,
                                              std::span<const double> epsilons) {
  if (epsilons.empty()) throw DomainError("convergence_study: empty epsilon grid");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] <= 1e-2))
      throw DomainError("convergence_study: epsilons must be in (0, 1e-2]");
    if (i > 0 && epsilons[i] >= epsilons[i - 1])
      throw DomainError("convergence_study: epsilons must be strictly decreasing");
  }
  const Moments m = moments(psi);
  std::vector<ConvergenceRow> rows;
  rows.reserve(epsilons.size());
  for (const double eps : epsilons) {
    ChannelSpec spec =
        std::holds_alternative<InfinitesimalGain>(regime)
            ? ChannelSpec::amplifier(1.0 + eps)
            : ChannelSpec::cascade(
                  {ChannelSpec::amplifier(std::get<AmplifierThenLoss>(regime).gain),
                   ChannelSpec::loss(eps)});
    const ChannelApplication app = apply_channel(DensityMatrix::from_pure(psi), spec);
    const double measured = von_neumann_entropy(app.output).entropy_nats;
    const double predicted = predict_first_order(regime, eps, m).entropy_nats;
    rows.push_back({eps, predicted, measured, predicted != 0.0 ? measured / predicted : 0.0});
  }
  return rows;
}

double observed_order(std::span<const ConvergenceRow> rows) {
  // Slope of log|relative error| vs log(eps), least squares.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& row : rows) {
    const double rel = std::abs(row.ratio - 1.0);
    if (rel <= 0.0) continue;
    const double x = std::log(row.epsilon);
    const double y = std::log(rel);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw DomainError("observed_order: need at least two finite error points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bcl
