#pragma once

#include <span>
#include <variant>
#include <vector>

#include "bcl/channels.hpp"
#include "bcl/fock.hpp"

namespace bcl {

/// Amplifier of gain 1 + epsilon.
struct InfinitesimalGain {};

/// Amplifier of gain G followed by loss of transmissivity epsilon.
struct AmplifierThenLoss {
  double gain;
};

using PerturbativeRegime = std::variant<InfinitesimalGain, AmplifierThenLoss>;

/// Closed-form first-order prediction for one regime, input, and epsilon.
struct PerturbativePrediction {
  double epsilon;
  double lambda_small;   // the O(epsilon) output eigenvalue
  double entropy_nats;   // two-level entropy -(1-l)ln(1-l) - l ln l
  PerturbativeRegime regime;
};

/// epsilon' = [1 + (<a'a> - |<a>|^2)] epsilon; equals epsilon exactly for
/// coherent inputs, which therefore minimize the first-order output entropy.
double epsilon_prime(double epsilon, const Moments& m);

/// Binary entropy -(1-e')ln(1-e') - e' ln e' in nats, for e' in (0, 1).
double first_order_entropy(double eps_prime);

/// Numerically extracted rho_1 = (rho(1+eps) - (1-eps) rho_0) / eps from the
/// full amplifier dilation; Tr(rho_1) ~ 1 and Tr(rho_0 rho_1) approaches
/// -(<a'a> - |<a>|^2) as eps -> 0.
DensityMatrix first_order_density_matrix(const PureState& psi, double epsilon);

/// First-order small eigenvalue of the amplifier(G)-then-loss(eps) cascade:
/// lambda_1 = eps [(G-1) + G (<a'a> - |<a>|^2)].
double cascade_lambda1(double epsilon, double gain, const Moments& m);

/// Exact roots of the cascade secular equation
/// l^2 - (1 - eps G <a'a>) l
///     + eps [1 - eps(G-1) - eps G <a'a>][(G-1) + G <a'a>] - eps G |<a>|^2 = 0,
/// returned as (lambda0 ~ 1, lambda1 ~ O(eps)). The small root expands to
/// cascade_lambda1 at first order.
std::pair<double, double> secular_roots(double epsilon, double gain, const Moments& m);

/// First-order prediction for a regime. The entropy uses both two-level
/// eigenvalues; its leading term is -lambda ln lambda.
PerturbativePrediction predict_first_order(const PerturbativeRegime& regime, double epsilon,
                                           const Moments& m);

struct ConvergenceRow {
  double epsilon;
  double predicted;  // first-order entropy
  double measured;   // full channel numerics
  double ratio;      // measured / predicted
};

/// Measured-vs-predicted output entropy across a decreasing epsilon grid
/// (all <= 1e-2). The relative error should vanish with observed order >= 1.
std::vector<ConvergenceRow> convergence_study(const PureState& psi,
                                              const PerturbativeRegime& regime,
                                              std::span<const double> epsilons);

/// Least-squares slope of log|measured/predicted - 1| against log(epsilon)
/// over the rows of a convergence study.
double observed_order(std::span<const ConvergenceRow> rows);

}  // namespace bcl
