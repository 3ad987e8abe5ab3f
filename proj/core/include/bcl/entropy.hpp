#pragma once

#include <span>
#include <vector>

#include "bcl/channels.hpp"
#include "bcl/fock.hpp"

namespace bcl {

/// Von Neumann entropy of one state, with the spectrum and the bookkeeping
/// needed to audit it.
struct EntropyReport {
  double entropy_nats;
  Eigen::VectorXd spectrum;  // descending, negatives clipped to zero
  double clipped_mass;       // total magnitude of clipped negative eigenvalues
  double leakage;            // carried over from the input state
};

/// S(rho) = -Tr(rho ln rho) by Hermitian eigendecomposition. Eigenvalues in
/// [-1e-8, 0) are clipped to zero and recorded; anything below -1e-8 raises
/// SpectrumError (the state was invalid upstream).
EntropyReport von_neumann_entropy(const DensityMatrix& rho);

/// Gordon function g(x) = (x+1) ln(x+1) - x ln x, the entropy in nats of a
/// thermal state with mean photon number x. g(0) = 0 by continuity.
double g_function(double x);

/// Holevo information of the amplified channel,
/// chi(G, N) = g(NG + G - 1) - g(G - 1), in nats per mode.
double holevo_chi_amplifier(double gain, double n_photons);

/// General Gordon form chi = g(N_out + N_ase) - g(N_ase);
/// holevo_chi_amplifier(G, N) == holevo_chi_general(N G, G - 1) exactly.
double holevo_chi_general(double n_out, double n_ase);

/// Grid for the coherent-ensemble quadrature: Gauss-Legendre nodes in the
/// radial variable u = R^2 on [0, n_mean ln(1/tail_tol)], uniform (trapezoid)
/// nodes in the angle.
struct QuadratureSpec {
  int radial_nodes = 64;
  int angular_nodes = 64;
  double tail_tol = 1e-12;
};

/// Numerical construction of the Gaussian coherent-state ensemble
/// integral d2a/pi exp(-|a|^2/N)/N |a><a|; converges entrywise to
/// thermal_state(N). The angular grid must exceed the basis size so that the
/// angular sum annihilates every coherence the basis can hold.
DensityMatrix thermal_from_coherent_ensemble(double n_mean, const Truncation& trunc,
                                             const QuadratureSpec& quad = {});

struct WeightedState {
  double weight;
  PureState state;
};

/// Both sides of the concavity bound for a classical (coherent-mixture)
/// input: S(sum_i w_i Phi(rho_i)) >= sum_i w_i S(Phi(rho_i)).
struct ConcavityBound {
  double mixture_output_entropy;  // lhs
  double average_output_entropy;  // rhs
};

/// Evaluates the concavity bound for an ensemble of coherent states pushed
/// through one channel. Weights must be nonnegative and sum to one; states
/// must be coherent (zero variance proxy).
ConcavityBound classical_ensemble_entropy_bound(std::span<const WeightedState> samples,
                                                const ChannelSpec& spec);

/// Effective gain of a quantum-limited amplifier seen by a squeezed-vacuum
/// input: G' = 1/2 + sqrt((G - 1/2)^2 + G(G-1) sinh^2 r). The output entropy
/// is g(G' - 1).
double gaussian_effective_gain(double gain, double r);

/// Same effective gain written in terms of the input moments,
/// G' = 1/2 + (G - 1/2) sqrt(1 + G(G-1)/(G-1/2)^2 (<a'a> - |<a>|^2));
/// coincides with gaussian_effective_gain when sinh^2 r = <a'a> - |<a>|^2.
double gaussian_effective_gain_from_moments(double gain, double mean_n, double mean_abs_a_sq);

}  // namespace bcl
