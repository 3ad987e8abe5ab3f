#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcl/channels.hpp"
#include "bcl/fock.hpp"

namespace bcl {

/// Fixed seed used whenever a caller does not supply one, so bare
/// invocations are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 20177;

/// Knobs of the minimum-output-entropy search.
struct SearchConfig {
  int dim = 20;
  int starts = 8;
  std::uint64_t seed = kDefaultSeed;
  int max_iters = 400;
  double grad_step = 1e-5;   // central-difference step, must lie in (1e-8, 1e-3)
  double conv_tol = 1e-6;    // gradient-norm stopping threshold
  double leakage_tol = 1e-6; // truncation budget for objective evaluations
};

/// Per-start summary of one descent.
struct StartOutcome {
  int start_index;
  std::string label;
  double entropy_nats;  // best objective reached from this start (+inf if infeasible)
  int iterations;
  bool converged;
};

struct SearchResult {
  double min_entropy_nats;
  PureState argmin;
  double coherent_fidelity;  // |<alpha_hat|argmin>|^2 with alpha_hat = <argmin|a|argmin>
  Complex fitted_alpha;
  int start_index;  // which start won
  int iterations;   // iterations of the winning start
  bool converged;   // the winning start hit the gradient tolerance
  double lowest_objective_seen;  // min over every finite objective evaluation
  bool conjecture_violation;     // lowest seen < g(G-1) - 1e-6 on pure amplification
  int truncation_events;         // evaluations rejected by the leakage budget
  std::vector<StartOutcome> starts;
};

/// S(channel(|psi><psi|)) in nats. Truncation errors propagate; the
/// optimizer treats them as +inf internally.
double objective(const PureState& psi, const ChannelSpec& spec);

/// Central-finite-difference gradient of the objective over the 2D-2 real
/// sphere coordinates (global phase gauge-fixed by making the
/// largest-magnitude amplitude real; the gauge amplitude is reconstructed
/// from normalization).
Eigen::VectorXd entropy_gradient(const PureState& psi, const ChannelSpec& spec, double step);

/// Multi-start projected gradient descent over pure input states:
/// deterministic physical starts (vacuum, |1>, a small coherent grid)
/// followed by seeded low-photon Haar starts, each descended with
/// backtracking line search. Deterministic for fixed (spec, config).
SearchResult minimize(const ChannelSpec& spec, const SearchConfig& config);

}  // namespace bcl
