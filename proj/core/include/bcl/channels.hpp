#pragma once

#include <variant>
#include <vector>

#include "bcl/fock.hpp"

namespace bcl {

class ChannelSpec;

/// Quantum-limited phase-insensitive amplifier of gain G >= 1.
struct Amplifier {
  double gain;
};

/// Pure-loss (beam-splitter) channel of transmissivity eta in (0, 1].
struct Loss {
  double transmissivity;
};

/// Ordered composition; stages apply first-element-first.
struct CascadeSpec {
  std::vector<ChannelSpec> stages;
};

/// Description of a bosonic channel: amplifier, loss, or an ordered cascade.
class ChannelSpec {
 public:
  using Kind = std::variant<Amplifier, Loss, CascadeSpec>;

  static ChannelSpec amplifier(double gain);
  static ChannelSpec loss(double transmissivity);
  static ChannelSpec cascade(std::vector<ChannelSpec> stages);

  const Kind& kind() const { return kind_; }

  /// Depth-first list of the primitive stages, in application order.
  std::vector<std::variant<Amplifier, Loss>> flattened() const;

  /// True when every primitive stage is an amplifier (composing to a single
  /// quantum-limited amplifier of the product gain).
  bool is_pure_amplification() const;

  /// Product of the amplifier gains over all stages (loss stages contribute
  /// their transmissivity), i.e. the overall mean-field power gain.
  double overall_gain() const;

 private:
  explicit ChannelSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Result of pushing a state through a channel: the reduced output, the
/// accumulated leakage budget, and the spec that produced it.
struct ChannelApplication {
  DensityMatrix output;
  double leakage;
  ChannelSpec spec;
};

/// Two-mode Gaussian unitary on the D^2-dimensional truncated space, stored
/// per conserved-quantum-number block. The generators r(a'b' - ab) and
/// theta(a'b - ab') are exactly block-diagonal (photon-number difference,
/// respectively total photon number), so the per-block exponentials ARE the
/// matrix exponential of the full truncated generator.
class TwoModeUnitary {
 public:
  static TwoModeUnitary two_mode_squeeze(double r, int dim);
  static TwoModeUnitary beam_splitter(double theta, int dim);

  /// Apply to a flattened two-mode vector (index m*dim + k).
  Eigen::VectorXcd apply(const Eigen::VectorXcd& two_mode) const;

  /// Materialize the dense D^2 x D^2 matrix.
  Eigen::MatrixXcd dense() const;

  int dim() const { return dim_; }

 private:
  struct Block {
    std::vector<int> indices;  // flattened two-mode basis indices
    Eigen::MatrixXcd unitary;
  };
  TwoModeUnitary(int dim, std::vector<Block> blocks)
      : dim_(dim), blocks_(std::move(blocks)) {}

  int dim_;
  std::vector<Block> blocks_;
};

/// Dense two-mode squeezing unitary exp(r (a'b' - ab)) on the D^2 space.
Eigen::MatrixXcd two_mode_squeeze_unitary(double r, const Truncation& trunc);

/// Dense beam-splitter unitary exp(theta (a'b - ab')); transmissivity
/// eta = cos^2(theta).
Eigen::MatrixXcd beam_splitter_unitary(double theta, const Truncation& trunc);

/// A channel with its dilation unitaries prebuilt for one truncation, for
/// callers that apply the same channel many times (optimizers, sweeps).
class CompiledChannel {
 public:
  CompiledChannel(const ChannelSpec& spec, const Truncation& trunc);

  ChannelApplication apply(const DensityMatrix& rho) const;
  ChannelApplication apply(const PureState& psi) const;

  const ChannelSpec& spec() const { return spec_; }
  const Truncation& trunc() const { return trunc_; }

 private:
  struct Stage {
    bool is_amplifier;
    double parameter;  // gain or transmissivity
    TwoModeUnitary unitary;
  };

  // Sends |v> (x) |0> through one stage and accumulates the reduced output;
  // returns the top-level occupancy of the post-unitary two-mode state.
  double apply_stage_to_vector(const Stage& stage, const Eigen::VectorXcd& v,
                               double weight, Eigen::MatrixXcd& accum) const;
  DensityMatrix apply_stage(const Stage& stage, const DensityMatrix& rho, double& leakage) const;

  ChannelSpec spec_;
  Truncation trunc_;
  std::vector<Stage> stages_;
};

/// Quantum-limited amplifier map by two-mode-squeeze dilation with vacuum
/// ancilla. Requires G >= 1 and gain-adequacy G(<a'a> + 1) <= dim/6.
ChannelApplication apply_amplifier(const DensityMatrix& rho, double gain);

/// Pure-loss map by beam-splitter dilation with vacuum ancilla.
ChannelApplication apply_loss(const DensityMatrix& rho, double eta);

/// Sequential application of an arbitrary spec; leakage accumulates.
ChannelApplication apply_channel(const DensityMatrix& rho, const ChannelSpec& spec);

/// Closed-form amplifier output for a coherent input: the displaced thermal
/// state D(sqrt(G) alpha) rho_th(G-1) D'(sqrt(G) alpha). Oracle counterpart
/// of apply_amplifier.
DensityMatrix amplifier_output_for_coherent(Complex alpha, double gain, const Truncation& trunc);

}  // namespace bcl
