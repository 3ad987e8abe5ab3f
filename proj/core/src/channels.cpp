#include "bcl/channels.hpp"

#include <cmath>
#include <sstream>

namespace bcl {

namespace {

std::string format_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

double mean_photons(const DensityMatrix& rho) {
  double n = 0.0;
  for (int i = 0; i < rho.dim(); ++i) n += i * rho.matrix()(i, i).real();
  return n;
}

double mean_photons(const Eigen::VectorXcd& psi) {
  double n = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) n += static_cast<double>(i) * std::norm(psi(i));
  return n;
}

void check_amplifier_adequacy(double gain, double mean_n, int dim) {
  if (gain * (mean_n + 1.0) > dim / 6.0 + 1e-9)
    throw TruncationError("amplifier: G(<a'a>+1) = " + format_double(gain * (mean_n + 1.0)) +
                          " exceeds dim/6 adequacy bound at dim = " + std::to_string(dim));
}

}  // namespace

ChannelSpec ChannelSpec::amplifier(double gain) {
  if (!(gain >= 1.0)) throw DomainError("ChannelSpec: amplifier gain must be >= 1");
  return ChannelSpec(Kind{Amplifier{gain}});
}

ChannelSpec ChannelSpec::loss(double transmissivity) {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0))
    throw DomainError("ChannelSpec: loss transmissivity must be in (0, 1]");
  return ChannelSpec(Kind{Loss{transmissivity}});
}

ChannelSpec ChannelSpec::cascade(std::vector<ChannelSpec> stages) {
  if (stages.empty()) throw DomainError("ChannelSpec: cascade must be non-empty");
  return ChannelSpec(Kind{CascadeSpec{std::move(stages)}});
}

std::vector<std::variant<Amplifier, Loss>> ChannelSpec::flattened() const {
  std::vector<std::variant<Amplifier, Loss>> out;
  if (const auto* amp = std::get_if<Amplifier>(&kind_)) {
    out.push_back(*amp);
  } else if (const auto* loss = std::get_if<Loss>(&kind_)) {
    out.push_back(*loss);
  } else {
    for (const auto& stage : std::get<CascadeSpec>(kind_).stages)
      for (auto& leaf : stage.flattened()) out.push_back(leaf);
  }
  return out;
}

bool ChannelSpec::is_pure_amplification() const {
  for (const auto& leaf : flattened())
    if (std::holds_alternative<Loss>(leaf)) return false;
  return true;
}

double ChannelSpec::overall_gain() const {
  double gain = 1.0;
  for (const auto& leaf : flattened()) {
    if (const auto* amp = std::get_if<Amplifier>(&leaf))
      gain *= amp->gain;
    else
      gain *= std::get<Loss>(leaf).transmissivity;
  }
  return gain;
}

TwoModeUnitary TwoModeUnitary::two_mode_squeeze(double r, int dim) {
  std::vector<Block> blocks;
  blocks.reserve(2 * dim - 1);
  // a'b' - ab conserves the photon-number difference m - k.
  for (int diff = -(dim - 1); diff <= dim - 1; ++diff) {
    const int m0 = std::max(0, diff);
    const int len = dim - std::abs(diff);
    Block block;
    block.indices.resize(len);
    for (int t = 0; t < len; ++t) {
      const int m = m0 + t;
      block.indices[t] = m * dim + (m - diff);
    }
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(len, len);
    for (int t = 0; t + 1 < len; ++t) {
      const int m = m0 + t;
      const int k = m - diff;
      const double c = r * std::sqrt((m + 1.0) * (k + 1.0));  // <m+1,k+1| a'b' |m,k>
      generator(t + 1, t) = c;
      generator(t, t + 1) = -c;
    }
    block.unitary = len > 1 ? exp_antihermitian(generator)
                            : Eigen::MatrixXcd::Identity(1, 1);
    blocks.push_back(std::move(block));
  }
  return TwoModeUnitary(dim, std::move(blocks));
}

TwoModeUnitary TwoModeUnitary::beam_splitter(double theta, int dim) {
  std::vector<Block> blocks;
  blocks.reserve(2 * dim - 1);
  // a'b - ab' conserves the total photon number m + k.
  for (int total = 0; total <= 2 * (dim - 1); ++total) {
    const int m0 = std::max(0, total - (dim - 1));
    const int m1 = std::min(total, dim - 1);
    const int len = m1 - m0 + 1;
    Block block;
    block.indices.resize(len);
    for (int t = 0; t < len; ++t) {
      const int m = m0 + t;
      block.indices[t] = m * dim + (total - m);
    }
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(len, len);
    for (int t = 0; t + 1 < len; ++t) {
      const int m = m0 + t;
      const int k = total - m;
      const double c = theta * std::sqrt((m + 1.0) * k);  // <m+1,k-1| a'b |m,k>
      generator(t + 1, t) = c;
      generator(t, t + 1) = -c;
    }
    block.unitary = len > 1 ? exp_antihermitian(generator)
                            : Eigen::MatrixXcd::Identity(1, 1);
    blocks.push_back(std::move(block));
  }
  return TwoModeUnitary(dim, std::move(blocks));
}

Eigen::VectorXcd TwoModeUnitary::apply(const Eigen::VectorXcd& two_mode) const {
  if (two_mode.size() != static_cast<Eigen::Index>(dim_) * dim_)
    throw DimensionError("TwoModeUnitary: vector length must be dim^2");
  Eigen::VectorXcd out(two_mode.size());
  Eigen::VectorXcd sub;
  for (const auto& block : blocks_) {
    const int len = static_cast<int>(block.indices.size());
    sub.resize(len);
    for (int t = 0; t < len; ++t) sub(t) = two_mode(block.indices[t]);
    sub = block.unitary * sub;
    for (int t = 0; t < len; ++t) out(block.indices[t]) = sub(t);
  }
  return out;
}

Eigen::MatrixXcd TwoModeUnitary::dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_) * dim_,
                                                static_cast<Eigen::Index>(dim_) * dim_);
  for (const auto& block : blocks_) {
    const int len = static_cast<int>(block.indices.size());
    for (int s = 0; s < len; ++s)
      for (int t = 0; t < len; ++t) out(block.indices[s], block.indices[t]) = block.unitary(s, t);
  }
  return out;
}

Eigen::MatrixXcd two_mode_squeeze_unitary(double r, const Truncation& trunc) {
  return TwoModeUnitary::two_mode_squeeze(r, trunc.dim).dense();
}

Eigen::MatrixXcd beam_splitter_unitary(double theta, const Truncation& trunc) {
  return TwoModeUnitary::beam_splitter(theta, trunc.dim).dense();
}

CompiledChannel::CompiledChannel(const ChannelSpec& spec, const Truncation& trunc)
    : spec_(spec), trunc_(trunc) {
  for (const auto& leaf : spec.flattened()) {
    if (const auto* amp = std::get_if<Amplifier>(&leaf)) {
      const double r = std::acosh(std::sqrt(amp->gain));
      stages_.push_back({true, amp->gain, TwoModeUnitary::two_mode_squeeze(r, trunc.dim)});
    } else {
      const double eta = std::get<Loss>(leaf).transmissivity;
      const double theta = std::acos(std::sqrt(eta));
      stages_.push_back({false, eta, TwoModeUnitary::beam_splitter(theta, trunc.dim)});
    }
  }
}

double CompiledChannel::apply_stage_to_vector(const Stage& stage, const Eigen::VectorXcd& v,
                                              double weight, Eigen::MatrixXcd& accum) const {
  const int d = trunc_.dim;
  Eigen::VectorXcd two_mode = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  for (int m = 0; m < d; ++m) two_mode(static_cast<Eigen::Index>(m) * d) = v(m);
  two_mode = stage.unitary.apply(two_mode);

  // Reduce over the ancilla: rho[m,n] = sum_k Psi[m d + k] conj(Psi[n d + k]).
  Eigen::Map<const Eigen::MatrixXcd> columns(two_mode.data(), d, d);
  accum.noalias() += weight * (columns.adjoint() * columns).transpose();

  // Occupancy of the top truncation level in either mode; the untruncated
  // evolution would move part of this mass above the cutoff.
  double top = 0.0;
  for (int k = 0; k < d; ++k) top += std::norm(two_mode((d - 1) * d + k));
  for (int m = 0; m < d - 1; ++m) top += std::norm(two_mode(m * d + (d - 1)));
  return top;
}

DensityMatrix CompiledChannel::apply_stage(const Stage& stage, const DensityMatrix& rho,
                                           double& leakage) const {
  const int d = trunc_.dim;
  if (stage.is_amplifier) check_amplifier_adequacy(stage.parameter, mean_photons(rho), d);

  Eigen::MatrixXcd accum = Eigen::MatrixXcd::Zero(d, d);
  double top_mass = 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
  if (es.info() != Eigen::Success) throw Error("channel: input eigendecomposition failed");
  // Linearity makes the per-eigenvector dilation exact for mixed inputs;
  // small negative weights are kept so the map reproduces rho exactly.
  for (int i = 0; i < d; ++i) {
    const double p = es.eigenvalues()(i);
    const double top = apply_stage_to_vector(stage, es.eigenvectors().col(i), p, accum);
    if (stage.is_amplifier) top_mass += std::max(p, 0.0) * top;
  }
  accum = 0.5 * (accum + accum.adjoint().eval());

  leakage += top_mass;
  if (leakage > trunc_.leakage_tol)
    throw TruncationError("channel: accumulated leakage " + format_double(leakage) +
                          " exceeds leakage_tol " + format_double(trunc_.leakage_tol));
  return DensityMatrix(std::move(accum), trunc_, leakage);
}

ChannelApplication CompiledChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != trunc_.dim)
    throw DimensionError("CompiledChannel: input dimension does not match compiled truncation");
  double leakage = rho.leakage();
  DensityMatrix state = rho;
  for (const auto& stage : stages_) state = apply_stage(stage, state, leakage);
  return {std::move(state), leakage, spec_};
}

ChannelApplication CompiledChannel::apply(const PureState& psi) const {
  if (psi.dim() != trunc_.dim)
    throw DimensionError("CompiledChannel: input dimension does not match compiled truncation");
  const int d = trunc_.dim;
  double leakage = psi.leakage();

  // First stage straight from the state vector; later stages see a mixture.
  const Stage& first = stages_.front();
  if (first.is_amplifier) check_amplifier_adequacy(first.parameter, mean_photons(psi.amplitudes()), d);
  Eigen::MatrixXcd accum = Eigen::MatrixXcd::Zero(d, d);
  const double top = apply_stage_to_vector(first, psi.amplitudes(), 1.0, accum);
  if (first.is_amplifier) leakage += top;
  if (leakage > trunc_.leakage_tol)
    throw TruncationError("channel: accumulated leakage " + format_double(leakage) +
                          " exceeds leakage_tol " + format_double(trunc_.leakage_tol));
  accum = 0.5 * (accum + accum.adjoint().eval());
  DensityMatrix state(std::move(accum), trunc_, leakage);

  for (std::size_t s = 1; s < stages_.size(); ++s) state = apply_stage(stages_[s], state, leakage);
  return {std::move(state), leakage, spec_};
}

ChannelApplication apply_amplifier(const DensityMatrix& rho, double gain) {
  return CompiledChannel(ChannelSpec::amplifier(gain), rho.trunc()).apply(rho);
}

ChannelApplication apply_loss(const DensityMatrix& rho, double eta) {
  return CompiledChannel(ChannelSpec::loss(eta), rho.trunc()).apply(rho);
}

ChannelApplication apply_channel(const DensityMatrix& rho, const ChannelSpec& spec) {
  return CompiledChannel(spec, rho.trunc()).apply(rho);
}

DensityMatrix amplifier_output_for_coherent(Complex alpha, double gain, const Truncation& trunc) {
  if (!(gain >= 1.0)) throw DomainError("amplifier_output_for_coherent: gain must be >= 1");
  const Complex displaced = std::sqrt(gain) * alpha;
  if (std::norm(displaced) > trunc.dim / 4.0)
    throw TruncationError("amplifier_output_for_coherent: sqrt(G)|alpha| exceeds adequacy bound");
  DensityMatrix ase = thermal_state(gain - 1.0, trunc);
  if (std::norm(alpha) == 0.0) return ase;
  const FockOperator d_op = displacement_operator(displaced, trunc);
  Eigen::MatrixXcd out = d_op * ase.matrix() * d_op.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out), trunc, ase.leakage());
}

}  // namespace bcl
