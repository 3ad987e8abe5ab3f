#include "bcl/moe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "bcl/entropy.hpp"
#include "bcl/random.hpp"

namespace bcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalize and rotate the global phase so the largest-magnitude amplitude
// is real and positive. First index wins ties, keeping the map deterministic.
Eigen::VectorXcd gauge_normalize(Eigen::VectorXcd v, int* gauge_index = nullptr) {
  v.normalize();
  int g = 0;
  double best = std::norm(v(0));
  for (int i = 1; i < v.size(); ++i) {
    const double mag = std::norm(v(i));
    if (mag > best) {
      best = mag;
      g = i;
    }
  }
  const Complex phase = v(g) / std::abs(v(g));
  v *= std::conj(phase);
  v(g) = Complex(std::abs(v(g)), 0.0);  // strip residual imaginary roundoff
  if (gauge_index) *gauge_index = g;
  return v;
}

// Chart coordinates: Re/Im of every amplitude except the gauge one, which is
// reconstructed as the positive root of the normalization constraint.
Eigen::VectorXd to_chart(const Eigen::VectorXcd& v, int gauge) {
  const int d = static_cast<int>(v.size());
  Eigen::VectorXd x(2 * d - 2);
  int j = 0;
  for (int i = 0; i < d; ++i) {
    if (i == gauge) continue;
    x(j++) = v(i).real();
    x(j++) = v(i).imag();
  }
  return x;
}

Eigen::VectorXcd from_chart(const Eigen::VectorXd& x, int gauge, int dim) {
  Eigen::VectorXcd v(dim);
  int j = 0;
  double sum = 0.0;
  for (int i = 0; i < dim; ++i) {
    if (i == gauge) continue;
    v(i) = Complex(x(j), x(j + 1));
    sum += std::norm(v(i));
    j += 2;
  }
  if (sum < 1.0) {
    v(gauge) = Complex(std::sqrt(1.0 - sum), 0.0);
  } else {
    // Step overshot the chart; project back onto the sphere.
    v(gauge) = Complex(0.0, 0.0);
    v /= std::sqrt(sum);
  }
  return v;
}

struct Evaluator {
  const CompiledChannel& channel;
  const Truncation& trunc;
  double lowest_seen = kInf;
  int truncation_events = 0;

  double operator()(const Eigen::VectorXcd& amplitudes) {
    try {
      PureState psi(amplitudes, trunc, 0.0);
      const ChannelApplication app = channel.apply(psi);
      const double s = von_neumann_entropy(app.output).entropy_nats;
      lowest_seen = std::min(lowest_seen, s);
      return s;
    } catch (const TruncationError&) {
      ++truncation_events;
      return kInf;
    }
  }
};

Eigen::VectorXd finite_difference_gradient(Evaluator& eval, const Eigen::VectorXcd& psi,
                                           int gauge, double step) {
  const int dim = static_cast<int>(psi.size());
  const Eigen::VectorXd x0 = to_chart(psi, gauge);
  Eigen::VectorXd grad(x0.size());
  Eigen::VectorXd x = x0;
  for (int i = 0; i < x0.size(); ++i) {
    x(i) = x0(i) + step;
    const double fp = eval(from_chart(x, gauge, dim));
    x(i) = x0(i) - step;
    const double fm = eval(from_chart(x, gauge, dim));
    x(i) = x0(i);
    grad(i) = (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2.0 * step) : 0.0;
  }
  return grad;
}

struct DescentOutcome {
  Eigen::VectorXcd state;
  double value;
  int iterations;
  bool converged;
};

DescentOutcome descend(Evaluator& eval, Eigen::VectorXcd start, const SearchConfig& config) {
  int gauge = 0;
  Eigen::VectorXcd psi = gauge_normalize(std::move(start), &gauge);
  double f = eval(psi);
  if (!std::isfinite(f)) return {std::move(psi), kInf, 0, false};

  double step_hint = 0.25;
  int iter = 0;
  bool converged = false;
  for (; iter < config.max_iters; ++iter) {
    const Eigen::VectorXd grad = finite_difference_gradient(eval, psi, gauge, config.grad_step);
    const double gnorm = grad.norm();
    if (gnorm < config.conv_tol) {
      converged = true;
      break;
    }
    const Eigen::VectorXd x0 = to_chart(psi, gauge);
    double t = step_hint;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Eigen::VectorXcd candidate =
          from_chart(x0 - t * grad, gauge, static_cast<int>(psi.size()));
      const double fc = eval(candidate);
      if (fc <= f - 1e-4 * t * gnorm * gnorm) {
        psi = gauge_normalize(candidate, &gauge);
        f = fc;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no admissible step; gradient is FD noise
    step_hint = std::min(4.0 * t, 1.0);
  }
  return {std::move(psi), f, iter, converged};
}

// Largest low-photon subspace whose typical Haar state keeps every amplifier
// stage inside its adequacy bound (mean photons tracked stage by stage).
bool stages_adequate(const ChannelSpec& spec, double mean_n, int dim, double margin) {
  double n = mean_n;
  for (const auto& leaf : spec.flattened()) {
    if (const auto* amp = std::get_if<Amplifier>(&leaf)) {
      if (amp->gain * (n + 1.0) > margin * dim / 6.0) return false;
      n = amp->gain * n + (amp->gain - 1.0);
    } else {
      n *= std::get<Loss>(leaf).transmissivity;
    }
  }
  return true;
}

int haar_support(const ChannelSpec& spec, int dim) {
  int k = dim;
  while (k > 2 && !stages_adequate(spec, 0.5 * (k - 1), dim, 0.75)) --k;
  return k;
}

Eigen::VectorXcd haar_start(GaussianSampler& rng, const ChannelSpec& spec, int dim, int support) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < support; ++i) v(i) = Complex(rng(), rng());
    v.normalize();
    double mean_n = 0.0;
    for (int i = 0; i < support; ++i) mean_n += i * std::norm(v(i));
    if (stages_adequate(spec, mean_n, dim, 0.9)) return v;
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(0) = 1.0;
  return v;
}

}  // namespace

double objective(const PureState& psi, const ChannelSpec& spec) {
  const CompiledChannel channel(spec, psi.trunc());
  const ChannelApplication app = channel.apply(psi);
  return von_neumann_entropy(app.output).entropy_nats;
}

Eigen::VectorXd entropy_gradient(const PureState& psi, const ChannelSpec& spec, double step) {
  if (!(step > 1e-8 && step < 1e-3))
    throw DomainError("entropy_gradient: step must lie in (1e-8, 1e-3)");
  const CompiledChannel channel(spec, psi.trunc());
  Evaluator eval{channel, psi.trunc()};
  int gauge = 0;
  const Eigen::VectorXcd v = gauge_normalize(psi.amplitudes(), &gauge);
  return finite_difference_gradient(eval, v, gauge, step);
}

SearchResult minimize(const ChannelSpec& spec, const SearchConfig& config) {
  if (config.starts < 1) throw DomainError("minimize: starts must be >= 1");
  if (!(config.grad_step > 1e-8 && config.grad_step < 1e-3))
    throw DomainError("minimize: grad_step must lie in (1e-8, 1e-3)");
  if (!(config.conv_tol > 0.0)) throw DomainError("minimize: conv_tol must be > 0");
  if (config.max_iters < 1) throw DomainError("minimize: max_iters must be >= 1");

  const Truncation trunc(config.dim, config.leakage_tol);
  const CompiledChannel channel(spec, trunc);
  Evaluator eval{channel, trunc};

  // Deterministic physical starts first, then seeded Haar starts restricted
  // to a low-photon subspace; together they form a prefix-stable sequence so
  // a larger `starts` value only appends.
  std::vector<std::pair<std::string, Eigen::VectorXcd>> starts;
  starts.emplace_back("vacuum", vacuum_state(trunc).amplitudes());
  starts.emplace_back("fock-1", fock_state(1, trunc).amplitudes());
  for (const double a : {0.5, -0.5, 1.0, -1.0}) {
    if (a * a > trunc.dim / 4.0) continue;
    starts.emplace_back("coherent(" + std::to_string(a) + ")",
                        coherent_amplitudes(Complex(a, 0.0), trunc.dim).normalized());
  }
  GaussianSampler rng(config.seed);
  const int support = haar_support(spec, config.dim);
  for (int i = static_cast<int>(starts.size()); i < config.starts; ++i)
    starts.emplace_back("haar-" + std::to_string(i), haar_start(rng, spec, config.dim, support));
  starts.resize(std::min<std::size_t>(starts.size(), static_cast<std::size_t>(config.starts)));

  SearchResult result{
      kInf,
      vacuum_state(trunc),
      0.0,
      Complex(0.0, 0.0),
      -1,
      0,
      false,
      kInf,
      false,
      0,
      {},
  };
  std::optional<Eigen::VectorXcd> best_state;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    DescentOutcome outcome = descend(eval, starts[i].second, config);
    result.starts.push_back({static_cast<int>(i), starts[i].first, outcome.value,
                             outcome.iterations, outcome.converged});
    if (outcome.value < result.min_entropy_nats) {
      result.min_entropy_nats = outcome.value;
      result.start_index = static_cast<int>(i);
      result.iterations = outcome.iterations;
      result.converged = outcome.converged;
      best_state = std::move(outcome.state);
    }
  }
  if (!best_state) throw Error("minimize: no feasible start");

  result.argmin = PureState(*best_state, trunc, 0.0);
  const Moments m = moments(result.argmin);
  result.fitted_alpha = m.mean_a;
  const Eigen::VectorXcd coherent =
      coherent_amplitudes(result.fitted_alpha, trunc.dim).normalized();
  result.coherent_fidelity = std::norm(coherent.dot(*best_state));
  result.lowest_objective_seen = eval.lowest_seen;
  result.truncation_events = eval.truncation_events;
  if (spec.is_pure_amplification()) {
    const double bound = g_function(spec.overall_gain() - 1.0);
    result.conjecture_violation = result.lowest_objective_seen < bound - 1e-6;
  }
  return result;
}

}  // namespace bcl
