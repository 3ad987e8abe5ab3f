#include "bcl/fock.hpp"

#include <cmath>
#include <sstream>

namespace bcl {

namespace {

std::string format_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

PureState::PureState(Eigen::VectorXcd amplitudes, Truncation trunc, double leakage)
    : amplitudes_(std::move(amplitudes)), trunc_(trunc), leakage_(leakage) {
  if (amplitudes_.size() != trunc_.dim)
    throw DimensionError("PureState: amplitude vector length does not match truncation dim");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12)
    throw DomainError("PureState: amplitudes not unit-norm, |norm-1| = " +
                      format_double(std::abs(norm - 1.0)));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, Truncation trunc, double leakage)
    : matrix_(std::move(matrix)), trunc_(trunc), leakage_(leakage) {
  if (matrix_.rows() != matrix_.cols())
    throw DimensionError("DensityMatrix: matrix must be square");
  if (matrix_.rows() != trunc_.dim)
    throw DimensionError("DensityMatrix: matrix size does not match truncation dim");
  const double herm_dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-12)
    throw DomainError("DensityMatrix: not Hermitian, max |M - M'| = " + format_double(herm_dev));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  Eigen::MatrixXcd m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(std::move(m), psi.trunc(), psi.leakage());
}

std::pair<FockOperator, FockOperator> ladder_operators(const Truncation& trunc) {
  const int d = trunc.dim;
  FockOperator a = FockOperator::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a, a.adjoint()};
}

FockOperator number_operator(const Truncation& trunc) {
  const int d = trunc.dim;
  FockOperator n_op = FockOperator::Zero(d, d);
  for (int n = 0; n < d; ++n) n_op(n, n) = static_cast<double>(n);
  return n_op;
}

Eigen::VectorXcd coherent_amplitudes(Complex alpha, int dim) {
  Eigen::VectorXcd amps(dim);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < dim; ++n) {
    amps(n) = c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return amps;
}

PureState coherent_state(Complex alpha, const Truncation& trunc) {
  if (std::norm(alpha) > trunc.dim / 4.0)
    throw TruncationError("coherent_state: |alpha|^2 = " + format_double(std::norm(alpha)) +
                          " exceeds dim/4 adequacy bound at dim = " + std::to_string(trunc.dim));
  Eigen::VectorXcd amps = coherent_amplitudes(alpha, trunc.dim);
  const double tail = std::max(0.0, 1.0 - amps.squaredNorm());
  if (tail > trunc.leakage_tol)
    throw TruncationError("coherent_state: tail mass " + format_double(tail) +
                          " exceeds leakage_tol " + format_double(trunc.leakage_tol));
  amps.normalize();
  return PureState(std::move(amps), trunc, tail);
}

PureState fock_state(int n, const Truncation& trunc) {
  if (n < 0 || n >= trunc.dim)
    throw DomainError("fock_state: level " + std::to_string(n) + " outside 0.." +
                      std::to_string(trunc.dim - 1));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(trunc.dim);
  amps(n) = 1.0;
  return PureState(std::move(amps), trunc, 0.0);
}

PureState vacuum_state(const Truncation& trunc) { return fock_state(0, trunc); }

FockOperator exp_antihermitian(const Eigen::MatrixXcd& generator) {
  const double anti_dev = (generator + generator.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  if (anti_dev > 1e-12 * scale)
    throw DomainError("exp_antihermitian: generator is not anti-Hermitian");
  const Eigen::MatrixXcd h = Complex(0.0, 1.0) * generator;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw Error("exp_antihermitian: eigendecomposition failed");
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    phases(i) = std::polar(1.0, -es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

FockOperator displacement_operator(Complex alpha, const Truncation& trunc) {
  if (std::norm(alpha) > trunc.dim / 4.0)
    throw TruncationError("displacement_operator: |alpha|^2 exceeds dim/4 adequacy bound");
  auto [a, a_dag] = ladder_operators(trunc);
  return exp_antihermitian(alpha * a_dag - std::conj(alpha) * a);
}

FockOperator squeeze_operator(double r, const Truncation& trunc) {
  const double sh = std::sinh(r);
  if (sh * sh > trunc.dim / 8.0)
    throw TruncationError("squeeze_operator: sinh^2(r) = " + format_double(sh * sh) +
                          " exceeds dim/8 adequacy bound at dim = " + std::to_string(trunc.dim));
  auto [a, a_dag] = ladder_operators(trunc);
  const Eigen::MatrixXcd generator = 0.5 * r * (a * a - a_dag * a_dag);
  return exp_antihermitian(generator);
}

DensityMatrix thermal_state(double n_mean, const Truncation& trunc) {
  if (n_mean < 0.0) throw DomainError("thermal_state: n_mean must be >= 0");
  if (n_mean > trunc.dim / 6.0)
    throw TruncationError("thermal_state: n_mean = " + format_double(n_mean) +
                          " exceeds dim/6 adequacy bound at dim = " + std::to_string(trunc.dim));
  const int d = trunc.dim;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  if (n_mean == 0.0) {
    m(0, 0) = 1.0;
    return DensityMatrix(std::move(m), trunc, 0.0);
  }
  const double q = n_mean / (1.0 + n_mean);  // Bose-Einstein ratio
  const double tail = std::pow(q, d);
  if (tail > trunc.leakage_tol)
    throw TruncationError("thermal_state: tail mass " + format_double(tail) +
                          " exceeds leakage_tol " + format_double(trunc.leakage_tol));
  const double head = 1.0 - tail;
  double p = 1.0 / (1.0 + n_mean);
  for (int n = 0; n < d; ++n) {
    m(n, n) = p / head;
    p *= q;
  }
  return DensityMatrix(std::move(m), trunc, tail);
}

Moments moments(const PureState& psi) {
  const auto& v = psi.amplitudes();
  const int d = psi.dim();
  Complex mean_a = 0.0;
  Complex mean_a2 = 0.0;
  double mean_n = 0.0;
  for (int n = 0; n < d; ++n) {
    mean_n += static_cast<double>(n) * std::norm(v(n));
    if (n + 1 < d) mean_a += std::conj(v(n)) * std::sqrt(n + 1.0) * v(n + 1);
    if (n + 2 < d) mean_a2 += std::conj(v(n)) * std::sqrt((n + 1.0) * (n + 2.0)) * v(n + 2);
  }
  return {mean_a, mean_n, mean_a2};
}

Moments moments(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  const int d = rho.dim();
  Complex mean_a = 0.0;
  Complex mean_a2 = 0.0;
  double mean_n = 0.0;
  // Tr(rho X) for X in {a, a'a, a^2} using the band structure of the ladder
  // operators: (rho a)[n,n] = sqrt(n) rho[n, n-1] etc.
  for (int n = 0; n < d; ++n) {
    mean_n += static_cast<double>(n) * m(n, n).real();
    if (n + 1 < d) mean_a += std::sqrt(n + 1.0) * m(n + 1, n);
    if (n + 2 < d) mean_a2 += std::sqrt((n + 1.0) * (n + 2.0)) * m(n + 2, n);
  }
  return {mean_a, mean_n, mean_a2};
}

DensityMatrix tensor_with_ancilla(const DensityMatrix& state, const DensityMatrix& ancilla) {
  if (!(state.trunc() == ancilla.trunc()))
    throw DimensionError("tensor_with_ancilla: operands must share a Truncation");
  const int d = state.dim();
  const long composite = static_cast<long>(d) * d;
  if (composite > kMaxCompositeDim)
    throw ResourceError("tensor_with_ancilla: composite dimension " + std::to_string(composite) +
                        " exceeds cap " + std::to_string(kMaxCompositeDim));
  Eigen::MatrixXcd out(composite, composite);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      out.block(m * d, n * d, d, d) = state.matrix()(m, n) * ancilla.matrix();
  Truncation two_mode(static_cast<int>(composite), state.trunc().leakage_tol);
  return DensityMatrix(std::move(out), two_mode, state.leakage() + ancilla.leakage());
}

DensityMatrix partial_trace(const DensityMatrix& two_mode, Mode keep) {
  const int composite = two_mode.dim();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(composite))));
  if (d * d != composite)
    throw DimensionError("partial_trace: dimension " + std::to_string(composite) +
                         " is not a perfect square");
  const auto& m = two_mode.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  if (keep == Mode::first) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out(i, j) += m(i * d + k, j * d + k);
  } else {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out(i, j) += m(k * d + i, k * d + j);
  }
  out = 0.5 * (out + out.adjoint().eval());  // strip roundoff asymmetry
  Truncation single(d, two_mode.trunc().leakage_tol);
  return DensityMatrix(std::move(out), single, two_mode.leakage());
}

}  // namespace bcl
