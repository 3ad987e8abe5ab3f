#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "bcl/errors.hpp"

namespace bcl {

using Complex = std::complex<double>;

/// Dense operator on the truncated Fock basis |0>..|D-1> (or on the
/// D^2-dimensional two-mode basis where noted).
using FockOperator = Eigen::MatrixXcd;

/// Fock-space cutoff plus the per-construction probability-mass budget a
/// caller is willing to lose above it.
struct Truncation {
  int dim;
  double leakage_tol;

  explicit Truncation(int dim_, double leakage_tol_ = 1e-10)
      : dim(dim_), leakage_tol(leakage_tol_) {
    if (dim < 2) throw DomainError("Truncation: dim must be >= 2");
    if (!(leakage_tol > 0.0)) throw DomainError("Truncation: leakage_tol must be > 0");
  }

  friend bool operator==(const Truncation& a, const Truncation& b) {
    return a.dim == b.dim && a.leakage_tol == b.leakage_tol;
  }
};

/// Unit-norm state vector over the truncated Fock basis. `leakage` is the
/// probability mass the construction discarded above the cutoff.
class PureState {
 public:
  PureState(Eigen::VectorXcd amplitudes, Truncation trunc, double leakage = 0.0);

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  const Truncation& trunc() const { return trunc_; }
  double leakage() const { return leakage_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }

 private:
  Eigen::VectorXcd amplitudes_;
  Truncation trunc_;
  double leakage_;
};

/// Hermitian matrix over the truncated Fock basis with an accumulated
/// leakage budget. Hermiticity is enforced at construction; positivity and
/// the trace window are contracts checked where they matter (entropy,
/// channel outputs, tests) so that first-order difference objects like the
/// rho_1 extraction can also live in this type.
class DensityMatrix {
 public:
  DensityMatrix(Eigen::MatrixXcd matrix, Truncation trunc, double leakage = 0.0);

  static DensityMatrix from_pure(const PureState& psi);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Truncation& trunc() const { return trunc_; }
  double leakage() const { return leakage_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  double trace_real() const { return matrix_.trace().real(); }

 private:
  Eigen::MatrixXcd matrix_;
  Truncation trunc_;
  double leakage_;
};

/// First and second moments of the mode operator.
struct Moments {
  Complex mean_a;   // <a>
  double mean_n;    // <a'a>
  Complex mean_a2;  // <a^2>

  /// <a'a> - |<a>|^2; zero exactly for coherent states.
  double variance_proxy() const { return mean_n - std::norm(mean_a); }
};

/// Annihilation and creation operators: a[m,n] = sqrt(n) delta_{m,n-1}.
std::pair<FockOperator, FockOperator> ladder_operators(const Truncation& trunc);

/// Diagonal number operator a'a = diag(0, 1, ..., D-1).
FockOperator number_operator(const Truncation& trunc);

/// Truncated coherent amplitudes <n|alpha> = exp(-|alpha|^2/2) alpha^n/sqrt(n!)
/// without normalization or adequacy checks; the squared-norm deficit of the
/// returned vector is the tail mass above the cutoff. Building block for
/// coherent_state and the coherent-ensemble quadrature.
Eigen::VectorXcd coherent_amplitudes(Complex alpha, int dim);

/// Normalized truncated coherent state. Requires |alpha|^2 <= dim/4 and tail
/// mass below the leakage budget.
PureState coherent_state(Complex alpha, const Truncation& trunc);

/// Number state |n>.
PureState fock_state(int n, const Truncation& trunc);

/// |0>.
PureState vacuum_state(const Truncation& trunc);

/// exp(K) for an anti-Hermitian K, evaluated by Hermitian eigendecomposition
/// of iK. Exactly unitary up to roundoff.
FockOperator exp_antihermitian(const Eigen::MatrixXcd& generator);

/// Displacement operator D(alpha) = exp(alpha a' - conj(alpha) a).
FockOperator displacement_operator(Complex alpha, const Truncation& trunc);

/// Squeeze operator S(r) = exp(r/2 (a^2 - a'^2)); reduces the x-quadrature
/// variance by exp(-2r). Requires sinh^2(r) <= dim/8.
FockOperator squeeze_operator(double r, const Truncation& trunc);

/// Thermal (Bose-Einstein) state of mean photon number n_mean, renormalized
/// over the truncated tail; the discarded tail mass is recorded as leakage.
DensityMatrix thermal_state(double n_mean, const Truncation& trunc);

Moments moments(const PureState& psi);
Moments moments(const DensityMatrix& rho);

/// Which mode of a two-mode composite to keep in a partial trace.
enum class Mode { first, second };

/// Kronecker product state (x) ancilla, flattened index m*D + k.
/// Both operands must share a Truncation; the composite dimension D^2 must
/// stay below the resource cap.
DensityMatrix tensor_with_ancilla(const DensityMatrix& state, const DensityMatrix& ancilla);

/// Reduce a D^2 x D^2 two-mode density matrix to the kept mode.
DensityMatrix partial_trace(const DensityMatrix& two_mode, Mode keep);

/// Largest composite dimension tensor_with_ancilla will build (memory cap for
/// the dense D^2 x D^2 matrix).
inline constexpr int kMaxCompositeDim = 4096;

}  // namespace bcl
