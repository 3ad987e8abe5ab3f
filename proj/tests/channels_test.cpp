#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "bcl/channels.hpp"
#include "bcl/entropy.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcl;

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Eigen::MatrixXcd out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("channels");

TEST_CASE("ChannelSpec validation") {
  CHECK_THROWS_AS(ChannelSpec::amplifier(0.9), DomainError);
  CHECK_THROWS_AS(ChannelSpec::loss(0.0), DomainError);
  CHECK_THROWS_AS(ChannelSpec::loss(1.2), DomainError);
  CHECK_THROWS_AS(ChannelSpec::cascade({}), DomainError);
  const ChannelSpec nested = ChannelSpec::cascade(
      {ChannelSpec::amplifier(1.5),
       ChannelSpec::cascade({ChannelSpec::loss(0.5), ChannelSpec::amplifier(1.2)})});
  CHECK(nested.flattened().size() == 3);
  CHECK(!nested.is_pure_amplification());
  CHECK(nested.overall_gain() == doctest::Approx(1.5 * 0.5 * 1.2));
}

TEST_CASE("two-mode unitaries match the dense matrix exponential at D = 6") {
  const Truncation trunc(6);
  auto [a, a_dag] = ladder_operators(trunc);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(6, 6);

  SUBCASE("two-mode squeeze") {
    const double r = 0.3;
    const Eigen::MatrixXcd generator =
        r * (kron(a_dag, a_dag) - kron(a, a));
    const Eigen::MatrixXcd expected = generator.exp();
    CHECK(test::max_abs_diff(two_mode_squeeze_unitary(r, trunc), expected) < 1e-10);
  }
  SUBCASE("beam splitter") {
    const double theta = 0.7;
    const Eigen::MatrixXcd generator =
        theta * (kron(a_dag, a) - kron(a, a_dag));
    const Eigen::MatrixXcd expected = generator.exp();
    CHECK(test::max_abs_diff(beam_splitter_unitary(theta, trunc), expected) < 1e-10);
  }
  SUBCASE("blockwise apply agrees with the dense product") {
    GaussianSampler rng(21);
    const Eigen::VectorXcd v = test::random_unit_vector(rng, 36);
    const auto u = TwoModeUnitary::two_mode_squeeze(0.4, 6);
    CHECK((u.apply(v) - u.dense() * v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("amplifier oracle outputs") {
  SUBCASE("vacuum in, thermal(G-1) out") {
    const Truncation trunc(40);
    const ChannelApplication app =
        apply_amplifier(DensityMatrix::from_pure(vacuum_state(trunc)), 1.5);
    CHECK(test::max_abs_diff(app.output.matrix(), thermal_state(0.5, trunc).matrix()) < 1e-8);
    CHECK(app.leakage < trunc.leakage_tol);
    CHECK(std::abs(app.output.trace_real() - 1.0) <= app.leakage + 1e-12);
  }
  SUBCASE("thermal(N) in, thermal(NG + G - 1) out") {
    const Truncation trunc(40, 1e-6);
    const ChannelApplication app = apply_amplifier(thermal_state(1.0, trunc), 1.5);
    CHECK(test::max_abs_diff(app.output.matrix(), thermal_state(2.0, trunc).matrix()) < 1e-7);
  }
  SUBCASE("unit gain is the identity map") {
    const Truncation trunc(24);
    const DensityMatrix rho = DensityMatrix::from_pure(coherent_state(0.7, trunc));
    const ChannelApplication app = apply_amplifier(rho, 1.0);
    CHECK(test::max_abs_diff(app.output.matrix(), rho.matrix()) < 1e-12);
  }
  SUBCASE("gain below one is rejected") {
    const Truncation trunc(12);
    CHECK_THROWS_AS(apply_amplifier(DensityMatrix::from_pure(vacuum_state(trunc)), 0.8),
                    DomainError);
  }
  SUBCASE("photon adequacy guard") {
    const Truncation trunc(12, 1e-1);
    CHECK_THROWS_AS(apply_amplifier(thermal_state(1.5, trunc), 1.5), TruncationError);
  }
}

TEST_CASE("loss channel") {
  SUBCASE("coherent stays coherent and pure") {
    const Truncation trunc(40);
    const ChannelApplication app =
        apply_loss(DensityMatrix::from_pure(coherent_state(1.0, trunc)), 0.36);
    const DensityMatrix expected = DensityMatrix::from_pure(coherent_state(0.6, trunc));
    CHECK(test::max_abs_diff(app.output.matrix(), expected.matrix()) < 1e-9);
    CHECK(von_neumann_entropy(app.output).entropy_nats < 1e-9);
  }
  SUBCASE("unit transmissivity is the identity map") {
    GaussianSampler rng(31);
    const DensityMatrix rho = test::random_density_matrix(rng, Truncation(12));
    const ChannelApplication app = apply_loss(rho, 1.0);
    CHECK(test::max_abs_diff(app.output.matrix(), rho.matrix()) < 1e-12);
  }
  SUBCASE("thermal mean scales by the transmissivity") {
    const Truncation trunc(40);
    const ChannelApplication app = apply_loss(thermal_state(1.0, trunc), 0.5);
    CHECK(test::max_abs_diff(app.output.matrix(), thermal_state(0.5, trunc).matrix()) < 1e-8);
  }
  SUBCASE("domain guard") {
    const Truncation trunc(12);
    CHECK_THROWS_AS(apply_loss(DensityMatrix::from_pure(vacuum_state(trunc)), -0.1), DomainError);
  }
}

TEST_CASE("cascades") {
  SUBCASE("amplifier then strong loss keeps the attenuated noise photons") {
    const Truncation trunc(40);
    const double gain = 1.5, eps = 1e-3;
    const ChannelSpec spec =
        ChannelSpec::cascade({ChannelSpec::amplifier(gain), ChannelSpec::loss(eps)});
    const ChannelApplication app =
        apply_channel(DensityMatrix::from_pure(vacuum_state(trunc)), spec);
    CHECK(std::abs(moments(app.output).mean_n - eps * (gain - 1.0)) < 1e-6);
  }
  SUBCASE("quantum-limited amplifiers compose multiplicatively") {
    const Truncation trunc(40);
    const ChannelSpec spec =
        ChannelSpec::cascade({ChannelSpec::amplifier(1.2), ChannelSpec::amplifier(1.5)});
    const DensityMatrix vac = DensityMatrix::from_pure(vacuum_state(trunc));
    const ChannelApplication composed = apply_channel(vac, spec);
    const ChannelApplication direct = apply_amplifier(vac, 1.8);
    CHECK(test::max_abs_diff(composed.output.matrix(), direct.output.matrix()) < 1e-7);
  }
  SUBCASE("beam splitters compose multiplicatively") {
    GaussianSampler rng(41);
    const Truncation trunc(12);
    const DensityMatrix rho = test::random_density_matrix(rng, trunc);
    const ChannelSpec spec =
        ChannelSpec::cascade({ChannelSpec::loss(0.8), ChannelSpec::loss(0.5)});
    const ChannelApplication composed = apply_channel(rho, spec);
    const ChannelApplication direct = apply_loss(rho, 0.4);
    CHECK(test::max_abs_diff(composed.output.matrix(), direct.output.matrix()) < 1e-8);
  }
}

TEST_CASE("closed-form displaced-thermal amplifier output") {
  SUBCASE("alpha = 0 reduces to the thermal noise state") {
    const Truncation trunc(40);
    CHECK(test::max_abs_diff(amplifier_output_for_coherent(0.0, 1.4, trunc).matrix(),
                             thermal_state(0.4, trunc).matrix()) < 1e-14);
  }
  SUBCASE("matches the dilation numerics entrywise") {
    const Truncation trunc(40);
    const Complex alpha(0.8, 0.0);
    const DensityMatrix closed = amplifier_output_for_coherent(alpha, 1.3, trunc);
    const ChannelApplication dilated =
        apply_amplifier(DensityMatrix::from_pure(coherent_state(alpha, trunc)), 1.3);
    CHECK(test::max_abs_diff(closed.matrix(), dilated.output.matrix()) < 1e-7);
  }
  SUBCASE("output entropy is g(G-1) independent of alpha") {
    const Truncation trunc(40);
    const double gain = 1.3;
    const Complex alphas[] = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.5}};
    double lo = 1e300, hi = -1e300;
    for (const Complex alpha : alphas) {
      const double s =
          von_neumann_entropy(amplifier_output_for_coherent(alpha, gain, trunc)).entropy_nats;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      CHECK(std::abs(s - g_function(gain - 1.0)) < 1e-8);
    }
    CHECK(hi - lo < 1e-8);
  }
}

TEST_CASE("channel properties") {
  SUBCASE("amplifier covariance under displacement") {
    const Truncation trunc(40, 1e-6);
    GaussianSampler rng(51);
    const double gain = 1.3;
    const Complex alpha(0.5, 0.0);
    const DensityMatrix rho =
        DensityMatrix::from_pure(test::random_low_energy_state(rng, trunc, 3));
    const FockOperator d_in = displacement_operator(alpha, trunc);
    const FockOperator d_out = displacement_operator(std::sqrt(gain) * alpha, trunc);

    Eigen::MatrixXcd shifted = d_in * rho.matrix() * d_in.adjoint();
    shifted = 0.5 * (shifted + shifted.adjoint().eval());
    const ChannelApplication lhs = apply_amplifier(DensityMatrix(shifted, trunc), gain);

    const ChannelApplication base = apply_amplifier(rho, gain);
    const Eigen::MatrixXcd rhs = d_out * base.output.matrix() * d_out.adjoint();
    CHECK(test::max_abs_diff(lhs.output.matrix(), rhs) < 1e-7);
  }
  SUBCASE("entropy is invariant under displacement of the input") {
    const Truncation trunc(40);
    GaussianSampler rng(61);
    const DensityMatrix rho =
        DensityMatrix::from_pure(test::random_low_energy_state(rng, trunc, 6));
    const FockOperator d_op = displacement_operator(Complex(0.7, -0.2), trunc);
    Eigen::MatrixXcd shifted = d_op * rho.matrix() * d_op.adjoint();
    shifted = 0.5 * (shifted + shifted.adjoint().eval());
    CHECK(std::abs(von_neumann_entropy(DensityMatrix(shifted, trunc)).entropy_nats -
                   von_neumann_entropy(rho).entropy_nats) < 1e-8);
  }
  SUBCASE("vacuum output entropy grows with the gain") {
    const Truncation trunc(40);
    const DensityMatrix vac = DensityMatrix::from_pure(vacuum_state(trunc));
    double previous = -1.0;
    for (double gain = 1.1; gain < 2.05; gain += 0.1) {
      const double s = von_neumann_entropy(apply_amplifier(vac, gain).output).entropy_nats;
      CHECK(s > previous);
      previous = s;
    }
  }
  SUBCASE("complete positivity proxy: outputs stay PSD for random inputs") {
    GaussianSampler rng(71);
    const Truncation loss_trunc(12);
    for (int trial = 0; trial < 50; ++trial) {
      const DensityMatrix rho = test::random_density_matrix(rng, loss_trunc);
      const Eigen::MatrixXcd out = apply_loss(rho, 0.7).output.matrix();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues()(0) >= -1e-10);
    }
    const Truncation amp_trunc(32, 1e-6);
    for (int trial = 0; trial < 50; ++trial) {
      const DensityMatrix rho =
          DensityMatrix::from_pure(test::random_low_energy_state(rng, amp_trunc, 4));
      const Eigen::MatrixXcd out = apply_amplifier(rho, 1.3).output.matrix();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues()(0) >= -1e-10);
    }
  }
  SUBCASE("trace preservation within the leakage budget") {
    const Truncation trunc(40, 1e-6);
    const ChannelApplication app = apply_amplifier(thermal_state(1.0, trunc), 1.5);
    CHECK(std::abs(app.output.trace_real() - 1.0) <= app.leakage + 1e-12);
  }
}

TEST_CASE("spectral-path application equals the explicit dilation") {
  // Same map two ways: per-eigenvector vectors through the block unitary vs
  // tensor with a vacuum ancilla, dense unitary conjugation, partial trace.
  GaussianSampler rng(81);
  const Truncation trunc(10, 1e-2);
  const double gain = 1.1;
  Eigen::MatrixXcd mix = 0.8 * Eigen::MatrixXcd::Identity(10, 10) * 0.0;
  mix(0, 0) = 0.8;
  const DensityMatrix low = test::random_density_matrix(rng, Truncation(10, 1e-2));
  Eigen::MatrixXcd damped = Eigen::MatrixXcd::Zero(10, 10);
  damped(0, 0) = 0.8;
  damped.topLeftCorner(3, 3) += 0.2 * low.matrix().topLeftCorner(3, 3) /
                                low.matrix().topLeftCorner(3, 3).trace().real();
  damped = 0.5 * (damped + damped.adjoint().eval());
  const DensityMatrix rho(damped, trunc);

  const ChannelApplication fast = apply_amplifier(rho, gain);

  const DensityMatrix vac = DensityMatrix::from_pure(vacuum_state(trunc));
  const DensityMatrix joint = tensor_with_ancilla(rho, vac);
  const Eigen::MatrixXcd u = two_mode_squeeze_unitary(std::acosh(std::sqrt(gain)), trunc);
  Eigen::MatrixXcd evolved = u * joint.matrix() * u.adjoint();
  evolved = 0.5 * (evolved + evolved.adjoint().eval());
  const DensityMatrix reduced =
      partial_trace(DensityMatrix(evolved, joint.trunc(), joint.leakage()), Mode::first);

  CHECK(test::max_abs_diff(fast.output.matrix(), reduced.matrix()) < 1e-12);
}

TEST_SUITE_END();
