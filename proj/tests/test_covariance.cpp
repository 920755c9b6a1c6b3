#include "doctest.h"

#include <cmath>

#include "fermidet/covariance.hpp"
#include "fermidet/model.hpp"
#include "fermidet/rng.hpp"

using namespace fermidet;

TEST_CASE("fermi function identities") {
  Rng rng(41, 0);
  for (int t = 0; t < 100; ++t) {
    double E = rng.uniform(-30.0, 30.0);
    double beta = rng.uniform(0.1, 50.0);
    double f = fermi_function(E, beta);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(f + fermi_function(-E, beta) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // No overflow for extreme arguments.
  CHECK(fermi_function(1e6, 10.0) == 0.0);
  CHECK(fermi_function(-1e6, 10.0) == 1.0);
}

TEST_CASE("propagator matches the unguarded formula at moderate exponents") {
  Rng rng(42, 0);
  for (int t = 0; t < 300; ++t) {
    double beta = rng.uniform(0.5, 4.0);
    double E = rng.uniform(-3.0, 3.0);
    double tau = rng.uniform(-beta, beta);
    double naive;
    if (tau > 0.0)
      naive = -std::exp(-tau * E) / (1.0 + std::exp(-beta * E));
    else
      naive = std::exp(-tau * E) / (1.0 + std::exp(beta * E));
    CHECK(bare_covariance(tau, E, beta) ==
          doctest::Approx(naive).epsilon(1e-13));
  }
}

TEST_CASE("antiperiodic extension over several periods") {
  Rng rng(43, 0);
  for (int t = 0; t < 100; ++t) {
    double beta = rng.uniform(0.5, 4.0);
    double E = rng.uniform(-3.0, 3.0);
    double tau = rng.uniform(-0.99 * beta, 0.99 * beta);
    double base = bare_covariance(tau, E, beta);
    for (int k = 1; k <= 3; ++k) {
      double expect = (k % 2) ? -base : base;
      CHECK(bare_covariance(tau + k * beta, E, beta) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("jump of size one at tau = 0 independent of energy") {
  for (double E : {-2.0, 0.0, 1.5}) {
    double above = bare_covariance(1e-13, E, 2.0);
    double below = bare_covariance(0.0, E, 2.0);
    CHECK(below - above == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("frequency series converges to the propagator away from the jump") {
  double beta = 2.0, E = 1.0, tau = 0.7;
  double exact = bare_covariance(tau, E, beta);
  double prev_err = 1e9;
  for (int k = 6; k <= 12; k += 2) {
    cdouble s = matsubara_covariance(tau, E, beta, std::pow(2.0, k) * M_PI / beta);
    CHECK(std::abs(s.imag()) < 1e-10);
    double err = std::abs(s.real() - exact);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 2e-4);
  CHECK_THROWS_AS(matsubara_covariance(0.0, E, beta, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(matsubara_covariance(beta, E, beta, 100.0), std::invalid_argument);
}

TEST_CASE("lattice kernel at coincident points sums the occupation numbers") {
  LatticeModel model = metal_model_1d(8, 2.0);
  SpaceTimePoint p{0.0, {3}};
  cdouble v = covariance_position(p, p, model);
  double expect = 0.0;
  for (int k = 0; k < model.momentum_count(); ++k)
    expect += model.weight() * model.h_values()[k] *
              fermi_function(model.dispersion_eff()[k], model.beta());
  CHECK(v.real() == doctest::Approx(expect).epsilon(1e-13));
  CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("lattice kernel is translation invariant") {
  LatticeModel model = metal_model_2d(4, 2.0);
  SpaceTimePoint a{0.7, {1, 2}}, b{0.2, {3, 0}};
  SpaceTimePoint a2{0.7, {2, 3}}, b2{0.2, {4, 1}};
  cdouble v1 = covariance_position(a, b, model);
  cdouble v2 = covariance_position(a2, b2, model);
  CHECK(std::abs(v1 - v2) < 1e-13);
}

TEST_CASE("zero temperature limit of the single-mode propagator") {
  CHECK(fkt_limit_covariance(-0.5) == 0.0);
  CHECK(fkt_limit_covariance(2.0) == doctest::Approx(-std::exp(-2.0)));
  for (double tau : {0.3, 1.0, 2.5}) {
    double cold = bare_covariance(tau, 1.0, 50.0);
    CHECK(cold == doctest::Approx(fkt_limit_covariance(tau)).epsilon(1e-12));
  }
}

TEST_CASE("frequency profile squared norm carries the occupation weight") {
  Rng rng(44, 0);
  for (int t = 0; t < 20; ++t) {
    double beta = rng.uniform(0.5, 4.0);
    double eps = rng.uniform(0.1, 2.0);
    CHECK(phi_time_integral(0.0, eps, beta) ==
          doctest::Approx(fermi_function(-eps, beta)).epsilon(1e-14));
    double s = rng.uniform(-4.0, 4.0);
    cdouble phi = phi_kernel(s, eps, beta);
    double expect = eps * fermi_function(-eps, beta) / (M_PI * (s * s + eps * eps));
    CHECK(std::norm(phi) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK_THROWS_AS(phi_kernel(0.0, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("dispersion regularization lifts exact zeros") {
  // Constant dispersion at zero forces the automatic floor.
  LatticeModel model(1, 4, 2.0, constant_dispersion(0.0), unit_scaling());
  CHECK(model.regularization_applied());
  CHECK(model.min_abs_dispersion_eff() > 0.0);
  // A gapped model is left untouched.
  LatticeModel gapped = insulator_model_1d(4, 2.0);
  CHECK_FALSE(gapped.regularization_applied());
  for (int k = 0; k < gapped.momentum_count(); ++k)
    CHECK(gapped.dispersion_eff()[k] == gapped.dispersion_values()[k]);
}
