#include "doctest.h"

#include <cmath>

#include "fermidet/rng.hpp"
#include "fermidet/scales.hpp"

using namespace fermidet;

TEST_CASE("cutoff profiles partition unity and have the right plateaus") {
  CutoffFunction sd = CutoffFunction::smooth_decay();
  CHECK(sd.lower(0.0) == 1.0);
  CHECK(sd.lower(1.0) == doctest::Approx(0.5));
  CHECK(sd.lower(10.0) == doctest::Approx(1.0 / 10001.0));
  CutoffFunction sb = CutoffFunction::strict_bump();
  CHECK(sb.lower(0.3) == 1.0);
  CHECK(sb.lower(1.0) == 1.0);
  CHECK(sb.lower(2.0) == 0.0);
  CHECK(sb.lower(5.0) == 0.0);
  double mid = sb.lower(1.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  for (double x : {0.2, 0.9, 1.3, 1.7, 2.5}) {
    CHECK(sd.lower(x) + sd.upper(x) == doctest::Approx(1.0));
    CHECK(sb.lower(x) + sb.upper(x) == doctest::Approx(1.0));
    CHECK(sb.lower(x) == doctest::Approx(sb.lower(-x)));
  }
}

TEST_CASE("relative kernel agrees with the two-point kernel") {
  LatticeModel model = metal_model_1d(8, 2.0);
  SpaceTimePoint a{1.3, {5}}, b{0.4, {2}};
  cdouble direct = covariance_position(a, b, model);
  cdouble rel = covariance_rel(a.tau - b.tau, {3}, model);
  CHECK(std::abs(direct - rel) < 1e-14);
}

TEST_CASE("strict bump split is exact and finite") {
  LatticeModel model = metal_model_1d(8, 4.0);
  CutoffFunction sb = CutoffFunction::strict_bump();
  // omega_max below 2 Omega silently truncates the compact support: refuse.
  CHECK_THROWS_AS(covariance_ir(0.3, {1}, model, sb, 16.0, 20.0), std::invalid_argument);
  cdouble lo = covariance_ir(0.3, {1}, model, sb, 16.0, 32.0);
  cdouble lo_more = covariance_ir(0.3, {1}, model, sb, 16.0, 64.0);
  CHECK(std::abs(lo - lo_more) < 1e-15);  // nothing beyond the support
  cdouble hi = covariance_uv(0.3, {1}, model, sb, 16.0, 32.0);
  CHECK(std::abs(lo + hi - covariance_rel(0.3, {1}, model)) < 1e-13);
}

TEST_CASE("precomputed high-frequency kernel matches the direct evaluation") {
  LatticeModel model = metal_model_1d(8, 4.0);
  CutoffFunction sb = CutoffFunction::strict_bump();
  UvKernel uvk(model, sb, 8.0, 16.0);
  for (double tau : {-3.9, -1.0, 0.2, 2.7}) {
    for (int x = 0; x < 8; ++x) {
      cdouble a = uvk(tau, {x});
      cdouble b = covariance_uv(tau, {x}, model, sb, 8.0, 16.0);
      CHECK(std::abs(a - b) < 1e-12);
    }
  }
}

TEST_CASE("gram constant estimate is stable in the truncation") {
  LatticeModel model = metal_model_1d(8, 4.0);
  CutoffFunction sd = CutoffFunction::smooth_decay();
  auto a = gram_constant_ir(model, sd, 16.0, 3200.0);
  auto b = gram_constant_ir(model, sd, 16.0, 6400.0);
  // Both are upper estimates; they differ by at most the larger tail bound.
  CHECK(std::abs(a.gamma_sq - b.gamma_sq) <= a.tail + 1e-12);
  CHECK(a.tail > b.tail);
  CHECK(a.gamma_sq <= a.rhs_bound);
}

TEST_CASE("gram constant refuses the wrong cutoff and low temperature range") {
  LatticeModel model = metal_model_1d(8, 4.0);
  CHECK_THROWS_AS(gram_constant_ir(model, CutoffFunction::strict_bump(), 16.0, 3200.0),
                  std::invalid_argument);
  LatticeModel hot = metal_model_1d(8, 2.0);  // beta = 2 <= pi
  CHECK_THROWS_AS(gram_constant_ir(hot, CutoffFunction::smooth_decay(), 16.0, 3200.0),
                  std::invalid_argument);
}

TEST_CASE("decay constant of a dispersionless model has a closed form") {
  double e0 = 0.8, beta = 3.0;
  LatticeModel model(1, 6, beta, constant_dispersion(e0), unit_scaling());
  auto kern = [&model](double t, const std::vector<int>& x) {
    return covariance_rel(t, x, model);
  };
  auto dc = decay_constant(kern, model, 0, 0);
  CHECK(dc.converged);
  double f = fermi_function(e0, beta);
  double expect = (1.0 - f) * (1.0 - std::exp(-beta * e0)) / e0 +
                  f * (std::exp(beta * e0) - 1.0) / e0;
  CHECK(dc.value == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("time and space weights raise the decay constant") {
  LatticeModel model = metal_model_1d(8, 4.0);
  auto kern = [&model](double t, const std::vector<int>& x) {
    return covariance_rel(t, x, model);
  };
  double a00 = decay_constant(kern, model, 0, 0).value;
  double a10 = decay_constant(kern, model, 1, 0).value;
  double a01 = decay_constant(kern, model, 0, 1).value;
  CHECK(a00 > 0.0);
  CHECK(a10 > 0.0);
  CHECK(a01 > 0.0);
  // |tau| <= beta and |x| <= L/2 give crude comparability bounds.
  CHECK(a10 <= model.beta() * a00 * (1 + 1e-12));
  CHECK(a01 <= 0.5 * model.length() * std::sqrt(1.0) * a00 * (1 + 1e-12));
}

TEST_CASE("fourier l1 of trivial profiles") {
  LatticeModel model = metal_model_1d(8, 2.0);
  std::vector<double> ones(model.momentum_count(), 1.0);
  CHECK(fourier_l1(model, ones) == doctest::Approx(1.0).epsilon(1e-12));
  // A single-momentum profile spreads over all sites with equal weight.
  std::vector<double> delta(model.momentum_count(), 0.0);
  delta[3] = 1.0;
  CHECK(fourier_l1(model, delta) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("periodized cutoff kernel integrates to the zero-frequency weight") {
  CutoffFunction sd = CutoffFunction::smooth_decay();
  double beta = 4.0, Omega = 8.0;
  // u is 2 beta periodic; only the zero frequency survives the period
  // integral, leaving (1/beta) chi(0) (2 beta) = 2.
  int n = 4096;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += u_kernel(2.0 * beta * i / n, sd, beta, Omega);
  sum *= 2.0 * beta / n;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(u_kernel(0.3 + 2.0 * beta, sd, beta, Omega) ==
        doctest::Approx(u_kernel(0.3, sd, beta, Omega)).epsilon(1e-10));
}

TEST_CASE("envelope calibration bounds the kernel on a finer grid") {
  CutoffFunction sb = CutoffFunction::strict_bump();
  double beta = 4.0, Omega = 16.0;
  double K = calibrate_kernel_constant(sb, beta, Omega);
  CHECK(K > 0.0);
  Rng check_rng = Rng(64, 0);
  for (int t = 0; t < 2000; ++t) {
    double tau = check_rng.uniform(0.0, beta);
    double env = 0.25 * K * Omega / std::pow(1.0 + Omega * tau, 3.0);
    CHECK(std::abs(u_kernel(tau, sb, beta, Omega)) <= env * (1.0 + 1e-2) + 1e-12);
  }
}

TEST_CASE("uv sweep input validation") {
  LatticeModel model = metal_model_1d(8, 4.0);
  CHECK_THROWS_AS(uv_decay_check(model, CutoffFunction::smooth_decay(), {8.0, 16.0}),
                  std::invalid_argument);
  // Omega below the dispersion sup is refused.
  CHECK_THROWS_AS(uv_decay_check(model, CutoffFunction::strict_bump(), {1.0}),
                  std::invalid_argument);
}

TEST_CASE("sector probe refuses an unresolved shell") {
  CHECK_THROWS_AS(
      sector_scaling_probe(1, 8, 4.0, cosine_dispersion(0.3), {0.05}),
      std::invalid_argument);
}
