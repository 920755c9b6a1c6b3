#include "doctest.h"

#include <cmath>

#include "fermidet/detbound.hpp"

using namespace fermidet;

TEST_CASE("unit ball samples have unit norm") {
  Rng rng(61, 0);
  for (int t = 0; t < 100; ++t) {
    int n = 1 + static_cast<int>(rng.uniform_index(6));
    auto v = sample_unit_ball(n, rng);
    CHECK(vec_norm(v) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("constant kernel trials never exceed the rank-one bound") {
  cdouble c(0.6, -0.3);
  auto spec = constant_spec(c, 2.0);
  double delta = std::sqrt(std::abs(c));
  Rng rng(62, 0);
  for (int t = 0; t < 500; ++t) {
    int n = 1 + static_cast<int>(rng.uniform_index(4));
    double masked = masked_det_trial(spec, n, rng);
    CHECK(std::pow(masked, 1.0 / (2 * n)) <= delta * (1.0 + 1e-9));
    double interp = interp_det_trial(spec, n, rng);
    CHECK(std::pow(interp, 1.0 / (2 * n)) <= delta * (1.0 + 1e-9));
  }
}

TEST_CASE("diagonal witness reaches the constant kernel exactly") {
  cdouble c(0.49, 0.0);
  auto spec = constant_spec(c, 2.0);
  CHECK(diagonal_witness(spec, 1) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("step kernel determinants stay within one") {
  auto spec = step_u_spec(2.0);
  Rng rng(63, 0);
  for (int t = 0; t < 500; ++t) {
    int n = 1 + static_cast<int>(rng.uniform_index(6));
    CHECK(masked_det_trial(spec, n, rng) <= 1.0 + 1e-9);
  }
}

TEST_CASE("suite reduction is independent of the thread count") {
  LatticeModel model = metal_model_1d(8, 2.0);
  auto spec = fermion_full_spec(model);
  auto r1 = run_bound_suite(spec, {1, 2, 3}, 200, 77, 1);
  auto r3 = run_bound_suite(spec, {1, 2, 3}, 200, 77, 3);
  CHECK(r1.observed == r3.observed);
  CHECK(r1.pass == r3.pass);
}

TEST_CASE("laplace expansion of a two-piece sum respects the combined constant") {
  int n = 5;
  CMatrix a(n, n), b(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 0.9;
    b(i, i) = cdouble(0.2, 0.1);
  }
  // Off-diagonal mass keeps the pieces honest Gram representations:
  // a is 0.9 P with P a projector pattern, still column-bounded.
  double ga = std::sqrt(0.9), gb = std::sqrt(std::abs(cdouble(0.2, 0.1)));
  double worst = laplace_sum_check({a, b}, {ga, gb}, n, 500, 99);
  CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("hadamard bound outgrows the rank-one constant") {
  for (int n = 1; n <= 6; ++n) {
    auto [hada, gram] = hadamard_comparison(n);
    CHECK(hada == doctest::Approx(std::pow(n, n / 2.0)));
    CHECK(gram == 1.0);
    if (n > 1) CHECK(hada > gram);
  }
}

TEST_CASE("separation check accepts orthogonal frames and rejects collapses") {
  std::vector<double> times = {0.0, 0.5, 1.0};
  std::vector<std::vector<cdouble>> frame = {
      {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  // Orthonormal vectors are sqrt(2) apart: fine for gamma = 1.
  CHECK(gram_separation_check(times, frame, 1.0));
  // but not for a demand of separation 2 (gamma = 0.5).
  CHECK_FALSE(gram_separation_check(times, frame, 0.5));
  // Equal times are exempt from the separation demand.
  std::vector<double> tied = {0.3, 0.3, 1.0};
  std::vector<std::vector<cdouble>> collapsed = {
      {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
  CHECK(gram_separation_check(tied, collapsed, 1.0));
}

TEST_CASE("fermion spec matrices are conjugate symmetric in distribution") {
  LatticeModel model = metal_model_1d(8, 4.0);
  auto spec = fermion_full_spec(model);
  SpaceTimePoint a{0.25, {1}}, b{1.5, {6}};
  cdouble ab = spec.entry(a, b);
  SpaceTimePoint a2{0.25, {6}}, b2{1.5, {1}};
  CHECK(std::abs(ab - std::conj(spec.entry(a2, b2))) < 1e-13);
}
