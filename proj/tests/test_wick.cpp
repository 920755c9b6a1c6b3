#include "doctest.h"

#include <vector>

#include "fermidet/multivector.hpp"
#include "fermidet/rng.hpp"
#include "fermidet/wick.hpp"

using namespace fermidet;

namespace {

// 2x2 and 3x3 inverse by the adjugate, kept separate from the library LU.
CMatrix small_inverse(const CMatrix& a) {
  int n = a.rows();
  CMatrix inv(n, n);
  if (n == 1) {
    inv(0, 0) = 1.0 / a(0, 0);
  } else if (n == 2) {
    cdouble det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    inv(0, 0) = a(1, 1) / det;
    inv(1, 1) = a(0, 0) / det;
    inv(0, 1) = -a(0, 1) / det;
    inv(1, 0) = -a(1, 0) / det;
  } else {
    auto co = [&](int i, int j) {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      if (r0 > r1) std::swap(r0, r1);
      if (c0 > c1) std::swap(c0, c1);
      cdouble minor = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
      return (((i + j) % 2) ? -1.0 : 1.0) * minor;
    };
    cdouble det = a(0, 0) * co(0, 0) + a(0, 1) * co(0, 1) + a(0, 2) * co(0, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) inv(i, j) = co(j, i) / det;
  }
  return inv;
}

// Berezin oracle: represent psibar_a as generator a, psi_b as generator
// m+b, the Gaussian weight as exp(sum_ab M_ab psibar_a psi_b) with
// M = (C^{-1})^T, and read the expectation off the top-form coefficients.
cdouble berezin_expectation(const CMatrix& c, const std::vector<FieldIndex>& word) {
  int m = c.rows();
  int dim = 2 * m;
  CMatrix minv = small_inverse(c);
  Multivector s(dim);
  for (int a = 0; a < m; ++a) {
    // psibar_a ^ psi_b carries sign +1 in mask order since a < m + b.
    for (int b = 0; b < m; ++b) s.add((1u << a) | (1u << (m + b)), minv(b, a));
  }
  Multivector weight = Multivector::unit(dim);
  Multivector power = Multivector::unit(dim);
  double fact = 1.0;
  for (int k = 1; k <= m; ++k) {
    power = power.wedge(s);
    fact *= k;
    weight += power * (1.0 / fact);
  }
  Multivector f = Multivector::unit(dim);
  for (const auto& fi : word) {
    Multivector gen(dim);
    gen.add(1u << (fi.barred ? fi.index : m + fi.index), 1.0);
    f = f.wedge(gen);
  }
  std::uint32_t top = (1u << dim) - 1;
  cdouble z = weight.coeff(top);
  return f.wedge(weight).coeff(top) / z;
}

CMatrix random_invertible(int m, Rng& rng) {
  while (true) {
    CMatrix c(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) c(i, j) = rng.complex_normal();
    if (std::abs(lu_det(c)) > 0.1) return c;
  }
}

}  // namespace

TEST_CASE("empty and unbalanced monomials") {
  CMatrix c(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = 2.0;
  CHECK(gaussian_integral(c, {}) == cdouble(1.0));
  CHECK(gaussian_integral(c, {{true, 0}}) == cdouble(0.0));
  CHECK(gaussian_integral(c, {{true, 0}, {true, 1}, {false, 0}}) == cdouble(0.0));
}

TEST_CASE("two-point functions reproduce the covariance entries") {
  Rng rng(31, 0);
  for (int m = 1; m <= 3; ++m) {
    CMatrix c = random_invertible(m, rng);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        cdouble got = gaussian_integral(c, {{true, a}, {false, b}});
        CHECK(std::abs(got - c(a, b)) < 1e-10);
        // Reversed order flips the sign (no equal-index delta here).
        cdouble rev = gaussian_integral(c, {{false, b}, {true, a}});
        CHECK(std::abs(rev + c(a, b)) < 1e-10);
      }
    }
  }
}

TEST_CASE("higher moments match the Berezin top-form oracle") {
  Rng rng(32, 0);
  for (int m = 2; m <= 3; ++m) {
    CMatrix c = random_invertible(m, rng);
    for (int t = 0; t < 60; ++t) {
      int pairs = 1 + static_cast<int>(rng.uniform_index(m));
      std::vector<FieldIndex> word;
      for (int i = 0; i < 2 * pairs; ++i)
        word.push_back({rng.uniform() < 0.5, static_cast<int>(rng.uniform_index(m))});
      int barred = 0;
      for (const auto& f : word) barred += f.barred ? 1 : 0;
      if (barred * 2 != static_cast<int>(word.size())) continue;
      cdouble got = gaussian_integral(c, word);
      cdouble expect = berezin_expectation(c, word);
      CHECK(std::abs(got - expect) < 1e-9 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("repeated fields annihilate the expectation") {
  Rng rng(33, 0);
  CMatrix c = random_invertible(2, rng);
  cdouble v = gaussian_integral(c, {{true, 0}, {true, 0}, {false, 0}, {false, 1}});
  CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("exchanging adjacent fields flips the sign") {
  Rng rng(34, 0);
  CMatrix c = random_invertible(3, rng);
  std::vector<FieldIndex> word = {{true, 0}, {true, 1}, {false, 2}, {false, 0}};
  std::vector<FieldIndex> swapped = {{true, 1}, {true, 0}, {false, 2}, {false, 0}};
  cdouble a = gaussian_integral(c, word), b = gaussian_integral(c, swapped);
  CHECK(std::abs(a + b) < 1e-10 * std::max(1.0, std::abs(a)));
}

TEST_CASE("four-point function factorizes through the pairing determinant") {
  Rng rng(35, 0);
  CMatrix c = random_invertible(2, rng);
  // <psibar_0 psibar_1 psi_1 psi_0> against its hand-expanded Wick value.
  cdouble got = gaussian_integral(c, {{true, 0}, {true, 1}, {false, 1}, {false, 0}});
  cdouble expect = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
  CHECK(std::abs(got - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
}
