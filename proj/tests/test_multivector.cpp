#include "doctest.h"

#include <bit>
#include <vector>

#include "fermidet/multivector.hpp"
#include "fermidet/rng.hpp"

using namespace fermidet;

namespace {

// Oracle for the sign of wedging generator g onto an ascending monomial:
// build the concatenated generator list and bubble-sort it, counting swaps.
int bubble_sign(std::vector<int> gens) {
  int swaps = 0;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j + 1 < gens.size() - i; ++j)
      if (gens[j] > gens[j + 1]) {
        std::swap(gens[j], gens[j + 1]);
        ++swaps;
      }
  return (swaps % 2) ? -1 : 1;
}

std::vector<int> mask_to_gens(std::uint32_t mask) {
  std::vector<int> g;
  for (int i = 0; i < 32; ++i)
    if (mask & (1u << i)) g.push_back(i);
  return g;
}

// Dense wedge of two basis monomials, signs from the bubble oracle.
void dense_wedge(std::uint32_t s, std::uint32_t t, cdouble cs, cdouble ct,
                 std::map<std::uint32_t, cdouble>& out) {
  if (s & t) return;
  std::vector<int> gens = mask_to_gens(s);
  for (int g : mask_to_gens(t)) gens.push_back(g);
  out[s | t] += static_cast<double>(bubble_sign(gens)) * cs * ct;
}

Multivector random_mv(int dim, Rng& rng, double density = 0.5) {
  Multivector m(dim);
  for (std::uint32_t mask = 0; mask < (1u << dim); ++mask)
    if (rng.uniform() < density) m.add(mask, rng.complex_normal());
  return m;
}

}  // namespace

TEST_CASE("wedge product against dense bubble-sort oracle") {
  for (int t = 0; t < 50; ++t) {
    Rng rng(5, t);
    int dim = 2 + static_cast<int>(rng.uniform_index(5));
    Multivector a = random_mv(dim, rng), b = random_mv(dim, rng);
    std::map<std::uint32_t, cdouble> expect;
    for (const auto& [s, cs] : a.terms())
      for (const auto& [u, cu] : b.terms()) dense_wedge(s, u, cs, cu, expect);
    Multivector got = a.wedge(b);
    for (const auto& [mask, c] : expect) CHECK(std::abs(got.coeff(mask) - c) < 1e-12);
    for (const auto& [mask, c] : got.terms()) CHECK(std::abs(expect[mask] - c) < 1e-12);
  }
}

TEST_CASE("wedge is associative and graded-commutative") {
  Rng rng(6, 0);
  int dim = 6;
  Multivector a = random_mv(dim, rng), b = random_mv(dim, rng), c = random_mv(dim, rng);
  Multivector lhs = a.wedge(b).wedge(c), rhs = a.wedge(b.wedge(c));
  CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, lhs.norm()));

  // Homogeneous pieces of degree p, q commute up to (-1)^{pq}.
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; q <= 3; ++q) {
      Multivector ap = a.degree_component(p), bq = b.degree_component(q);
      Multivector diff = ap.wedge(bq) - bq.wedge(ap) * std::pow(-1.0, p * q);
      CHECK(diff.norm() < 1e-12);
    }
  }
}

TEST_CASE("merge_sign equals the bubble-sort oracle") {
  Rng rng(7, 0);
  for (int t = 0; t < 500; ++t) {
    std::uint32_t s = static_cast<std::uint32_t>(rng.uniform_index(64));
    std::uint32_t u = static_cast<std::uint32_t>(rng.uniform_index(64));
    if (s & u) continue;
    std::vector<int> gens = mask_to_gens(s);
    for (int g : mask_to_gens(u)) gens.push_back(g);
    CHECK(merge_sign(s, u) == bubble_sign(gens));
  }
}

TEST_CASE("contraction is the adjoint of wedging by the conjugate vector") {
  for (int t = 0; t < 30; ++t) {
    Rng rng(8, t);
    int dim = 3 + static_cast<int>(rng.uniform_index(4));
    auto u = rng.complex_normal_vector(dim);
    std::vector<cdouble> ubar(u.size());
    for (size_t i = 0; i < u.size(); ++i) ubar[i] = std::conj(u[i]);
    Multivector a = random_mv(dim, rng), b = random_mv(dim, rng);
    cdouble lhs = inner_product(wedge_apply(u, a), b);
    cdouble rhs = inner_product(a, contract_apply(ubar, b));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("contraction is an antiderivation of degree -1") {
  Rng rng(9, 0);
  int dim = 6;
  auto u = rng.complex_normal_vector(dim);
  Multivector a = random_mv(dim, rng);
  for (int p = 0; p <= dim; ++p) {
    Multivector ap = a.degree_component(p);
    Multivector down = contract_apply(u, ap);
    for (const auto& [mask, c] : down.terms())
      CHECK(std::popcount(mask) == p - 1);
    // Leibniz: u -| (x ^ y) = (u -| x) ^ y + (-1)^p x ^ (u -| y).
    Multivector b = random_mv(dim, rng);
    Multivector lhs = contract_apply(u, ap.wedge(b));
    Multivector rhs = contract_apply(u, ap).wedge(b) + ap.wedge(contract_apply(u, b)) *
                                                           std::pow(-1.0, p);
    CHECK((lhs - rhs).norm() < 1e-10);
  }
}

TEST_CASE("wedge and contraction operators are norm bounded by the vector norm") {
  for (int t = 0; t < 30; ++t) {
    Rng rng(10, t);
    int dim = 2 + static_cast<int>(rng.uniform_index(5));
    auto u = rng.complex_normal_vector(dim);
    Multivector m = random_mv(dim, rng);
    if (m.norm() < 1e-12) continue;
    CHECK(wedge_apply(u, m).norm() <= vec_norm(u) * m.norm() * (1 + 1e-12));
    CHECK(contract_apply(u, m).norm() <= vec_norm(u) * m.norm() * (1 + 1e-12));
  }
}

TEST_CASE("car defect vanishes and detects a broken pairing") {
  Rng rng(11, 0);
  int dim = 5;
  auto alpha = rng.complex_normal_vector(dim);
  auto u = rng.complex_normal_vector(dim);
  Multivector m = random_mv(dim, rng);
  CHECK(car_defect(alpha, u, m) < 1e-12 * vec_norm(alpha) * vec_norm(u) * m.norm());

  // Scaling alpha alone must scale the anticommutator defect reference:
  // the defect against the *unscaled* pairing is nonzero.
  std::vector<cdouble> alpha2 = alpha;
  for (auto& z : alpha2) z *= 2.0;
  Multivector anti = wedge_apply(alpha2, contract_apply(u, m));
  anti += contract_apply(u, wedge_apply(alpha2, m));
  Multivector wrong = anti - m * bilinear(alpha, u);  // deliberately mismatched
  CHECK(wrong.norm() > 1e-6);
}

TEST_CASE("duality determinant equals cofactor expansion on small cases") {
  Rng rng(12, 0);
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::vector<cdouble>> alphas(n), vs(n);
    for (int i = 0; i < n; ++i) {
      alphas[i] = rng.complex_normal_vector(n);
      vs[i] = rng.complex_normal_vector(n);
    }
    auto e = [&](int i, int j) { return bilinear(alphas[i], vs[j]); };
    cdouble expect;
    if (n == 1) {
      expect = e(0, 0);
    } else if (n == 2) {
      expect = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    } else {
      expect = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
               e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
               e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    }
    CHECK(std::abs(duality_det(alphas, vs) - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("norm and inner product agree with the orthonormal monomial basis") {
  Multivector m(3);
  m.add(0b001, cdouble(3.0, 0.0));
  m.add(0b110, cdouble(0.0, 4.0));
  CHECK(m.norm() == doctest::Approx(5.0));
  CHECK(inner_product(m, m).real() == doctest::Approx(25.0));
  CHECK(inner_product(m, m).imag() == doctest::Approx(0.0));
  Multivector e1(3);
  e1.add(0b001, 1.0);
  CHECK(std::abs(inner_product(e1, m) - cdouble(3.0, 0.0)) < 1e-15);
}

TEST_CASE("pruning drops entries at or below the threshold") {
  Multivector m(2, 1e-8);
  m.add(0b01, 1.0);
  m.add(0b10, 1e-9);
  m.prune();
  CHECK(m.terms().size() == 1);
  CHECK(std::abs(m.coeff(0b01) - cdouble(1.0)) < 1e-15);
}
