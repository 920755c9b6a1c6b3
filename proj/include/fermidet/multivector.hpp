#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "fermidet/linalg.hpp"

namespace fermidet {

/// Sparse element of the exterior algebra over an N-dimensional complex
/// inner-product space, N <= 16.  Basis monomials are indexed by bitmasks:
/// bit i set means generator i+1 is present, generators in ascending order.
class Multivector {
public:
  static constexpr int kMaxDim = 16;

  explicit Multivector(int dim, double prune_eps = 0.0);

  /// The unit 1 of the algebra (degree 0, coefficient 1).
  static Multivector unit(int dim);

  /// Degree-1 element with the given coefficients on the generators.
  static Multivector vector(const std::vector<cdouble>& coeffs);

  int dim() const { return dim_; }
  double prune_eps() const { return prune_eps_; }

  cdouble coeff(std::uint32_t mask) const;
  void add(std::uint32_t mask, cdouble value);
  cdouble scalar_part() const { return coeff(0); }

  const std::map<std::uint32_t, cdouble>& terms() const { return terms_; }

  /// Restriction to basis subsets of cardinality k.
  Multivector degree_component(int k) const;

  /// sqrt(sum_S |coeff_S|^2); the Hilbert norm induced by the scalar product.
  double norm() const;

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(cdouble scalar);
  Multivector operator+(const Multivector& other) const;
  Multivector operator-(const Multivector& other) const;
  Multivector operator*(cdouble scalar) const;

  /// Exterior product.
  Multivector wedge(const Multivector& other) const;

  /// Drops entries at or below the pruning epsilon.  No-op for eps = 0.
  void prune();

private:
  int dim_;
  double prune_eps_;
  std::map<std::uint32_t, cdouble> terms_;
};

/// Sesquilinear scalar product, orthonormal in the subset basis.
cdouble inner_product(const Multivector& a, const Multivector& b);

/// alpha wedge m, alpha given by its coefficients on the dual basis.
Multivector wedge_apply(const std::vector<cdouble>& alpha, const Multivector& m);

/// Interior product u -| m, the degree -1 antiderivation adjoint to wedging.
Multivector contract_apply(const std::vector<cdouble>& u, const Multivector& m);

/// || ((a^)(u-|) + (u-|)(a^)) m - a(u) m ||, which the anticommutation
/// relations say must vanish.
double car_defect(const std::vector<cdouble>& alpha, const std::vector<cdouble>& u,
                  const Multivector& m);

/// det(alpha_i(v_j)) computed through the algebra: the duality pairing of
/// alpha_1^...^alpha_k with v_1^...^v_k.
cdouble duality_det(const std::vector<std::vector<cdouble>>& alphas,
                    const std::vector<std::vector<cdouble>>& vs);

/// Sign of merging two ascending masks: (-1)^{#{(s,t) in S x T : s > t}}.
int merge_sign(std::uint32_t s_mask, std::uint32_t t_mask);

}  // namespace fermidet
