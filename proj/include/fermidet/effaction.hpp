#pragma once

#include <map>
#include <utility>
#include <vector>

#include "fermidet/linalg.hpp"
#include "fermidet/multivector.hpp"

namespace fermidet {

/// Polynomial fermionic interaction over a finite index set of `sites`
/// points, stored as antisymmetric kernels v_{mbar,m} keyed by the
/// canonical (strictly ascending) index tuples.  The polynomial reads
/// V = sum over blocks and tuples of v(B, U) psibar_{B1}..psibar_{Bmbar}
/// psi_{U1}..psi_{Um}.
class Interaction {
public:
  using Key = std::pair<std::vector<int>, std::vector<int>>;

  explicit Interaction(int sites);

  int sites() const { return sites_; }

  /// Adds value times the monomial psibar_{b1}..psibar_{bk} psi_{u1}..psi_{ul};
  /// repeated indices within a group contribute nothing.
  void add_term(const std::vector<int>& barred, const std::vector<int>& unbarred, cdouble value);

  /// Full antisymmetric tensor entry for arbitrary (possibly unsorted)
  /// index tuples.
  cdouble kernel(const std::vector<int>& barred, const std::vector<int>& unbarred) const;

  /// Canonical-representative map: key tuples strictly ascending.
  const std::map<Key, cdouble>& entries() const { return entries_; }

  Interaction& operator+=(const Interaction& other);
  Interaction& operator-=(const Interaction& other);
  Interaction& operator*=(cdouble scalar);
  Interaction operator*(cdouble scalar) const;
  Interaction operator-(const Interaction& other) const;

  void prune(double eps = 0.0);

private:
  int sites_;
  std::map<Key, cdouble> entries_;
};

/// Max absolute difference of canonical kernel entries.
double interaction_distance(const Interaction& a, const Interaction& b);

/// Norm sum over blocks of |v_{mbar,m}| h^{mbar+m}, where |v| pins one slot
/// at its worst value and sums absolute kernel values over the others.
double kernel_norm(const Interaction& v, double h);

/// The interaction as an element of an exterior algebra: barred fields are
/// generators barred_offset..barred_offset+sites-1, unbarred likewise;
/// V(Psi' + Psi) doubling is obtained by passing a second pair of offsets
/// with mix = true.
Multivector interaction_to_multivector(const Interaction& v, int dim, int barred_offset,
                                       int unbarred_offset);

/// Same, with every field replaced by the sum of an internal and an
/// external generator (the shift Psi -> Psi' + Psi).
Multivector interaction_to_multivector_shifted(const Interaction& v, int dim,
                                               int internal_barred, int internal_unbarred,
                                               int external_barred, int external_unbarred);

/// Exact effective action log int dmu_C(Psi') e^{lambda V(Psi' + Psi)},
/// additive constant dropped, returned through its kernels.  Needs
/// 4 * sites <= 16 generators.  Throws if the partition scalar vanishes.
Interaction effective_action_exact(const Interaction& v, const CMatrix& covariance,
                                   double lambda);

/// Coefficients w_1..w_pmax of the power series W(lambda V) =
/// sum_p lambda^p w_p, extracted by the series logarithm of the
/// order-by-order Gaussian integrals.  Requires an even interaction (all
/// blocks with mbar+m even), for which the algebra elements commute.
std::vector<Interaction> effective_action_series(const Interaction& v, const CMatrix& covariance,
                                                 int pmax);

/// Max row / column l1 norm of an abstract covariance matrix, its decay
/// constant analogue on a finite index set.
double abstract_alpha(const CMatrix& covariance);

/// sqrt(max column 2-norm): the Gram constant of the factorization
/// C_{ab} = <s e_a, column_b / s> at the balancing scale s, hence a valid
/// determinant bound.
double abstract_delta(const CMatrix& covariance);

struct KonvPoint {
  double lambda = 0.0;
  bool in_domain = false;
  double interaction_norm = 0.0;  // ||lambda V||_{h'}
  double remainder = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct KonvReport {
  double alpha_C = 0.0, delta_C = 0.0, omega_C = 0.0;
  double h = 0.0, h_prime = 0.0;
  int P = 0;
  std::vector<KonvPoint> points;
};

/// Order-P remainder check: || W(lambda V) - sum_{p<=P} lambda^p w_p ||_h
/// against omega_C^P ||lambda V||_{h'}^{P+1} / (1 - omega_C ||lambda V||_{h'})
/// with omega_C = 2 alpha_C / delta_C^2 and h' = h + omega_C.  Points
/// violating the convergence condition are flagged out-of-domain, not
/// failed.
KonvReport konv_remainder_check(const Interaction& v, const CMatrix& covariance, double h, int P,
                                const std::vector<double>& lambdas, double alpha_C,
                                double delta_C);

}  // namespace fermidet
