#pragma once

#include <compare>
#include <vector>

#include "fermidet/multivector.hpp"

namespace fermidet {

/// Lexicographic label (j, mu, nu) used to break ties between repeated
/// real labels while preserving the indicator structure.
struct OrderedLabel {
  double j = 0.0;
  int mu = 0;
  int nu = 1;

  friend auto operator<=>(const OrderedLabel&, const OrderedLabel&) = default;
};

enum class OpKind { Wedge, Contract };

/// A wedge or contraction operator tagged with a totally ordered label.
struct ChronoOperator {
  OpKind kind;
  std::vector<cdouble> vec;
  OrderedLabel label;
};

/// Lifts real labels phi (columns / contractions) and phi' (rows / wedges)
/// to strictly ordered labels so that the strict (or weak) indicator over
/// the reals coincides with the strict indicator over the lifted labels.
/// Returns (phi labels, phi' labels) in the original index order.
std::pair<std::vector<OrderedLabel>, std::vector<OrderedLabel>> extend_order(
    const std::vector<double>& phi_labels, const std::vector<double>& phi_prime_labels,
    bool strict);

/// (-1)^{#{(j,j') in J x J' : j > j'}}.  The sets must be disjoint.
int rho_sign(const std::vector<OrderedLabel>& j_set, const std::vector<OrderedLabel>& j_prime_set);

/// Label-sorted, permutation-signed composition: sgn(pi) e_{pi(1)} ... e_{pi(K)}
/// applied to m, the operator with the largest label acting first.
/// Labels must be pairwise distinct.
Multivector chrono_product_apply(const std::vector<ChronoOperator>& ops, const Multivector& m);

/// det of M_{kl} = alpha_k(v_l) 1_{j'_k > j_l} evaluated through the algebra:
/// (-1)^{n(n-1)/2} T_{J,J'}[v_1-|,...,v_n-|,(a_1^),...,(a_n^)] 1.
/// J and J' must be disjoint and each sorted ascending.
cdouble chrono_det(const std::vector<std::vector<cdouble>>& alphas,
                   const std::vector<std::vector<cdouble>>& vs,
                   const std::vector<OrderedLabel>& j_set,
                   const std::vector<OrderedLabel>& j_prime_set);

/// det of M_{kl} = alpha_k(v_l) 1_{phi'(k) > phi(l)} (or >=) with repeated
/// real labels allowed, evaluated by lifting through extend_order, sorting
/// both label sets and compensating the row/column permutation signs.
cdouble masked_det_chrono(const std::vector<std::vector<cdouble>>& alphas,
                          const std::vector<std::vector<cdouble>>& vs,
                          const std::vector<double>& phi, const std::vector<double>& phi_prime,
                          bool strict);

/// The same determinant assembled entrywise and evaluated by pivoted LU.
cdouble masked_det_lu(const std::vector<std::vector<cdouble>>& alphas,
                      const std::vector<std::vector<cdouble>>& vs,
                      const std::vector<double>& phi, const std::vector<double>& phi_prime,
                      bool strict);

}  // namespace fermidet
