#pragma once

#include <vector>

#include "fermidet/linalg.hpp"

namespace fermidet {

/// One Grassmann field occurrence: barred (psi-bar) or not, and its
/// internal index in {0, ..., m-1}.
struct FieldIndex {
  bool barred;
  int index;
};

/// Grassmann Gaussian expectation of an ordered field monomial with pairing
/// <psi-bar_a psi_b> = C_{ab}.  Unbalanced monomials integrate to zero.
/// Evaluated as the signed determinant of the covariance submatrix that
/// pairs barred with unbarred occurrences.
cdouble gaussian_integral(const CMatrix& covariance, const std::vector<FieldIndex>& monomial);

}  // namespace fermidet
