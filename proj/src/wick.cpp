#include "fermidet/wick.hpp"

#include <stdexcept>

namespace fermidet {

cdouble gaussian_integral(const CMatrix& covariance, const std::vector<FieldIndex>& monomial) {
  std::vector<int> barred, unbarred;      // indices in order of appearance
  std::vector<int> target_rank(monomial.size());
  for (const auto& f : monomial) {
    if (f.index < 0 || f.index >= covariance.rows() || f.index >= covariance.cols())
      throw std::out_of_range("gaussian_integral: field index out of range");
    if (f.barred)
      barred.push_back(f.index);
    else
      unbarred.push_back(f.index);
  }
  if (barred.size() != unbarred.size()) return 0.0;
  const int p = static_cast<int>(barred.size());
  if (p == 0) return 1.0;

  // Sign of reordering the monomial into psibar_{a_1}..psibar_{a_p} psi_{b_p}..psi_{b_1},
  // with a_i and b_i each in order of appearance.  In that arrangement the
  // integral is det(C_{a_i b_j}).
  {
    int bar_seen = 0, unbar_seen = 0;
    for (size_t pos = 0; pos < monomial.size(); ++pos) {
      if (monomial[pos].barred)
        target_rank[pos] = bar_seen++;
      else
        target_rank[pos] = 2 * p - 1 - unbar_seen++;
    }
  }
  int inversions = 0;
  for (size_t i = 0; i < target_rank.size(); ++i)
    for (size_t j = i + 1; j < target_rank.size(); ++j)
      if (target_rank[i] > target_rank[j]) ++inversions;
  double sign = (inversions & 1) ? -1.0 : 1.0;

  CMatrix sub(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) sub(i, j) = covariance(barred[i], unbarred[j]);
  return sign * lu_det(sub);
}

}  // namespace fermidet
