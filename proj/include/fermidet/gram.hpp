#pragma once

#include "fermidet/covariance.hpp"
#include "fermidet/model.hpp"

namespace fermidet {

/// One vector of the Hilbert-space factorization of the two-point kernel.
/// Kinds: GPlus lives on the positive-dispersion momentum sector with time
/// phase e^{-i s t}; GMinus on the negative sector, same phase; HVec on the
/// negative sector with the opposite phase e^{+i s t}.
struct GramVector {
  enum class Kind { GPlus, GMinus, HVec };
  Kind kind;
  double t;
  std::vector<int> x;
};

/// Scalar product of two factorization vectors.  The frequency integral is
/// done in closed form, so the result is an exact momentum sum:
/// L^{-d} sum_p [sector indicators] h(p) e^{i p.(x_a - x_b)}
///   e^{-|E(p)| |c_b t_b - c_a t_a|} f(-|E(p)|)
/// with phase orientation c = -1 for the G kinds and +1 for HVec.
cdouble gram_inner_product(const GramVector& a, const GramVector& b, const LatticeModel& model);

/// Squared Hilbert norm of a vector; bounded by the l1 norm of h.
double gram_norm_sq(const GramVector& a, const LatticeModel& model);

/// Two-point kernel reassembled from the factorization vectors:
/// for t > t' the pairing of -g+_{t} - g-_{beta-t} against g+_{t'} + h_{t'},
/// otherwise g+_{t} + h_{t} against g+_{t'-beta} + h_{t'}.  Must agree with
/// covariance_position exactly up to rounding.
cdouble gram_assembled_covariance(const SpaceTimePoint& x, const SpaceTimePoint& y,
                                  const LatticeModel& model);

}  // namespace fermidet
