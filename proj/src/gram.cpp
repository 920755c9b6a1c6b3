#include "fermidet/gram.hpp"

#include <cmath>
#include <stdexcept>

namespace fermidet {

namespace {

// Sector indicator over the effective dispersion: G+ needs E > 0, the other
// two kinds need E < 0.
bool in_sector(GramVector::Kind kind, double e) {
  return kind == GramVector::Kind::GPlus ? e > 0.0 : e < 0.0;
}

double phase_orientation(GramVector::Kind kind) {
  return kind == GramVector::Kind::HVec ? 1.0 : -1.0;
}

}  // namespace

cdouble gram_inner_product(const GramVector& a, const GramVector& b, const LatticeModel& model) {
  if (model.min_abs_dispersion_eff() == 0.0)
    throw std::invalid_argument(
        "gram_inner_product: dispersion vanishes at a momentum point and no "
        "regularization is set");
  const int d = model.d();
  if (static_cast<int>(a.x.size()) != d || static_cast<int>(b.x.size()) != d)
    throw std::invalid_argument("gram_inner_product: dimension mismatch");
  std::vector<int> diff(d);
  for (int i = 0; i < d; ++i) diff[i] = a.x[i] - b.x[i];
  const double dt = phase_orientation(b.kind) * b.t - phase_orientation(a.kind) * a.t;
  const auto& E = model.dispersion_eff();
  const auto& h = model.h_values();
  cdouble sum = 0.0;
  for (int k = 0; k < model.momentum_count(); ++k) {
    if (h[k] == 0.0) continue;
    if (!in_sector(a.kind, E[k]) || !in_sector(b.kind, E[k])) continue;
    double ph = model.phase(k, diff);
    sum += h[k] * cdouble(std::cos(ph), std::sin(ph)) *
           phi_time_integral(dt, std::abs(E[k]), model.beta());
  }
  return sum * model.weight();
}

double gram_norm_sq(const GramVector& a, const LatticeModel& model) {
  return gram_inner_product(a, a, model).real();
}

cdouble gram_assembled_covariance(const SpaceTimePoint& x, const SpaceTimePoint& y,
                                  const LatticeModel& model) {
  using K = GramVector::Kind;
  const double beta = model.beta();
  if (x.tau > y.tau) {
    GramVector gp{K::GPlus, x.tau, x.x};
    GramVector gm{K::GMinus, beta - x.tau, x.x};
    GramVector gpp{K::GPlus, y.tau, y.x};
    GramVector hp{K::HVec, y.tau, y.x};
    return -(gram_inner_product(gp, gpp, model) + gram_inner_product(gp, hp, model) +
             gram_inner_product(gm, gpp, model) + gram_inner_product(gm, hp, model));
  }
  GramVector gp{K::GPlus, x.tau, x.x};
  GramVector hv{K::HVec, x.tau, x.x};
  GramVector gpp{K::GPlus, y.tau - beta, y.x};
  GramVector hp{K::HVec, y.tau, y.x};
  return gram_inner_product(gp, gpp, model) + gram_inner_product(gp, hp, model) +
         gram_inner_product(hv, gpp, model) + gram_inner_product(hv, hp, model);
}

}  // namespace fermidet
