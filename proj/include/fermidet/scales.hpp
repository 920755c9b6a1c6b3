#pragma once

#include <functional>
#include <vector>

#include "fermidet/covariance.hpp"
#include "fermidet/model.hpp"

namespace fermidet {

/// Frequency cutoff profile chi_< with chi_> = 1 - chi_<.
/// SmoothDecay: chi_<(x) = 1/(1+x^4), power-law tail with kappa = 1,
/// alpha_exp = 4.  StrictBump: identically 1 on |x| <= 1, identically 0 on
/// |x| >= 2, smooth mollifier transition in between.
struct CutoffFunction {
  enum class Kind { SmoothDecay, StrictBump };
  Kind kind = Kind::SmoothDecay;
  double kappa = 1.0;
  double alpha_exp = 4.0;

  double lower(double x) const;
  double upper(double x) const { return 1.0 - lower(x); }

  static CutoffFunction smooth_decay();
  static CutoffFunction strict_bump();
};

/// Relative-coordinate two-point kernel
/// C(tau, x) = L^{-d} sum_p h(p) e^{i p.x} bareC(tau, E_eff(p)).
cdouble covariance_rel(double tau, const std::vector<int>& x, const LatticeModel& model);

/// Low-frequency part: truncated frequency series
/// (1/beta) sum_{|omega| <= omega_max} chi_<(omega/Omega) e^{-i omega tau}
///   L^{-d} sum_p h(p) e^{i p.x} / (i omega - E_eff(p)),
/// omega over odd multiples of pi/beta.  Exact (finite) for StrictBump once
/// omega_max >= 2 Omega; refuses a smaller omega_max in that case.
cdouble covariance_ir(double tau, const std::vector<int>& x, const LatticeModel& model,
                      const CutoffFunction& cutoff, double Omega, double omega_max);

/// High-frequency remainder C - C_<; carries the full jump at tau = 0.
cdouble covariance_uv(double tau, const std::vector<int>& x, const LatticeModel& model,
                      const CutoffFunction& cutoff, double Omega, double omega_max);

/// Precomputed evaluator for the high-frequency kernel, for use inside
/// quadrature loops (frequency-by-position tables built once).
class UvKernel {
public:
  UvKernel(const LatticeModel& model, const CutoffFunction& cutoff, double Omega,
           double omega_max);
  cdouble operator()(double tau, const std::vector<int>& x) const;

private:
  const LatticeModel& model_;
  std::vector<double> omegas_;
  std::vector<std::vector<cdouble>> table_;  // [omega][flat position index]
  std::vector<int> strides_;
};

struct GramIrResult {
  double gamma_sq = 0.0;   // upper estimate: truncated sum plus tail bound
  double tail = 0.0;       // analytic bound on the part beyond omega_max
  double rhs_bound = 0.0;  // closed-form right-hand side it must not exceed
  double omega_max = 0.0;
};

/// Squared Gram constant of the low-frequency part,
/// (1/beta) sum_omega L^{-d} sum_p chi_<(omega/Omega) |h(p)| / |i omega - E(p)|,
/// truncated at omega_max with the power-law tail added analytically.
/// Requires a SmoothDecay cutoff and beta > pi.
GramIrResult gram_constant_ir(const LatticeModel& model, const CutoffFunction& cutoff,
                              double Omega, double omega_max);

struct DecayConstant {
  double value = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Weighted l1 norm int_{-beta}^{beta} dtau sum_x |kernel(tau,x)| |tau|^k0 |x|^k,
/// x ranging over the torus with minimal-image Euclidean length, the time
/// integral by composite Gauss-Legendre split at the tau = 0 jump, panel
/// count doubled until the relative change is below rel_tol.
DecayConstant decay_constant(const std::function<cdouble(double, const std::vector<int>&)>& kernel,
                             const LatticeModel& model, int k0, int k, double rel_tol = 1e-6);

/// l1 norm (counting measure on the torus) of the inverse transform of the
/// given momentum-space values.
double fourier_l1(const LatticeModel& model, const std::vector<double>& values);

/// The periodized cutoff kernel
/// u(tau) = (1/beta) sum_{omega in (pi/beta) Z} e^{-i omega tau} chi_<(omega/Omega)
/// (all integer multiples, since it smooths a 2beta-periodic even/odd pair).
double u_kernel(double tau, const CutoffFunction& cutoff, double beta, double Omega);

/// K = 4 sup_tau |u(tau)| (1 + Omega|tau|)^3 / Omega over a fine tau grid;
/// the constant in the envelope |u(tau)| <= (K/4) Omega / (1+Omega|tau|)^3.
double calibrate_kernel_constant(const CutoffFunction& cutoff, double beta, double Omega);

struct UvDecayPoint {
  double Omega = 0.0;
  double alpha = 0.0;          // decay constant of the high-frequency kernel
  double envelope_check = 0.0; // max over grid of |u| (1+Omega|tau|)^3 / ((K/4) Omega)
  bool bound_applicable = false;  // K ||F||_1 < Omega/4
  double bound = 0.0;             // (2K/Omega) ||g||_1 when applicable
  bool bound_ok = true;
};

struct UvDecayReport {
  double K = 0.0;
  double F_l1 = 0.0;  // inverse transform of the dispersion
  double g_l1 = 0.0;  // inverse transform of h
  std::vector<UvDecayPoint> points;
  std::vector<double> halving_ratios;  // alpha(2 Omega) / alpha(Omega)
};

/// Decay-constant sweep of the high-frequency kernel over Omegas (must be
/// doubling and exceed the dispersion sup norm); StrictBump only.
UvDecayReport uv_decay_check(const LatticeModel& model, const CutoffFunction& cutoff,
                             const std::vector<double>& omegas);

struct SectorProbeResult {
  std::vector<double> eps;
  std::vector<double> alpha;
  double slope = 0.0;  // of log alpha against log eps
};

/// Decay constants for shell-supported scaling functions h = f(E/eps),
/// swept over eps.  Refuses a lattice too coarse to resolve the shell
/// (fewer than 4 momenta in the support of h).
SectorProbeResult sector_scaling_probe(
    int d, int length, double beta,
    const std::function<double(const std::vector<double>&)>& dispersion,
    const std::vector<double>& eps_list);

}  // namespace fermidet
