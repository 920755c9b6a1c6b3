#pragma once

#include "fermidet/linalg.hpp"
#include "fermidet/model.hpp"

namespace fermidet {

/// Fermi function 1/(1 + e^{beta E}), overflow-safe for large |beta E|.
double fermi_function(double E, double beta);

/// Free propagator in (imaginary time, energy) variables, extended
/// 2*beta-periodically.  After reduction of tau into (-beta, beta]:
/// -e^{-tau E} (1 - f(E)) for tau in (0, beta], e^{-tau E} f(E) for tau in
/// (-beta, 0].  Antiperiodic: value at tau + beta is minus the value at tau.
double bare_covariance(double tau, double E, double beta);

/// Same propagator through its frequency series: (1/beta) sum over odd
/// frequencies omega = (pi/beta)(2k+1) with |omega| <= omega_max of
/// e^{-i omega tau} / (i omega - E).  Refuses tau at the jump (tau a
/// multiple of beta), where the symmetric partial sum converges to the
/// midpoint of the two one-sided values.
cdouble matsubara_covariance(double tau, double E, double beta, double omega_max);

/// Two-point kernel on the lattice model:
/// L^{-d} sum_p h(p) e^{i p.(x-y)} bareC(tau_x - tau_y, E_eff(p)).
cdouble covariance_position(const SpaceTimePoint& x, const SpaceTimePoint& y,
                            const LatticeModel& model);

/// Frequency-side profile (1/sqrt(pi)) sqrt(eps f(-eps)) / (i s - eps)
/// whose squared modulus integrates, against e^{i s tau}, to
/// e^{-eps |tau|} f(-eps).
cdouble phi_kernel(double s, double eps, double beta);

/// The closed form of that integral, for any real tau.
double phi_time_integral(double tau, double eps, double beta);

/// Zero-temperature single-mode limit -e^{-tau} for tau > 0, else 0.
double fkt_limit_covariance(double tau);

}  // namespace fermidet
