#include "fermidet/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace fermidet {

double fermi_function(double E, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("fermi_function: beta must be positive");
  if (E >= 0.0) {
    double t = std::exp(-beta * E);
    return t / (1.0 + t);
  }
  return 1.0 / (1.0 + std::exp(beta * E));
}

double bare_covariance(double tau, double E, double beta) {
  // Reduce into (-beta, beta]; the extension is plain 2*beta-periodicity.
  double t = std::fmod(tau, 2.0 * beta);
  if (t > beta) t -= 2.0 * beta;
  if (t <= -beta) t += 2.0 * beta;

  // Each branch is rewritten so every exponent is <= 0.
  if (t > 0.0) {
    // -e^{-tE} (1 - f(E)) = -e^{-tE} f(-E)
    if (E >= 0.0)
      return -std::exp(-t * E) / (1.0 + std::exp(-beta * E));
    return -std::exp((beta - t) * E) / (1.0 + std::exp(beta * E));
  }
  // e^{-tE} f(E), t in (-beta, 0]
  if (E >= 0.0) return std::exp(-(t + beta) * E) / (1.0 + std::exp(-beta * E));
  return std::exp(-t * E) / (1.0 + std::exp(beta * E));
}

cdouble matsubara_covariance(double tau, double E, double beta, double omega_max) {
  if (omega_max <= 0.0) throw std::invalid_argument("matsubara_covariance: omega_max must be positive");
  double r = std::abs(std::remainder(tau, beta));
  if (r < 1e-12 * beta)
    throw std::invalid_argument(
        "matsubara_covariance: tau at the discontinuity (multiple of beta)");
  const double unit = M_PI / beta;
  // omega = unit * (2k+1); |2k+1| <= omega_max/unit
  const long kmax = static_cast<long>(std::floor((omega_max / unit - 1.0) / 2.0));
  cdouble sum = 0.0;
  for (long k = 0; k <= kmax; ++k) {
    double omega = unit * (2.0 * k + 1.0);
    // pair omega with -omega
    cdouble e_pos(std::cos(omega * tau), -std::sin(omega * tau));
    sum += e_pos / cdouble(-E, omega) + std::conj(e_pos) / cdouble(-E, -omega);
  }
  return sum / beta;
}

cdouble covariance_position(const SpaceTimePoint& x, const SpaceTimePoint& y,
                            const LatticeModel& model) {
  const int d = model.d();
  if (static_cast<int>(x.x.size()) != d || static_cast<int>(y.x.size()) != d)
    throw std::invalid_argument("covariance_position: dimension mismatch");
  std::vector<int> diff(d);
  for (int i = 0; i < d; ++i) diff[i] = x.x[i] - y.x[i];
  const double dtau = x.tau - y.tau;
  const auto& E = model.dispersion_eff();
  const auto& h = model.h_values();
  cdouble sum = 0.0;
  for (int k = 0; k < model.momentum_count(); ++k) {
    if (h[k] == 0.0) continue;
    double ph = model.phase(k, diff);
    sum += h[k] * cdouble(std::cos(ph), std::sin(ph)) * bare_covariance(dtau, E[k], model.beta());
  }
  return sum * model.weight();
}

cdouble phi_kernel(double s, double eps, double beta) {
  if (eps <= 0.0) throw std::invalid_argument("phi_kernel: eps must be positive");
  double amp = std::sqrt(eps * fermi_function(-eps, beta) / M_PI);
  return amp / cdouble(-eps, s);
}

double phi_time_integral(double tau, double eps, double beta) {
  return std::exp(-eps * std::abs(tau)) * fermi_function(-eps, beta);
}

double fkt_limit_covariance(double tau) { return tau > 0.0 ? -std::exp(-tau) : 0.0; }

}  // namespace fermidet
