#include "fermidet/scales.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fermidet {

namespace {

double mollifier(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Gauss-Legendre, 8 point.
constexpr double kGlNode[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
constexpr double kGlWeight[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};

double minimal_image_norm(const std::vector<int>& x, int length) {
  double s = 0.0;
  for (int xi : x) {
    int r = xi % length;
    if (r < 0) r += length;
    int m = std::min(r, length - r);
    s += static_cast<double>(m) * m;
  }
  return std::sqrt(s);
}

}  // namespace

double CutoffFunction::lower(double x) const {
  if (kind == Kind::SmoothDecay) {
    double x2 = x * x;
    return 1.0 / (1.0 + x2 * x2);
  }
  double t = 2.0 - std::abs(x);
  if (t >= 1.0) return 1.0;
  if (t <= 0.0) return 0.0;
  double a = mollifier(t);
  return a / (a + mollifier(1.0 - t));
}

CutoffFunction CutoffFunction::smooth_decay() { return {Kind::SmoothDecay, 1.0, 4.0}; }

CutoffFunction CutoffFunction::strict_bump() {
  CutoffFunction c;
  c.kind = Kind::StrictBump;
  return c;
}

cdouble covariance_rel(double tau, const std::vector<int>& x, const LatticeModel& model) {
  const auto& E = model.dispersion_eff();
  const auto& h = model.h_values();
  cdouble sum = 0.0;
  for (int k = 0; k < model.momentum_count(); ++k) {
    if (h[k] == 0.0) continue;
    double ph = model.phase(k, x);
    sum += h[k] * cdouble(std::cos(ph), std::sin(ph)) * bare_covariance(tau, E[k], model.beta());
  }
  return sum * model.weight();
}

cdouble covariance_ir(double tau, const std::vector<int>& x, const LatticeModel& model,
                      const CutoffFunction& cutoff, double Omega, double omega_max) {
  if (Omega < 1.0) throw std::invalid_argument("covariance_ir: Omega must be >= 1");
  if (cutoff.kind == CutoffFunction::Kind::StrictBump && omega_max < 2.0 * Omega)
    throw std::invalid_argument("covariance_ir: omega_max below the cutoff support");
  const double unit = M_PI / model.beta();
  const auto& E = model.dispersion_eff();
  const auto& h = model.h_values();
  cdouble sum = 0.0;
  for (long m = 1;; m += 2) {
    double omega = unit * m;
    if (omega > omega_max) break;
    double chi = cutoff.lower(omega / Omega);
    if (chi == 0.0) continue;
    cdouble gp = 0.0, gm = 0.0;
    for (int k = 0; k < model.momentum_count(); ++k) {
      if (h[k] == 0.0) continue;
      double ph = model.phase(k, x);
      cdouble eip(std::cos(ph), std::sin(ph));
      gp += h[k] * eip / cdouble(-E[k], omega);
      gm += h[k] * eip / cdouble(-E[k], -omega);
    }
    cdouble e(std::cos(omega * tau), -std::sin(omega * tau));
    sum += chi * (e * gp + std::conj(e) * gm);
  }
  return sum * model.weight() / model.beta();
}

cdouble covariance_uv(double tau, const std::vector<int>& x, const LatticeModel& model,
                      const CutoffFunction& cutoff, double Omega, double omega_max) {
  return covariance_rel(tau, x, model) - covariance_ir(tau, x, model, cutoff, Omega, omega_max);
}

UvKernel::UvKernel(const LatticeModel& model, const CutoffFunction& cutoff, double Omega,
                   double omega_max)
    : model_(model) {
  if (Omega < 1.0) throw std::invalid_argument("UvKernel: Omega must be >= 1");
  if (cutoff.kind == CutoffFunction::Kind::StrictBump && omega_max < 2.0 * Omega)
    throw std::invalid_argument("UvKernel: omega_max below the cutoff support");
  const double unit = M_PI / model.beta();
  int npts = 1;
  strides_.resize(model.d());
  for (int i = 0; i < model.d(); ++i) {
    strides_[i] = npts;
    npts *= model.length();
  }
  const auto& E = model.dispersion_eff();
  const auto& h = model.h_values();
  for (long m = 1;; m += 2) {
    double omega = unit * m;
    if (omega > omega_max) break;
    double chi = cutoff.lower(omega / Omega);
    if (chi == 0.0) continue;
    omegas_.push_back(omega);
    std::vector<cdouble> row(2 * npts, cdouble(0.0));
    for (int w = 0; w < npts; ++w) {
      std::vector<int> x(model.d());
      int rest = w;
      for (int i = 0; i < model.d(); ++i) {
        x[i] = rest % model.length();
        rest /= model.length();
      }
      cdouble gp = 0.0, gm = 0.0;
      for (int k = 0; k < model.momentum_count(); ++k) {
        if (h[k] == 0.0) continue;
        double ph = model.phase(k, x);
        cdouble eip(std::cos(ph), std::sin(ph));
        gp += h[k] * eip / cdouble(-E[k], omega);
        gm += h[k] * eip / cdouble(-E[k], -omega);
      }
      row[2 * w] = chi * gp * model.weight();
      row[2 * w + 1] = chi * gm * model.weight();
    }
    table_.push_back(std::move(row));
  }
}

cdouble UvKernel::operator()(double tau, const std::vector<int>& x) const {
  int flat = 0;
  for (int i = 0; i < model_.d(); ++i) {
    int r = x[i] % model_.length();
    if (r < 0) r += model_.length();
    flat += strides_[i] * r;
  }
  cdouble ir = 0.0;
  for (size_t m = 0; m < omegas_.size(); ++m) {
    cdouble e(std::cos(omegas_[m] * tau), -std::sin(omegas_[m] * tau));
    ir += e * table_[m][2 * flat] + std::conj(e) * table_[m][2 * flat + 1];
  }
  return covariance_rel(tau, x, model_) - ir / model_.beta();
}

GramIrResult gram_constant_ir(const LatticeModel& model, const CutoffFunction& cutoff,
                              double Omega, double omega_max) {
  if (cutoff.kind != CutoffFunction::Kind::SmoothDecay)
    throw std::invalid_argument("gram_constant_ir: needs a power-law-tail cutoff");
  if (model.beta() <= M_PI)
    throw std::invalid_argument("gram_constant_ir: requires beta > pi");
  if (Omega < 1.0) throw std::invalid_argument("gram_constant_ir: Omega must be >= 1");
  const double beta = model.beta();
  const double unit = M_PI / beta;
  if (omega_max < std::max(2.0 * Omega, 2.0 * unit + 1.0))
    throw std::invalid_argument("gram_constant_ir: omega_max too small");
  const auto& E = model.dispersion_eff();
  const auto& h = model.h_values();

  double sum = 0.0;
  for (long m = 1;; m += 2) {
    double omega = unit * m;
    if (omega > omega_max) break;
    double chi = cutoff.lower(omega / Omega);
    if (chi < 1e-300) continue;
    double inner = 0.0;
    for (int k = 0; k < model.momentum_count(); ++k)
      inner += std::abs(h[k]) / std::hypot(omega, E[k]);
    sum += 2.0 * chi * inner * model.weight();  // +-omega give equal terms
  }
  GramIrResult r;
  r.omega_max = omega_max;
  // Tail over |omega| > omega_max: chi_< <= kappa (Omega/omega)^a and
  // 1/|i omega - E| <= 1/omega, frequency sum bounded by an integral.
  double a = cutoff.alpha_exp;
  r.tail = model.h_norm1() * cutoff.kappa * std::pow(Omega, a) / M_PI *
           std::pow(omega_max - 2.0 * unit, -a) / a;
  r.gamma_sq = sum / beta + r.tail;

  double kprime = 10.0 + 2.0 * cutoff.kappa * (1.0 / a + 1.0 / (beta * Omega));
  double log_term = 0.0;
  for (int k = 0; k < model.momentum_count(); ++k) {
    double ae = std::abs(E[k]);
    if (ae <= 1.0) log_term += std::abs(h[k]) * std::log(1.0 / std::max(ae, unit));
  }
  r.rhs_bound = model.h_norm1() * (kprime + 2.0 * std::log(Omega)) + log_term * model.weight();
  return r;
}

DecayConstant decay_constant(const std::function<cdouble(double, const std::vector<int>&)>& kernel,
                             const LatticeModel& model, int k0, int k, double rel_tol) {
  int npts = 1;
  for (int i = 0; i < model.d(); ++i) npts *= model.length();
  std::vector<std::vector<int>> sites(npts);
  std::vector<double> xw(npts);
  for (int w = 0; w < npts; ++w) {
    sites[w].resize(model.d());
    int rest = w;
    for (int i = 0; i < model.d(); ++i) {
      sites[w][i] = rest % model.length();
      rest /= model.length();
    }
    double nx = minimal_image_norm(sites[w], model.length());
    xw[w] = k == 0 ? 1.0 : std::pow(nx, k);
  }
  auto f = [&](double tau) {
    double s = 0.0;
    for (int w = 0; w < npts; ++w) {
      if (xw[w] == 0.0) continue;
      s += std::abs(kernel(tau, sites[w])) * xw[w];
    }
    return s * (k0 == 0 ? 1.0 : std::pow(std::abs(tau), k0));
  };
  const double beta = model.beta();
  auto integrate = [&](int panels) {
    double total = 0.0;
    // split at the jump: [-beta, 0] and [0, beta]
    for (int side = 0; side < 2; ++side) {
      double lo = side == 0 ? -beta : 0.0;
      double hi = side == 0 ? 0.0 : beta;
      double hstep = (hi - lo) / panels;
      for (int p = 0; p < panels; ++p) {
        double mid = lo + (p + 0.5) * hstep;
        double half = 0.5 * hstep;
        for (int g = 0; g < 4; ++g) {
          total += kGlWeight[g] * half * (f(mid - half * kGlNode[g]) + f(mid + half * kGlNode[g]));
        }
      }
    }
    return total;
  };
  DecayConstant out;
  int panels = 4;
  double prev = integrate(panels);
  while (panels < 4096) {
    panels *= 2;
    double cur = integrate(panels);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) {
      out.value = cur;
      out.panels = panels;
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  out.value = prev;
  out.panels = panels;
  out.converged = false;
  return out;
}

double fourier_l1(const LatticeModel& model, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != model.momentum_count())
    throw std::invalid_argument("fourier_l1: size mismatch");
  int npts = model.momentum_count();
  double total = 0.0;
  std::vector<int> x(model.d());
  for (int w = 0; w < npts; ++w) {
    int rest = w;
    for (int i = 0; i < model.d(); ++i) {
      x[i] = rest % model.length();
      rest /= model.length();
    }
    cdouble s = 0.0;
    for (int kk = 0; kk < npts; ++kk) {
      double ph = model.phase(kk, x);
      s += values[kk] * cdouble(std::cos(ph), std::sin(ph));
    }
    total += std::abs(s) * model.weight();
  }
  return total;
}

double u_kernel(double tau, const CutoffFunction& cutoff, double beta, double Omega) {
  const double unit = M_PI / beta;
  long kmax;
  if (cutoff.kind == CutoffFunction::Kind::StrictBump)
    kmax = static_cast<long>(std::ceil(2.0 * Omega / unit)) + 1;
  else
    kmax = static_cast<long>(std::ceil(1000.0 * Omega / unit)) + 1;
  double s = cutoff.lower(0.0);
  for (long m = 1; m <= kmax; ++m) {
    double omega = unit * m;
    double chi = cutoff.lower(omega / Omega);
    if (chi == 0.0 && omega > 2.0 * Omega) break;
    s += 2.0 * chi * std::cos(omega * tau);
  }
  return s / beta;
}

double calibrate_kernel_constant(const CutoffFunction& cutoff, double beta, double Omega) {
  const int ngrid = 20000;
  double sup = 0.0;
  for (int i = 0; i <= ngrid; ++i) {
    double tau = beta * i / ngrid;
    double v = std::abs(u_kernel(tau, cutoff, beta, Omega));
    double env = v * std::pow(1.0 + Omega * tau, 3.0);
    sup = std::max(sup, env);
  }
  return 4.0 * sup / Omega;
}

UvDecayReport uv_decay_check(const LatticeModel& model, const CutoffFunction& cutoff,
                             const std::vector<double>& omegas) {
  if (cutoff.kind != CutoffFunction::Kind::StrictBump)
    throw std::invalid_argument("uv_decay_check: needs the compactly supported cutoff");
  if (omegas.empty()) throw std::invalid_argument("uv_decay_check: empty Omega list");
  for (double om : omegas) {
    if (om < 1.0) throw std::invalid_argument("uv_decay_check: Omega must be >= 1");
    if (om <= model.dispersion_sup())
      throw std::invalid_argument("uv_decay_check: Omega must exceed the dispersion sup norm");
  }
  UvDecayReport rep;
  // The envelope constant must work uniformly over the sweep, so take the
  // worst calibration across the requested Omegas.
  for (double om : omegas)
    rep.K = std::max(rep.K, calibrate_kernel_constant(cutoff, model.beta(), om));
  rep.F_l1 = fourier_l1(model, model.dispersion_eff());
  rep.g_l1 = fourier_l1(model, model.h_values());
  for (double om : omegas) {
    UvDecayPoint pt;
    pt.Omega = om;
    UvKernel uvk(model, cutoff, om, 2.0 * om);
    pt.alpha = decay_constant([&uvk](double t, const std::vector<int>& x) { return uvk(t, x); },
                              model, 0, 0)
                   .value;
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      double tau = model.beta() * i / 2000.0;
      double env = std::abs(u_kernel(tau, cutoff, model.beta(), om)) *
                   std::pow(1.0 + om * tau, 3.0) / (0.25 * rep.K * om);
      worst = std::max(worst, env);
    }
    pt.envelope_check = worst;
    pt.bound_applicable = rep.K * rep.F_l1 < om / 4.0;
    pt.bound = 2.0 * rep.K / om * rep.g_l1;
    pt.bound_ok = !pt.bound_applicable || pt.alpha <= pt.bound * (1.0 + 1e-9);
    rep.points.push_back(pt);
  }
  for (size_t i = 0; i + 1 < rep.points.size(); ++i)
    rep.halving_ratios.push_back(rep.points[i + 1].alpha / rep.points[i].alpha);
  return rep;
}

SectorProbeResult sector_scaling_probe(
    int d, int length, double beta,
    const std::function<double(const std::vector<double>&)>& dispersion,
    const std::vector<double>& eps_list) {
  SectorProbeResult r;
  for (double eps : eps_list) {
    LatticeModel model(d, length, beta, dispersion, shell_scaling(dispersion, eps));
    int support = 0;
    for (double hv : model.h_values())
      if (hv > 0.0) ++support;
    if (support < 4)
      throw std::invalid_argument(
          "sector_scaling_probe: lattice too coarse to resolve the shell");
    auto kern = [&model](double t, const std::vector<int>& x) {
      return covariance_rel(t, x, model);
    };
    r.eps.push_back(eps);
    r.alpha.push_back(decay_constant(kern, model, 0, 0).value);
  }
  std::vector<double> lx, ly;
  for (size_t i = 0; i < r.eps.size(); ++i) {
    lx.push_back(std::log(r.eps[i]));
    ly.push_back(std::log(r.alpha[i]));
  }
  r.slope = fit_slope(lx, ly);
  return r;
}

}  // namespace fermidet
