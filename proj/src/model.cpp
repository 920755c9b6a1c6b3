#include "fermidet/model.hpp"

#include <cmath>
#include <stdexcept>

namespace fermidet {

LatticeModel::LatticeModel(int d, int length, double beta,
                           std::function<double(const std::vector<double>&)> dispersion,
                           std::function<double(const std::vector<double>&)> scaling_h,
                           double epsilon_reg)
    : d_(d), length_(length), beta_(beta), epsilon_reg_(epsilon_reg) {
  if (d < 1 || d > 3) throw std::invalid_argument("LatticeModel: d must be 1..3");
  if (length < 1) throw std::invalid_argument("LatticeModel: L must be positive");
  if (beta <= 0.0) throw std::invalid_argument("LatticeModel: beta must be positive");

  int npoints = 1;
  for (int i = 0; i < d; ++i) npoints *= length;
  weight_ = 1.0 / npoints;
  momenta_.reserve(npoints);
  energy_.reserve(npoints);
  h_.reserve(npoints);
  const double step = 2.0 * M_PI / length;
  for (int idx = 0; idx < npoints; ++idx) {
    std::vector<double> p(d);
    int rest = idx;
    for (int i = 0; i < d; ++i) {
      p[i] = step * (rest % length);
      rest /= length;
    }
    momenta_.push_back(p);
    energy_.push_back(dispersion(p));
    h_.push_back(scaling_h(p));
  }

  double min_abs = std::abs(energy_[0]);
  energy_sup_ = 0.0;
  h_norm1_ = 0.0;
  for (int k = 0; k < npoints; ++k) {
    min_abs = std::min(min_abs, std::abs(energy_[k]));
    energy_sup_ = std::max(energy_sup_, std::abs(energy_[k]));
    h_norm1_ += weight_ * std::abs(h_[k]);
  }
  // Zero-dispersion handling: raise a vanishing Fermi level by a default
  // eps so the Gram construction's zero-measure condition holds.
  if (epsilon_reg_ == 0.0 && min_abs < 1e-6) {
    epsilon_reg_ = 1e-6;
    regularization_applied_ = true;
  }
  energy_eff_ = energy_;
  if (epsilon_reg_ > 0.0) {
    for (auto& e : energy_eff_)
      if (std::abs(e) <= epsilon_reg_ / 2.0) e = epsilon_reg_ / 2.0;
  }
  min_abs_energy_eff_ = std::abs(energy_eff_[0]);
  for (double e : energy_eff_) min_abs_energy_eff_ = std::min(min_abs_energy_eff_, std::abs(e));
}

double LatticeModel::phase(int momentum_index, const std::vector<int>& x) const {
  const auto& p = momenta_[momentum_index];
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("phase: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < d_; ++i) s += p[i] * x[i];
  return s;
}

std::vector<int> LatticeModel::wrap(const std::vector<int>& x) const {
  std::vector<int> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    int v = x[i] % length_;
    if (v < 0) v += length_;
    out[i] = v;
  }
  return out;
}

std::function<double(const std::vector<double>&)> cosine_dispersion(double mu) {
  return [mu](const std::vector<double>& p) {
    double e = -mu;
    for (double pi : p) e += std::cos(pi);
    return e;
  };
}

std::function<double(const std::vector<double>&)> constant_dispersion(double e0) {
  return [e0](const std::vector<double>&) { return e0; };
}

std::function<double(const std::vector<double>&)> unit_scaling() {
  return [](const std::vector<double>&) { return 1.0; };
}

std::function<double(const std::vector<double>&)> shell_scaling(
    std::function<double(const std::vector<double>&)> dispersion, double eps) {
  // f(x) = exp(-1/((x^2-1)(4-x^2))) on 1 < |x| < 2, zero outside: smooth,
  // compactly supported on the shell 1 <= |x| <= 2.
  return [dispersion, eps](const std::vector<double>& p) {
    double x = dispersion(p) / eps;
    double x2 = x * x;
    if (x2 <= 1.0 || x2 >= 4.0) return 0.0;
    return std::exp(-1.0 / ((x2 - 1.0) * (4.0 - x2)));
  };
}

LatticeModel metal_model_1d(int length, double beta) {
  return LatticeModel(1, length, beta, cosine_dispersion(0.3), unit_scaling());
}

LatticeModel insulator_model_1d(int length, double beta) {
  return LatticeModel(1, length, beta, cosine_dispersion(2.5), unit_scaling());
}

LatticeModel metal_model_2d(int length, double beta) {
  return LatticeModel(2, length, beta, cosine_dispersion(0.3), unit_scaling());
}

}  // namespace fermidet
