#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fermidet/linalg.hpp"

namespace fermidet {

/// Point of [0,beta) x (Z/L)^d.
struct SpaceTimePoint {
  double tau = 0.0;
  std::vector<int> x;
};

/// Finite-volume discrete torus model: dimension d, side L, inverse
/// temperature beta, dispersion E(p) and scaling function h(p) tabulated on
/// the momentum torus (2*pi/L){0..L-1}^d with normalized counting measure.
class LatticeModel {
public:
  LatticeModel(int d, int length, double beta,
               std::function<double(const std::vector<double>&)> dispersion,
               std::function<double(const std::vector<double>&)> scaling_h,
               double epsilon_reg = 0.0);

  int d() const { return d_; }
  int length() const { return length_; }
  double beta() const { return beta_; }
  double epsilon_reg() const { return epsilon_reg_; }
  bool regularization_applied() const { return regularization_applied_; }

  /// L^{-d}, the counting-measure weight of one momentum point.
  double weight() const { return weight_; }
  int momentum_count() const { return static_cast<int>(momenta_.size()); }
  const std::vector<std::vector<double>>& momenta() const { return momenta_; }
  /// Raw dispersion values E(p).
  const std::vector<double>& dispersion_values() const { return energy_; }
  /// Effective dispersion E_eps(p): raised to eps/2 on |E| <= eps/2.
  const std::vector<double>& dispersion_eff() const { return energy_eff_; }
  const std::vector<double>& h_values() const { return h_; }

  /// L^{-d} sum_p |h(p)|.
  double h_norm1() const { return h_norm1_; }
  double dispersion_sup() const { return energy_sup_; }
  double min_abs_dispersion_eff() const { return min_abs_energy_eff_; }

  /// p . x for momentum index k and integer lattice vector x.
  double phase(int momentum_index, const std::vector<int>& x) const;

  /// Reduces an integer displacement componentwise into {0..L-1}.
  std::vector<int> wrap(const std::vector<int>& x) const;

private:
  int d_, length_;
  double beta_, epsilon_reg_;
  bool regularization_applied_ = false;
  double weight_, h_norm1_, energy_sup_, min_abs_energy_eff_;
  std::vector<std::vector<double>> momenta_;
  std::vector<double> energy_, energy_eff_, h_;
};

/// d-dimensional tight-binding dispersion sum_i cos(p_i) - mu.
std::function<double(const std::vector<double>&)> cosine_dispersion(double mu);
std::function<double(const std::vector<double>&)> constant_dispersion(double e0);
std::function<double(const std::vector<double>&)> unit_scaling();

/// Smooth shell scaling h(p) = f(E(p)/eps) with f supported on 1 <= |x| <= 2.
std::function<double(const std::vector<double>&)> shell_scaling(
    std::function<double(const std::vector<double>&)> dispersion, double eps);

/// Stock desk-scale models.
LatticeModel metal_model_1d(int length, double beta);
LatticeModel insulator_model_1d(int length, double beta);
LatticeModel metal_model_2d(int length, double beta);

}  // namespace fermidet
