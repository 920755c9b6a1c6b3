#include "fermidet/effaction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fermidet/wick.hpp"

namespace fermidet {

namespace {

// Ascending sort; returns the permutation parity, or 0 for a repeated index.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i) {
    for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
      std::swap(idx[j], idx[j - 1]);
      sign = -sign;
    }
  }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Interaction::Interaction(int sites) : sites_(sites) {
  if (sites < 1) throw std::invalid_argument("Interaction: needs at least one site");
}

void Interaction::add_term(const std::vector<int>& barred, const std::vector<int>& unbarred,
                           cdouble value) {
  for (int b : barred)
    if (b < 0 || b >= sites_) throw std::out_of_range("Interaction::add_term: index");
  for (int u : unbarred)
    if (u < 0 || u >= sites_) throw std::out_of_range("Interaction::add_term: index");
  if (barred.empty() && unbarred.empty())
    throw std::invalid_argument("Interaction::add_term: constant term not representable");
  std::vector<int> b = barred, u = unbarred;
  int sb = sort_sign(b), su = sort_sign(u);
  if (sb == 0 || su == 0) return;
  // The monomial equals mbar! m! times the canonical kernel value under the
  // tuple-sum representation, so the stored representative accumulates the
  // correspondingly scaled amount.
  cdouble inc = value * static_cast<double>(sb * su) /
                (factorial(static_cast<int>(b.size())) * factorial(static_cast<int>(u.size())));
  Key key{std::move(b), std::move(u)};
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (inc != cdouble(0.0)) entries_[std::move(key)] = inc;
  } else {
    it->second += inc;
    if (it->second == cdouble(0.0)) entries_.erase(it);
  }
}

cdouble Interaction::kernel(const std::vector<int>& barred,
                            const std::vector<int>& unbarred) const {
  std::vector<int> b = barred, u = unbarred;
  int sb = sort_sign(b), su = sort_sign(u);
  if (sb == 0 || su == 0) return 0.0;
  auto it = entries_.find(Key{b, u});
  if (it == entries_.end()) return 0.0;
  return static_cast<double>(sb * su) * it->second;
}

Interaction& Interaction::operator+=(const Interaction& other) {
  if (sites_ != other.sites_) throw std::invalid_argument("Interaction: site-count mismatch");
  for (const auto& [key, val] : other.entries_) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (val != cdouble(0.0)) entries_[key] = val;
    } else {
      it->second += val;
      if (it->second == cdouble(0.0)) entries_.erase(it);
    }
  }
  return *this;
}

Interaction& Interaction::operator-=(const Interaction& other) {
  Interaction neg = other * cdouble(-1.0);
  return *this += neg;
}

Interaction& Interaction::operator*=(cdouble scalar) {
  if (scalar == cdouble(0.0)) {
    entries_.clear();
    return *this;
  }
  for (auto& [key, val] : entries_) val *= scalar;
  return *this;
}

Interaction Interaction::operator*(cdouble scalar) const {
  Interaction out = *this;
  out *= scalar;
  return out;
}

Interaction Interaction::operator-(const Interaction& other) const {
  Interaction out = *this;
  out -= other;
  return out;
}

void Interaction::prune(double eps) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (std::abs(it->second) <= eps)
      it = entries_.erase(it);
    else
      ++it;
  }
}

double interaction_distance(const Interaction& a, const Interaction& b) {
  Interaction diff = a - b;
  double m = 0.0;
  for (const auto& [key, val] : diff.entries()) m = std::max(m, std::abs(val));
  return m;
}

double kernel_norm(const Interaction& v, double h) {
  if (h <= 0.0) throw std::invalid_argument("kernel_norm: h must be positive");
  const int sites = v.sites();
  // Group canonical entries by block (mbar, m).
  std::map<std::pair<int, int>, std::vector<const std::pair<const Interaction::Key, cdouble>*>>
      blocks;
  for (const auto& e : v.entries())
    blocks[{static_cast<int>(e.first.first.size()), static_cast<int>(e.first.second.size())}]
        .push_back(&e);
  double total = 0.0;
  for (const auto& [shape, list] : blocks) {
    auto [mbar, m] = shape;
    int slots = mbar + m;
    // Pinned-slot sums: for each slot position and site value, the sum of
    // |v| over all full tuples with that slot fixed.  A canonical entry
    // fans out over mbar! m! tuple orderings; under pinning, the count of
    // orderings placing a given member index at a given slot is
    // (mbar-1)! m! for barred slots and mbar! (m-1)! for unbarred ones.
    std::vector<std::vector<double>> pinned(slots, std::vector<double>(sites, 0.0));
    for (const auto* e : list) {
      double av = std::abs(e->second);
      const auto& b = e->first.first;
      const auto& u = e->first.second;
      double fan_b = factorial(std::max(0, mbar - 1)) * factorial(m);
      double fan_u = factorial(mbar) * factorial(std::max(0, m - 1));
      for (int s = 0; s < mbar; ++s)
        for (int x : b) pinned[s][x] += av * fan_b;
      for (int s = 0; s < m; ++s)
        for (int x : u) pinned[mbar + s][x] += av * fan_u;
    }
    double block_norm = 0.0;
    for (int s = 0; s < slots; ++s)
      for (int x = 0; x < sites; ++x) block_norm = std::max(block_norm, pinned[s][x]);
    total += block_norm * std::pow(h, slots);
  }
  return total;
}

Multivector interaction_to_multivector(const Interaction& v, int dim, int barred_offset,
                                       int unbarred_offset) {
  Multivector out(dim);
  for (const auto& [key, val] : v.entries()) {
    const auto& b = key.first;
    const auto& u = key.second;
    cdouble coeff = val * factorial(static_cast<int>(b.size())) *
                    factorial(static_cast<int>(u.size()));
    Multivector term = Multivector::unit(dim);
    for (int x : b) {
      std::vector<cdouble> g(dim, 0.0);
      g[barred_offset + x] = 1.0;
      term = term.wedge(Multivector::vector(g));
    }
    for (int x : u) {
      std::vector<cdouble> g(dim, 0.0);
      g[unbarred_offset + x] = 1.0;
      term = term.wedge(Multivector::vector(g));
    }
    out += term * coeff;
  }
  return out;
}

Multivector interaction_to_multivector_shifted(const Interaction& v, int dim,
                                               int internal_barred, int internal_unbarred,
                                               int external_barred, int external_unbarred) {
  Multivector out(dim);
  for (const auto& [key, val] : v.entries()) {
    const auto& b = key.first;
    const auto& u = key.second;
    cdouble coeff = val * factorial(static_cast<int>(b.size())) *
                    factorial(static_cast<int>(u.size()));
    Multivector term = Multivector::unit(dim);
    for (int x : b) {
      std::vector<cdouble> g(dim, 0.0);
      g[internal_barred + x] = 1.0;
      g[external_barred + x] = 1.0;
      term = term.wedge(Multivector::vector(g));
    }
    for (int x : u) {
      std::vector<cdouble> g(dim, 0.0);
      g[internal_unbarred + x] = 1.0;
      g[external_unbarred + x] = 1.0;
      term = term.wedge(Multivector::vector(g));
    }
    out += term * coeff;
  }
  return out;
}

namespace {

// Integrates out the internal generators (the low 2m bits) against the
// covariance; returns an element of the 2m-dimensional external algebra.
// Internal bits sit below external bits, so the basis split carries no sign.
Multivector integrate_internal(const Multivector& z, int m, const CMatrix& covariance) {
  Multivector out(2 * m);
  const std::uint32_t internal_mask = (1u << (2 * m)) - 1;
  for (const auto& [mask, coeff] : z.terms()) {
    std::uint32_t im = mask & internal_mask;
    std::uint32_t em = mask >> (2 * m);
    std::vector<FieldIndex> mono;
    for (int b = 0; b < 2 * m; ++b) {
      if (!(im & (1u << b))) continue;
      if (b < m)
        mono.push_back({true, b});
      else
        mono.push_back({false, b - m});
    }
    cdouble g = gaussian_integral(covariance, mono);
    if (g != cdouble(0.0)) out.add(em, coeff * g);
  }
  return out;
}

Multivector exp_wedge(const Multivector& v, int dim) {
  Multivector out = Multivector::unit(dim);
  Multivector term = Multivector::unit(dim);
  for (int k = 1; k <= dim; ++k) {
    term = term.wedge(v) * (1.0 / k);
    if (term.terms().empty()) break;
    out += term;
  }
  return out;
}

Interaction multivector_to_interaction(const Multivector& w, int m) {
  Interaction out(m);
  for (const auto& [mask, coeff] : w.terms()) {
    if (mask == 0) continue;  // additive constant dropped
    std::vector<int> b, u;
    for (int bit = 0; bit < m; ++bit)
      if (mask & (1u << bit)) b.push_back(bit);
    for (int bit = m; bit < 2 * m; ++bit)
      if (mask & (1u << bit)) u.push_back(bit - m);
    out.add_term(b, u, coeff);
  }
  return out;
}

void check_budget(const Interaction& v, const CMatrix& covariance) {
  const int m = v.sites();
  if (4 * m > Multivector::kMaxDim)
    throw std::invalid_argument("effective action: generator budget exceeded");
  if (covariance.rows() != m || covariance.cols() != m)
    throw std::invalid_argument("effective action: covariance size mismatch");
}

}  // namespace

Interaction effective_action_exact(const Interaction& v, const CMatrix& covariance,
                                   double lambda) {
  check_budget(v, covariance);
  const int m = v.sites();
  const int dim = 4 * m;
  Multivector mv =
      interaction_to_multivector_shifted(v * cdouble(lambda), dim, 0, m, 2 * m, 3 * m);
  Multivector z = integrate_internal(exp_wedge(mv, dim), m, covariance);
  cdouble z0 = z.scalar_part();
  if (std::abs(z0) < 1e-300)
    throw std::runtime_error("effective action: partition scalar vanishes, log undefined");
  Multivector n = z * (1.0 / z0) - Multivector::unit(2 * m);
  Multivector w(2 * m);
  Multivector power = Multivector::unit(2 * m);
  for (int k = 1; k <= 2 * m; ++k) {
    power = power.wedge(n);
    if (power.terms().empty()) break;
    double c = (k % 2 == 1 ? 1.0 : -1.0) / k;
    w += power * c;
  }
  return multivector_to_interaction(w, m);
}

std::vector<Interaction> effective_action_series(const Interaction& v, const CMatrix& covariance,
                                                 int pmax) {
  check_budget(v, covariance);
  for (const auto& [key, val] : v.entries())
    if ((key.first.size() + key.second.size()) % 2 != 0)
      throw std::invalid_argument("effective_action_series: interaction must be even");
  const int m = v.sites();
  const int dim = 4 * m;
  Multivector mv = interaction_to_multivector_shifted(v, dim, 0, m, 2 * m, 3 * m);
  // z_k = Gaussian integral of V^k / k! over the internal fields.
  std::vector<Multivector> z;
  z.push_back(Multivector::unit(2 * m));
  Multivector term = Multivector::unit(dim);
  for (int k = 1; k <= pmax; ++k) {
    term = term.wedge(mv) * (1.0 / k);
    z.push_back(integrate_internal(term, m, covariance));
  }
  // Series logarithm: k w_k = k z_k - sum_{j<k} j w_j z_{k-j}; valid since
  // even elements commute.
  std::vector<Multivector> w;
  w.push_back(Multivector(2 * m));  // w_0 = 0 (z_0 = 1)
  for (int k = 1; k <= pmax; ++k) {
    Multivector acc = z[k] * static_cast<double>(k);
    for (int j = 1; j < k; ++j) acc -= w[j].wedge(z[k - j]) * static_cast<double>(j);
    w.push_back(acc * (1.0 / k));
  }
  std::vector<Interaction> out;
  for (int k = 1; k <= pmax; ++k) out.push_back(multivector_to_interaction(w[k], m));
  return out;
}

double abstract_alpha(const CMatrix& covariance) {
  double best = 0.0;
  for (int i = 0; i < covariance.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < covariance.cols(); ++j) row += std::abs(covariance(i, j));
    best = std::max(best, row);
  }
  for (int j = 0; j < covariance.cols(); ++j) {
    double col = 0.0;
    for (int i = 0; i < covariance.rows(); ++i) col += std::abs(covariance(i, j));
    best = std::max(best, col);
  }
  return best;
}

double abstract_delta(const CMatrix& covariance) {
  double best = 0.0;
  for (int j = 0; j < covariance.cols(); ++j) {
    double col = 0.0;
    for (int i = 0; i < covariance.rows(); ++i) col += std::norm(covariance(i, j));
    best = std::max(best, std::sqrt(col));
  }
  return std::sqrt(best);
}

KonvReport konv_remainder_check(const Interaction& v, const CMatrix& covariance, double h, int P,
                                const std::vector<double>& lambdas, double alpha_C,
                                double delta_C) {
  if (P < 1) throw std::invalid_argument("konv_remainder_check: P must be >= 1");
  if (delta_C <= 0.0) throw std::invalid_argument("konv_remainder_check: delta_C must be positive");
  KonvReport rep;
  rep.alpha_C = alpha_C;
  rep.delta_C = delta_C;
  rep.omega_C = 2.0 * alpha_C / (delta_C * delta_C);
  rep.h = h;
  rep.h_prime = h + rep.omega_C;
  rep.P = P;
  std::vector<Interaction> w = effective_action_series(v, covariance, P);
  for (double lambda : lambdas) {
    KonvPoint pt;
    pt.lambda = lambda;
    Interaction scaled = v * cdouble(lambda);
    pt.interaction_norm = kernel_norm(scaled, rep.h_prime);
    double x = rep.omega_C * pt.interaction_norm;
    pt.in_domain = x < 1.0;
    Interaction exact = effective_action_exact(v, covariance, lambda);
    Interaction partial(v.sites());
    double lp = 1.0;
    for (int p = 1; p <= P; ++p) {
      lp *= lambda;
      partial += w[p - 1] * cdouble(lp);
    }
    Interaction diff = exact - partial;
    diff.prune(1e-13 * std::max(1.0, interaction_distance(exact, Interaction(v.sites()))));
    pt.remainder = diff.entries().empty() ? 0.0 : kernel_norm(diff, h);
    pt.rhs = pt.in_domain
                 ? std::pow(rep.omega_C, P) * std::pow(pt.interaction_norm, P + 1) / (1.0 - x)
                 : 0.0;
    pt.pass = !pt.in_domain || pt.remainder <= pt.rhs * (1.0 + 1e-9) + 1e-14;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace fermidet
