#include "fermidet/multivector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace fermidet {

Multivector::Multivector(int dim, double prune_eps) : dim_(dim), prune_eps_(prune_eps) {
  if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("Multivector: dimension must be in [0,16]");
}

Multivector Multivector::unit(int dim) {
  Multivector m(dim);
  m.terms_[0] = 1.0;
  return m;
}

Multivector Multivector::vector(const std::vector<cdouble>& coeffs) {
  Multivector m(static_cast<int>(coeffs.size()));
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != cdouble(0.0)) m.terms_[1u << i] = coeffs[i];
  }
  return m;
}

cdouble Multivector::coeff(std::uint32_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? cdouble(0.0) : it->second;
}

void Multivector::add(std::uint32_t mask, cdouble value) {
  if (mask >= (1u << dim_)) throw std::invalid_argument("Multivector::add: mask out of range");
  auto it = terms_.find(mask);
  if (it == terms_.end()) {
    if (value != cdouble(0.0)) terms_[mask] = value;
  } else {
    it->second += value;
    if (it->second == cdouble(0.0)) terms_.erase(it);
  }
}

Multivector Multivector::degree_component(int k) const {
  Multivector out(dim_, prune_eps_);
  for (const auto& [mask, c] : terms_) {
    if (std::popcount(mask) == k) out.terms_[mask] = c;
  }
  return out;
}

double Multivector::norm() const {
  double s = 0.0;
  for (const auto& [mask, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

Multivector& Multivector::operator+=(const Multivector& other) {
  if (dim_ != other.dim_) throw std::invalid_argument("Multivector: dimension mismatch");
  for (const auto& [mask, c] : other.terms_) add(mask, c);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  if (dim_ != other.dim_) throw std::invalid_argument("Multivector: dimension mismatch");
  for (const auto& [mask, c] : other.terms_) add(mask, -c);
  return *this;
}

Multivector& Multivector::operator*=(cdouble scalar) {
  if (scalar == cdouble(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [mask, c] : terms_) c *= scalar;
  return *this;
}

Multivector Multivector::operator+(const Multivector& other) const {
  Multivector out = *this;
  out += other;
  return out;
}

Multivector Multivector::operator-(const Multivector& other) const {
  Multivector out = *this;
  out -= other;
  return out;
}

Multivector Multivector::operator*(cdouble scalar) const {
  Multivector out = *this;
  out *= scalar;
  return out;
}

int merge_sign(std::uint32_t s_mask, std::uint32_t t_mask) {
  // Count pairs (s in S, t in T) with s > t.
  int inversions = 0;
  std::uint32_t t = t_mask;
  while (t) {
    int bit = std::countr_zero(t);
    inversions += std::popcount(s_mask >> (bit + 1));
    t &= t - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

Multivector Multivector::wedge(const Multivector& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("Multivector::wedge: dimension mismatch");
  Multivector out(dim_, prune_eps_);
  for (const auto& [s, a] : terms_) {
    for (const auto& [t, b] : other.terms_) {
      if (s & t) continue;
      out.add(s | t, static_cast<double>(merge_sign(s, t)) * a * b);
    }
  }
  out.prune();
  return out;
}

void Multivector::prune() {
  if (prune_eps_ <= 0.0) return;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= prune_eps_)
      it = terms_.erase(it);
    else
      ++it;
  }
}

cdouble inner_product(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  cdouble s = 0.0;
  for (const auto& [mask, c] : a.terms()) {
    cdouble d = b.coeff(mask);
    if (d != cdouble(0.0)) s += std::conj(c) * d;
  }
  return s;
}

Multivector wedge_apply(const std::vector<cdouble>& alpha, const Multivector& m) {
  if (static_cast<int>(alpha.size()) != m.dim())
    throw std::invalid_argument("wedge_apply: dimension mismatch");
  Multivector out(m.dim(), m.prune_eps());
  for (int i = 0; i < m.dim(); ++i) {
    if (alpha[i] == cdouble(0.0)) continue;
    const std::uint32_t gen = 1u << i;
    const std::uint32_t below = gen - 1;
    for (const auto& [mask, c] : m.terms()) {
      if (mask & gen) continue;
      double sign = (std::popcount(mask & below) & 1) ? -1.0 : 1.0;
      out.add(mask | gen, sign * alpha[i] * c);
    }
  }
  out.prune();
  return out;
}

Multivector contract_apply(const std::vector<cdouble>& u, const Multivector& m) {
  if (static_cast<int>(u.size()) != m.dim())
    throw std::invalid_argument("contract_apply: dimension mismatch");
  Multivector out(m.dim(), m.prune_eps());
  for (int i = 0; i < m.dim(); ++i) {
    if (u[i] == cdouble(0.0)) continue;
    const std::uint32_t gen = 1u << i;
    const std::uint32_t below = gen - 1;
    for (const auto& [mask, c] : m.terms()) {
      if (!(mask & gen)) continue;
      double sign = (std::popcount(mask & below) & 1) ? -1.0 : 1.0;
      out.add(mask & ~gen, sign * u[i] * c);
    }
  }
  out.prune();
  return out;
}

double car_defect(const std::vector<cdouble>& alpha, const std::vector<cdouble>& u,
                  const Multivector& m) {
  Multivector lhs = wedge_apply(alpha, contract_apply(u, m));
  lhs += contract_apply(u, wedge_apply(alpha, m));
  lhs -= m * bilinear(alpha, u);
  return lhs.norm();
}

cdouble duality_det(const std::vector<std::vector<cdouble>>& alphas,
                    const std::vector<std::vector<cdouble>>& vs) {
  if (alphas.size() != vs.size()) throw std::invalid_argument("duality_det: length mismatch");
  if (alphas.empty()) return 1.0;
  const int n = static_cast<int>(alphas[0].size());
  // <alpha_1^...^alpha_k, v_1^...^v_k> = sum_S a_S v_S in the subset basis.
  Multivector a = Multivector::unit(n);
  Multivector v = Multivector::unit(n);
  for (size_t i = 0; i < alphas.size(); ++i) {
    a = a.wedge(Multivector::vector(alphas[i]));
    v = v.wedge(Multivector::vector(vs[i]));
  }
  cdouble s = 0.0;
  for (const auto& [mask, c] : a.terms()) s += c * v.coeff(mask);
  return s;
}

}  // namespace fermidet
