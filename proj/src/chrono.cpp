#include "fermidet/chrono.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fermidet {

std::pair<std::vector<OrderedLabel>, std::vector<OrderedLabel>> extend_order(
    const std::vector<double>& phi_labels, const std::vector<double>& phi_prime_labels,
    bool strict) {
  // Ties between phi' and phi are broken by the mu component: for the
  // strict indicator phi'(k) is made smaller, for the weak one bigger.
  // The nu component separates repeats within each family.
  const int mu_prime = strict ? 0 : 1;
  const int mu_plain = strict ? 1 : 0;
  std::map<double, int> count_plain, count_prime;
  std::vector<OrderedLabel> j_set, j_prime_set;
  j_set.reserve(phi_labels.size());
  j_prime_set.reserve(phi_prime_labels.size());
  for (double t : phi_labels) j_set.push_back({t, mu_plain, ++count_plain[t]});
  for (double t : phi_prime_labels) j_prime_set.push_back({t, mu_prime, ++count_prime[t]});
  return {j_set, j_prime_set};
}

int rho_sign(const std::vector<OrderedLabel>& j_set, const std::vector<OrderedLabel>& j_prime_set) {
  int crossings = 0;
  for (const auto& j : j_set) {
    for (const auto& jp : j_prime_set) {
      if (j == jp) throw std::invalid_argument("rho_sign: label sets overlap");
      if (jp < j) ++crossings;
    }
  }
  return (crossings & 1) ? -1 : 1;
}

namespace {

/// Parity of the permutation that ascending-sorts the labels.
int sort_sign(const std::vector<OrderedLabel>& labels) {
  int inversions = 0;
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      if (labels[j] < labels[i]) ++inversions;
  return (inversions & 1) ? -1 : 1;
}

Multivector apply_op(const ChronoOperator& op, const Multivector& m) {
  return op.kind == OpKind::Wedge ? wedge_apply(op.vec, m) : contract_apply(op.vec, m);
}

}  // namespace

Multivector chrono_product_apply(const std::vector<ChronoOperator>& ops, const Multivector& m) {
  std::vector<OrderedLabel> labels;
  labels.reserve(ops.size());
  for (const auto& op : ops) labels.push_back(op.label);
  {
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("chrono_product_apply: duplicate labels");
  }
  std::vector<size_t> order(ops.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return labels[a] < labels[b]; });
  Multivector out = m;
  for (auto it = order.rbegin(); it != order.rend(); ++it) out = apply_op(ops[*it], out);
  return out * static_cast<double>(sort_sign(labels));
}

cdouble chrono_det(const std::vector<std::vector<cdouble>>& alphas,
                   const std::vector<std::vector<cdouble>>& vs,
                   const std::vector<OrderedLabel>& j_set,
                   const std::vector<OrderedLabel>& j_prime_set) {
  const size_t n = alphas.size();
  if (vs.size() != n || j_set.size() != n || j_prime_set.size() != n)
    throw std::invalid_argument("chrono_det: length mismatch");
  if (n == 0) return 1.0;
  const int dim = static_cast<int>(alphas[0].size());
  if (static_cast<int>(n) > dim) throw std::invalid_argument("chrono_det: n exceeds dimension");
  if (!std::is_sorted(j_set.begin(), j_set.end()) ||
      !std::is_sorted(j_prime_set.begin(), j_prime_set.end()))
    throw std::invalid_argument("chrono_det: label sets must be sorted ascending");
  for (const auto& j : j_set)
    for (const auto& jp : j_prime_set)
      if (j == jp) throw std::invalid_argument("chrono_det: label sets overlap");

  std::vector<ChronoOperator> ops;
  ops.reserve(2 * n);
  for (size_t i = 0; i < n; ++i) ops.push_back({OpKind::Contract, vs[i], j_set[i]});
  for (size_t i = 0; i < n; ++i) ops.push_back({OpKind::Wedge, alphas[i], j_prime_set[i]});
  Multivector result = chrono_product_apply(ops, Multivector::unit(dim));
  double prefactor = ((n * (n - 1) / 2) & 1) ? -1.0 : 1.0;
  return prefactor * result.scalar_part();
}

cdouble masked_det_chrono(const std::vector<std::vector<cdouble>>& alphas,
                          const std::vector<std::vector<cdouble>>& vs,
                          const std::vector<double>& phi, const std::vector<double>& phi_prime,
                          bool strict) {
  auto [j_set, j_prime_set] = extend_order(phi, phi_prime, strict);
  const size_t n = alphas.size();
  std::vector<size_t> col(n), row(n);
  std::iota(col.begin(), col.end(), 0);
  std::iota(row.begin(), row.end(), 0);
  std::sort(col.begin(), col.end(), [&](size_t a, size_t b) { return j_set[a] < j_set[b]; });
  std::sort(row.begin(), row.end(),
            [&](size_t a, size_t b) { return j_prime_set[a] < j_prime_set[b]; });
  double sign = static_cast<double>(sort_sign(j_set) * sort_sign(j_prime_set));
  std::vector<std::vector<cdouble>> alphas_s(n), vs_s(n);
  std::vector<OrderedLabel> j_s(n), jp_s(n);
  for (size_t i = 0; i < n; ++i) {
    vs_s[i] = vs[col[i]];
    j_s[i] = j_set[col[i]];
    alphas_s[i] = alphas[row[i]];
    jp_s[i] = j_prime_set[row[i]];
  }
  return sign * chrono_det(alphas_s, vs_s, j_s, jp_s);
}

cdouble masked_det_lu(const std::vector<std::vector<cdouble>>& alphas,
                      const std::vector<std::vector<cdouble>>& vs,
                      const std::vector<double>& phi, const std::vector<double>& phi_prime,
                      bool strict) {
  const int n = static_cast<int>(alphas.size());
  CMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      bool on = strict ? (phi_prime[k] > phi[l]) : (phi_prime[k] >= phi[l]);
      m(k, l) = on ? bilinear(alphas[k], vs[l]) : cdouble(0.0);
    }
  }
  return lu_det(m);
}

}  // namespace fermidet
