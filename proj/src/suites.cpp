#include "fermidet/suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fermidet/chrono.hpp"
#include "fermidet/covariance.hpp"
#include "fermidet/detbound.hpp"
#include "fermidet/effaction.hpp"
#include "fermidet/gram.hpp"
#include "fermidet/multivector.hpp"
#include "fermidet/rng.hpp"
#include "fermidet/scales.hpp"

namespace fermidet::suites {

using nlohmann::ordered_json;

namespace {

constexpr const char* kArtifact = "fermidet 1.0.0";

ordered_json assertion(const std::string& name, double observed, double bound, bool pass) {
  ordered_json a;
  a["name"] = name;
  a["observed"] = observed;
  a["bound"] = bound;
  a["margin"] = bound - observed;
  a["pass"] = pass;
  return a;
}

ordered_json assertion_le(const std::string& name, double observed, double bound,
                          double rel_slack = 0.0) {
  return assertion(name, observed, bound, observed <= bound * (1.0 + rel_slack) + 1e-300);
}

ordered_json assertion_ge(const std::string& name, double observed, double bound) {
  return assertion(name, observed, bound, observed >= bound);
}

ordered_json report_head(const std::string& suite, const Options& opt) {
  ordered_json r;
  r["artifact"] = kArtifact;
  r["suite"] = suite;
  r["seed"] = opt.seed;
  ordered_json cfg;
  cfg["model"] = opt.model;
  cfg["d"] = opt.d;
  cfg["L"] = opt.L;
  cfg["beta"] = opt.beta;
  cfg["trials"] = opt.trials;
  cfg["threads"] = opt.threads;
  cfg["epsilon_reg"] = opt.epsilon_reg;
  r["config"] = cfg;
  r["assertions"] = ordered_json::array();
  return r;
}

void finalize(ordered_json& r) {
  bool pass = true;
  for (const auto& a : r["assertions"])
    if (!a["pass"].get<bool>()) pass = false;
  r["pass"] = pass;
}

Multivector random_multivector(int dim, Rng& rng) {
  Multivector m(dim);
  const std::uint32_t full = 1u << dim;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (rng.uniform() < 0.5) m.add(mask, rng.complex_normal());
  }
  return m;
}

// ---------------------------------------------------------------- car

ordered_json suite_car(const Options& opt) {
  ordered_json r = report_head("car", opt);
  const int trials = std::max(100, opt.trials / 10);
  double worst = 0.0, worst_wedge = 0.0, worst_contract = 0.0;
  double worst_opnorm = 0.0, worst_adjoint = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(opt.seed, 0x11000000ull + t);
    int dim = 2 + static_cast<int>(rng.uniform_index(5));  // 2..6
    auto alpha = rng.complex_normal_vector(dim);
    auto alpha2 = rng.complex_normal_vector(dim);
    auto u = rng.complex_normal_vector(dim);
    auto u2 = rng.complex_normal_vector(dim);
    Multivector m = random_multivector(dim, rng);
    double scale = std::max(1e-300, vec_norm(alpha) * vec_norm(u) * m.norm());

    worst = std::max(worst, car_defect(alpha, u, m) / scale);

    Multivector ww = wedge_apply(alpha, wedge_apply(alpha2, m));
    ww += wedge_apply(alpha2, wedge_apply(alpha, m));
    worst_wedge = std::max(
        worst_wedge, ww.norm() / std::max(1e-300, vec_norm(alpha) * vec_norm(alpha2) * m.norm()));

    Multivector cc = contract_apply(u, contract_apply(u2, m));
    cc += contract_apply(u2, contract_apply(u, m));
    worst_contract = std::max(
        worst_contract, cc.norm() / std::max(1e-300, vec_norm(u) * vec_norm(u2) * m.norm()));

    double mn = m.norm();
    if (mn > 1e-12) {
      worst_opnorm = std::max(worst_opnorm,
                              contract_apply(u, m).norm() / (vec_norm(u) * mn) - 1.0);
      worst_opnorm = std::max(worst_opnorm,
                              wedge_apply(u, m).norm() / (vec_norm(u) * mn) - 1.0);
    }
    // <u ^ a, b> = <a, conj(u) -| b> for the conjugate-linear pairing.
    Multivector a = random_multivector(dim, rng);
    std::vector<cdouble> ubar(u.size());
    for (size_t i = 0; i < u.size(); ++i) ubar[i] = std::conj(u[i]);
    cdouble lhs = inner_product(wedge_apply(u, a), m);
    cdouble rhs = inner_product(a, contract_apply(ubar, m));
    worst_adjoint = std::max(worst_adjoint, std::abs(lhs - rhs) /
                                                std::max(1e-300, vec_norm(u) * a.norm() * mn));
  }
  r["assertions"].push_back(assertion_le("anticommutator_mixed_defect", worst, 1e-12));
  r["assertions"].push_back(assertion_le("anticommutator_wedge_defect", worst_wedge, 1e-12));
  r["assertions"].push_back(assertion_le("anticommutator_contract_defect", worst_contract, 1e-12));
  r["assertions"].push_back(assertion_le("operator_norm_excess", worst_opnorm, 1e-12));
  r["assertions"].push_back(assertion_le("adjointness_defect", worst_adjoint, 1e-12));
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- chrono-det

ordered_json suite_chrono_det(const Options& opt) {
  ordered_json r = report_head("chrono-det", opt);
  const int trials = std::max(100, opt.trials / 10);
  double worst = 0.0, worst_duality = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(opt.seed, 0x22000000ull + t);
    int n = 1 + static_cast<int>(rng.uniform_index(5));  // 1..5
    int dim = n + static_cast<int>(rng.uniform_index(8 - n + 1));
    std::vector<std::vector<cdouble>> alphas(n), vs(n);
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
      alphas[i] = rng.complex_normal_vector(dim);
      vs[i] = rng.complex_normal_vector(dim);
      scale *= vec_norm(alphas[i]) * vec_norm(vs[i]);
    }
    std::vector<double> phi(n), phi_prime(n);
    bool repeats = rng.uniform() < 0.5;
    for (int i = 0; i < n; ++i) {
      if (repeats) {
        phi[i] = 0.1 * (1 + rng.uniform_index(3));
        phi_prime[i] = 0.1 * (1 + rng.uniform_index(3));
      } else {
        phi[i] = rng.uniform();
        phi_prime[i] = rng.uniform();
      }
    }
    bool strict = rng.uniform() < 0.5;
    cdouble a = masked_det_chrono(alphas, vs, phi, phi_prime, strict);
    cdouble b = masked_det_lu(alphas, vs, phi, phi_prime, strict);
    // Masked determinants can vanish to rounding, so the defect is measured
    // against the Hadamard scale of the matrix, not the determinant value.
    worst = std::max(worst, std::abs(a - b) / std::max(scale, 1e-300));

    // duality pairing against the plain LU determinant
    CMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = bilinear(alphas[i], vs[j]);
    cdouble d1 = duality_det(alphas, vs);
    cdouble d2 = lu_det(g);
    worst_duality =
        std::max(worst_duality, std::abs(d1 - d2) / std::max({std::abs(d1), std::abs(d2), 1e-12}));
  }
  r["assertions"].push_back(assertion_le("chrono_vs_lu_rel_error", worst, 1e-10));
  r["assertions"].push_back(assertion_le("duality_vs_lu_rel_error", worst_duality, 1e-10));
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- det-bound

ordered_json suite_det_bound(const Options& opt) {
  ordered_json r = report_head("det-bound", opt);
  // Masked-inner-product inequality with repeated labels, both indicators.
  double worst_ratio = 0.0;
  for (int t = 0; t < opt.trials; ++t) {
    Rng rng(opt.seed, 0x33000000ull + t);
    int n = 1 + static_cast<int>(rng.uniform_index(5));
    int dim = n + static_cast<int>(rng.uniform_index(8 - n + 1));
    std::vector<std::vector<cdouble>> vv(n), ww(n);
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
      vv[i] = rng.complex_normal_vector(dim);
      ww[i] = rng.complex_normal_vector(dim);
      double sv = rng.uniform(0.2, 3.0), sw = rng.uniform(0.2, 3.0);
      for (auto& z : vv[i]) z *= sv;
      for (auto& z : ww[i]) z *= sw;
      prod *= vec_norm(vv[i]) * vec_norm(ww[i]);
    }
    bool strict = rng.uniform() < 0.5;
    CMatrix m(n, n);
    for (int k = 0; k < n; ++k) {
      double pk = 0.1 * (1 + rng.uniform_index(4));
      for (int l = 0; l < n; ++l) {
        double ql = 0.1 * (1 + rng.uniform_index(4));
        bool on = strict ? pk > ql : pk >= ql;
        m(k, l) = on ? hermitian(vv[k], ww[l]) : cdouble(0.0);
      }
    }
    worst_ratio = std::max(worst_ratio, std::abs(lu_det(m)) / prod);
  }
  r["assertions"].push_back(assertion_le("masked_gram_det_ratio", worst_ratio, 1.0, 1e-9));

  std::vector<int> ns = {1, 2, 3, 4, 5, 6};
  int per_n = std::max(1, opt.trials / static_cast<int>(ns.size()));

  struct ModelCase {
    std::string tag;
    LatticeModel model;
  };
  std::vector<ModelCase> cases;
  cases.push_back({"metal1d_L8_beta2", metal_model_1d(8, 2.0)});
  cases.push_back({"metal1d_L8_beta8", metal_model_1d(8, 8.0)});
  cases.push_back({"metal2d_L6_beta2", metal_model_2d(6, 2.0)});
  for (const auto& c : cases) {
    auto spec = fermion_full_spec(c.model);
    auto rep = run_bound_suite(spec, ns, per_n, opt.seed, opt.threads);
    r["assertions"].push_back(
        assertion_le("fermion_full_" + c.tag + "_observed", rep.observed, rep.bound, 1e-9));
    double witness = diagonal_witness(spec, 1);
    double lower = std::sqrt(c.model.h_norm1()) / std::sqrt(2.0) - 1e-6;
    r["assertions"].push_back(
        assertion_ge("fermion_full_" + c.tag + "_witness", witness, lower));
  }

  {
    auto spec = step_u_spec(2.0);
    auto rep = run_bound_suite(spec, ns, per_n, opt.seed, opt.threads);
    r["assertions"].push_back(assertion_le("step_u_observed", rep.observed, 1.0, 1e-9));
  }

  {
    // Sum of two diagonal constant pieces, each with its rank-one constant.
    const int msize = 6;
    double c1 = 0.8, c2 = 0.5;
    CMatrix a1(msize, msize), a2(msize, msize);
    for (int i = 0; i < msize; ++i) {
      a1(i, i) = c1;
      a2(i, i) = c2;
    }
    double worst = laplace_sum_check({a1, a2}, {std::sqrt(c1), std::sqrt(c2)}, msize, 2000,
                                     opt.seed ^ 0x5a5a5a5aull);
    r["assertions"].push_back(assertion_le("laplace_sum_ratio", worst, 1.0, 1e-9));
  }

  {
    std::vector<GramPiece> pieces(2);
    pieces[0].entry = [](const SpaceTimePoint&, const SpaceTimePoint&) { return cdouble(0.7); };
    pieces[0].gamma = std::sqrt(0.7);
    pieces[0].indicator = GramPiece::Indicator::Strict;
    pieces[1].entry = [](const SpaceTimePoint&, const SpaceTimePoint&) { return cdouble(-0.4); };
    pieces[1].gamma = std::sqrt(0.4);
    pieces[1].indicator = GramPiece::Indicator::Weak;
    auto spec = gram_sum_spec(pieces, 2.0, "two-constant-pieces");
    auto rep = run_bound_suite(spec, {1, 2, 3, 4}, 2000, opt.seed ^ 0x77ull, opt.threads);
    r["assertions"].push_back(assertion_le("gram_sum_observed", rep.observed, rep.bound, 1e-9));
  }

  {
    auto [hada, gram] = hadamard_comparison(4);
    r["assertions"].push_back(assertion("hadamard_vs_gram_n4", hada, 16.0, hada == 16.0 && gram == 1.0));
    // Valid step-matrix vectors must be pairwise separated; collapsing them breaks it.
    std::vector<double> times = {0.1, 0.2, 0.3};
    std::vector<std::vector<cdouble>> good = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    std::vector<std::vector<cdouble>> bad = {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    bool ok = gram_separation_check(times, good, 1.0) && !gram_separation_check(times, bad, 1.0);
    r["assertions"].push_back(assertion("step_vector_separation", ok ? 1.0 : 0.0, 1.0, ok));
  }
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- covariance

ordered_json suite_covariance(const Options& opt) {
  ordered_json r = report_head("covariance", opt);
  double worst_anti = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Rng rng(opt.seed, 0x44000000ull + t);
    double beta = rng.uniform(0.5, 8.0);
    double tau = rng.uniform(-beta, beta);
    double E = rng.uniform(-5.0, 5.0);
    double lhs = bare_covariance(tau + beta, E, beta);
    double rhs = -bare_covariance(tau, E, beta);
    worst_anti = std::max(worst_anti, std::abs(lhs - rhs));
  }
  r["assertions"].push_back(assertion_le("antiperiodicity_defect", worst_anti, 1e-14));

  r["assertions"].push_back(assertion_le(
      "fermi_half", std::abs(fermi_function(0.0, 1.7) - 0.5), 1e-15));
  r["assertions"].push_back(assertion_le(
      "fermi_quarter", std::abs(fermi_function(std::log(3.0), 1.0) - 0.25), 1e-15));
  r["assertions"].push_back(assertion_le(
      "boundary_branch", std::abs(bare_covariance(0.0, 1.3, 2.0) - fermi_function(1.3, 2.0)),
      1e-15));
  r["assertions"].push_back(assertion_le(
      "jump_at_zero",
      std::abs((bare_covariance(1e-12, 0.0, 2.0) - bare_covariance(0.0, 0.0, 2.0)) + 1.0), 1e-9));

  {
    // Frequency-series error at (beta,E,tau) = (2,1,0.7), doubling cutoffs.
    double beta = 2.0, E = 1.0, tau = 0.7;
    double exact = bare_covariance(tau, E, beta);
    std::vector<double> lx, ly;
    for (int k = 5; k <= 10; ++k) {
      double omega_max = std::pow(2.0, k) * M_PI / beta;
      double err = std::abs(matsubara_covariance(tau, E, beta, omega_max) - exact);
      lx.push_back(std::log(omega_max));
      ly.push_back(std::log(err));
    }
    double slope = fit_slope(lx, ly);
    r["assertions"].push_back(assertion_le("matsubara_slope_upper", slope, -0.7));
    r["assertions"].push_back(assertion_ge("matsubara_slope_lower", slope, -1.3));
  }

  {
    LatticeModel model = make_model(opt);
    double worst_sym = 0.0;
    for (int t = 0; t < 200; ++t) {
      Rng rng(opt.seed, 0x45000000ull + t);
      SpaceTimePoint a, b;
      a.tau = rng.uniform(0.0, model.beta());
      b.tau = rng.uniform(0.0, model.beta());
      a.x.resize(model.d());
      b.x.resize(model.d());
      for (int i = 0; i < model.d(); ++i) {
        a.x[i] = static_cast<int>(rng.uniform_index(model.length()));
        b.x[i] = static_cast<int>(rng.uniform_index(model.length()));
      }
      SpaceTimePoint a2 = a, b2 = b;
      a2.x = b.x;
      b2.x = a.x;
      cdouble lhs = covariance_position(a, b, model);
      cdouble rhs = std::conj(covariance_position(a2, b2, model));
      worst_sym = std::max(worst_sym, std::abs(lhs - rhs));
    }
    r["assertions"].push_back(assertion_le("reflection_symmetry_defect", worst_sym, 1e-12));

    double witness = diagonal_witness(fermion_full_spec(model), 1);
    r["assertions"].push_back(assertion_ge("sup_entry_lower_bound", witness * witness,
                                           model.h_norm1() / 2.0 - 1e-9));
  }

  r["assertions"].push_back(assertion_le(
      "zero_temperature_limit",
      std::abs(bare_covariance(1.0, 1.0, 64.0) - fkt_limit_covariance(1.0)), 1e-27));

  {
    // Transform pair check on the time side, where the integrand decays
    // exponentially: the Fourier transform of phi_time_integral must equal
    // 2 pi |Phi(s)|^2.
    double worst_phi = 0.0;
    static const double gl_node[4] = {0.1834346424956498, 0.5255324099163290,
                                      0.7966664774136267, 0.9602898564975363};
    static const double gl_w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                   0.1012285362903763};
    for (int t = 0; t < 20; ++t) {
      Rng rng(opt.seed, 0x46000000ull + t);
      double beta = rng.uniform(0.5, 6.0);
      double eps = rng.uniform(0.05, 3.0);
      double s = rng.uniform(-5.0, 5.0);
      double T = 40.0 / eps;
      int panels = std::max(64, static_cast<int>(std::abs(s) * T / 3.0));
      double hstep = T / panels;
      double integral = 0.0;  // 2 int_0^T cos(s tau) f(tau) dtau by symmetry
      for (int p = 0; p < panels; ++p) {
        double mid = (p + 0.5) * hstep, half = 0.5 * hstep;
        for (int g = 0; g < 4; ++g) {
          for (double sgn : {-1.0, 1.0}) {
            double tau = mid + sgn * half * gl_node[g];
            integral += gl_w[g] * half * std::cos(s * tau) * phi_time_integral(tau, eps, beta);
          }
        }
      }
      integral *= 2.0;
      double expected = 2.0 * M_PI * std::norm(phi_kernel(s, eps, beta));
      worst_phi = std::max(worst_phi,
                           std::abs(integral - expected) / std::max(1.0, std::abs(expected)));
    }
    r["assertions"].push_back(assertion_le("phi_transform_pair_defect", worst_phi, 1e-6));
  }
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- gram-rep

ordered_json suite_gram_rep(const Options& opt) {
  ordered_json r = report_head("gram-rep", opt);
  LatticeModel model = metal_model_1d(8, 2.0);
  double worst = 0.0;
  for (int it = 0; it < 20; ++it) {
    for (int jt = 0; jt < 20; ++jt) {
      for (int w = 0; w < 8; ++w) {
        SpaceTimePoint a, b;
        a.tau = model.beta() * it / 20.0;
        b.tau = model.beta() * jt / 20.0;
        a.x = {w};
        b.x = {0};
        cdouble lhs = gram_assembled_covariance(a, b, model);
        cdouble rhs = covariance_position(a, b, model);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  r["assertions"].push_back(assertion_le("assembly_vs_momentum_sum", worst, 1e-12));

  double worst_norm = 0.0, worst_orth = 0.0;
  for (int w = 0; w < 8; ++w) {
    for (double t : {0.0, 0.3, 1.1, 1.9}) {
      GramVector gp{GramVector::Kind::GPlus, t, {w}};
      GramVector hv{GramVector::Kind::HVec, t, {w}};
      double total = gram_norm_sq(gp, model) + gram_norm_sq(hv, model);
      worst_norm = std::max(worst_norm, total - model.h_norm1());
      worst_orth = std::max(worst_orth, std::abs(gram_inner_product(gp, hv, model)));
    }
  }
  r["assertions"].push_back(assertion_le("norm_budget_excess", worst_norm, 1e-12));
  r["assertions"].push_back(assertion_le("sector_orthogonality", worst_orth, 1e-300));
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- uv-split

ordered_json suite_uv_split(const Options& opt) {
  ordered_json r = report_head("uv-split", opt);
  LatticeModel model = metal_model_1d(8, 4.0);
  CutoffFunction bump = CutoffFunction::strict_bump();
  std::vector<double> omegas = {8.0, 16.0, 32.0, 64.0};
  auto rep = uv_decay_check(model, bump, omegas);
  r["alpha_by_omega"] = ordered_json::array();
  for (const auto& pt : rep.points) {
    ordered_json row;
    row["Omega"] = pt.Omega;
    row["alpha"] = pt.alpha;
    row["bound_applicable"] = pt.bound_applicable;
    row["bound"] = pt.bound;
    r["alpha_by_omega"].push_back(row);
    r["assertions"].push_back(assertion_le(
        "kernel_envelope_Omega_" + std::to_string(static_cast<int>(pt.Omega)),
        pt.envelope_check, 1.0, 1e-9));
    if (pt.bound_applicable)
      r["assertions"].push_back(assertion_le(
          "alpha_vs_kernel_bound_Omega_" + std::to_string(static_cast<int>(pt.Omega)), pt.alpha,
          pt.bound, 1e-9));
  }
  double threshold = 4.0 * model.dispersion_sup();
  for (size_t i = 0; i < rep.halving_ratios.size(); ++i) {
    if (rep.points[i].Omega < threshold) continue;
    std::string name = "halving_ratio_" + std::to_string(static_cast<int>(rep.points[i].Omega));
    r["assertions"].push_back(assertion_le(name + "_upper", rep.halving_ratios[i], 0.7));
    r["assertions"].push_back(assertion_ge(name + "_lower", rep.halving_ratios[i], 0.3));
  }
  r["K"] = rep.K;
  r["F_l1"] = rep.F_l1;
  r["g_l1"] = rep.g_l1;

  {
    // The decay bound only becomes applicable once Omega exceeds
    // 4 K ||F||_1, far above the halving sweep; one large point covers it.
    auto big = uv_decay_check(model, bump, {512.0});
    const auto& pt = big.points[0];
    ordered_json row;
    row["Omega"] = pt.Omega;
    row["alpha"] = pt.alpha;
    row["bound_applicable"] = pt.bound_applicable;
    row["bound"] = pt.bound;
    r["alpha_by_omega"].push_back(row);
    r["assertions"].push_back(assertion("kernel_bound_applicable_Omega_512",
                                       pt.bound_applicable ? 1.0 : 0.0, 1.0,
                                       pt.bound_applicable));
    r["assertions"].push_back(
        assertion_le("alpha_vs_kernel_bound_Omega_512", pt.alpha, pt.bound, 1e-9));
  }

  {
    // Additivity of the split at sampled points.
    double worst_add = 0.0;
    for (int t = 0; t < 100; ++t) {
      Rng rng(opt.seed, 0x55000000ull + t);
      double tau = rng.uniform(-model.beta() + 1e-6, model.beta() - 1e-6);
      std::vector<int> x = {static_cast<int>(rng.uniform_index(8))};
      cdouble full = covariance_rel(tau, x, model);
      cdouble lo = covariance_ir(tau, x, model, bump, 16.0, 32.0);
      cdouble hi = covariance_uv(tau, x, model, bump, 16.0, 32.0);
      worst_add = std::max(worst_add, std::abs(full - (lo + hi)));
    }
    r["assertions"].push_back(assertion_le("split_additivity", worst_add, 1e-12));
  }

  {
    // Determinant bound of the high-frequency part: full-covariance bound
    // plus the (finite, compact-support) low-frequency Gram constant.
    double Omega = 8.0, omega_max = 16.0;
    double unit = M_PI / model.beta();
    double gamma_sq = 0.0;
    const auto& E = model.dispersion_eff();
    const auto& h = model.h_values();
    for (long m = 1;; m += 2) {
      double omega = unit * m;
      if (omega > omega_max) break;
      double chi = bump.lower(omega / Omega);
      if (chi == 0.0) continue;
      double inner = 0.0;
      for (int k = 0; k < model.momentum_count(); ++k)
        inner += std::abs(h[k]) / std::hypot(omega, E[k]);
      gamma_sq += 2.0 * chi * inner * model.weight();
    }
    gamma_sq /= model.beta();
    double delta_uv = 2.0 * std::sqrt(model.h_norm1()) + std::sqrt(gamma_sq);
    UvKernel uvk(model, bump, Omega, omega_max);
    CovarianceMatrixSpec spec;
    spec.name = "fermion-uv";
    spec.entry = [&uvk](const SpaceTimePoint& a, const SpaceTimePoint& b) {
      std::vector<int> d(a.x.size());
      for (size_t i = 0; i < a.x.size(); ++i) d[i] = a.x[i] - b.x[i];
      return uvk(a.tau - b.tau, d);
    };
    spec.bound = delta_uv;
    spec.beta = model.beta();
    spec.d = 1;
    spec.length = 8;
    spec.cluster_times = true;
    auto brep = run_bound_suite(spec, {1, 2, 3, 4}, 500, opt.seed ^ 0x99ull, opt.threads);
    r["assertions"].push_back(assertion_le("uv_det_bound_observed", brep.observed, delta_uv, 1e-9));
  }
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- gram-ir

ordered_json suite_gram_ir(const Options& opt) {
  ordered_json r = report_head("gram-ir", opt);
  LatticeModel model = metal_model_1d(8, 4.0);
  CutoffFunction chi = CutoffFunction::smooth_decay();
  std::vector<double> omegas = {4.0, 16.0, 64.0, 256.0};
  std::vector<double> lnom, gsq;
  r["gamma_by_omega"] = ordered_json::array();
  for (double om : omegas) {
    auto res = gram_constant_ir(model, chi, om, 200.0 * om);
    lnom.push_back(std::log(om));
    gsq.push_back(res.gamma_sq);
    ordered_json row;
    row["Omega"] = om;
    row["gamma_sq"] = res.gamma_sq;
    row["tail"] = res.tail;
    row["bound_rhs"] = res.rhs_bound;
    r["gamma_by_omega"].push_back(row);
    r["assertions"].push_back(assertion_le(
        "gamma_sq_rhs_Omega_" + std::to_string(static_cast<int>(om)), res.gamma_sq,
        res.rhs_bound));
  }
  double slope = fit_slope(lnom, gsq);
  r["assertions"].push_back(
      assertion_le("gamma_sq_log_slope", slope, 2.0 * model.h_norm1() * 1.2));

  LatticeModel insulator = insulator_model_1d(8, 4.0);
  auto res = gram_constant_ir(insulator, chi, 16.0, 3200.0);
  double log_term_free = insulator.h_norm1() * (10.0 + 2.0 * (0.25 + 1.0 / (4.0 * 16.0)) +
                                                2.0 * std::log(16.0));
  r["assertions"].push_back(
      assertion_le("insulator_gamma_sq_no_log_term", res.gamma_sq, log_term_free));
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- decay

ordered_json suite_decay(const Options& opt) {
  ordered_json r = report_head("decay", opt);
  std::vector<double> betas = {4.0, 8.0, 16.0, 32.0};
  std::vector<double> lb, la;
  r["metal_alpha_by_beta"] = ordered_json::array();
  for (double beta : betas) {
    LatticeModel model = metal_model_1d(64, beta);
    auto kern = [&model](double t, const std::vector<int>& x) {
      return covariance_rel(t, x, model);
    };
    auto dc = decay_constant(kern, model, 0, 0);
    lb.push_back(std::log(beta));
    la.push_back(std::log(dc.value));
    ordered_json row;
    row["beta"] = beta;
    row["alpha"] = dc.value;
    row["quadrature_converged"] = dc.converged;
    r["metal_alpha_by_beta"].push_back(row);
  }
  r["assertions"].push_back(assertion_le("metal_alpha_log_slope", fit_slope(lb, la), 2.2));

  double a4, a32;
  {
    LatticeModel model = insulator_model_1d(8, 4.0);
    a4 = decay_constant([&model](double t, const std::vector<int>& x) {
           return covariance_rel(t, x, model);
         }, model, 0, 0).value;
  }
  {
    LatticeModel model = insulator_model_1d(8, 32.0);
    a32 = decay_constant([&model](double t, const std::vector<int>& x) {
            return covariance_rel(t, x, model);
          }, model, 0, 0).value;
  }
  r["insulator_alpha_beta4"] = a4;
  r["insulator_alpha_beta32"] = a32;
  r["assertions"].push_back(assertion_le("insulator_alpha_ratio", a32 / a4, 1.5));
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- sector

ordered_json suite_sector(const Options& opt) {
  ordered_json r = report_head("sector", opt);
  auto probe = sector_scaling_probe(1, 256, 16.0, cosine_dispersion(0.3),
                                    {0.4, 0.2, 0.1, 0.05});
  r["probe"] = ordered_json::array();
  for (size_t i = 0; i < probe.eps.size(); ++i) {
    ordered_json row;
    row["eps"] = probe.eps[i];
    row["alpha"] = probe.alpha[i];
    r["probe"].push_back(row);
  }
  r["slope"] = probe.slope;
  // One-sided: alpha may not grow faster than eps^{-(d+1)/2} up to model
  // constants, so the log-log slope stays above -(d+1)/2 - 0.5.
  r["assertions"].push_back(assertion_ge("sector_slope_lower", probe.slope, -1.5));
  finalize(r);
  return r;
}

// ---------------------------------------------------------------- effective-action

ordered_json suite_effective_action(const Options& opt) {
  ordered_json r = report_head("effective-action", opt);
  const int sites = 2;
  Interaction quartic(sites);
  quartic.add_term({0, 1}, {0, 1}, 1.0);

  CMatrix C(sites, sites);
  C(0, 0) = cdouble(0.30, 0.0);
  C(0, 1) = cdouble(0.10, 0.20);
  C(1, 0) = cdouble(0.00, -0.05);
  C(1, 1) = cdouble(0.25, 0.0);
  double alpha_c = abstract_alpha(C);
  double delta_c = abstract_delta(C);

  {
    // Empirical certification of the recorded determinant bound.
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
      Rng rng(opt.seed, 0x66000000ull + t);
      int n = 1 + static_cast<int>(rng.uniform_index(2));
      std::vector<std::vector<cdouble>> ps(n), qs(n);
      std::vector<int> xs(n), ys(n);
      for (int i = 0; i < n; ++i) {
        ps[i] = sample_unit_ball(n, rng);
        qs[i] = sample_unit_ball(n, rng);
        xs[i] = static_cast<int>(rng.uniform_index(sites));
        ys[i] = static_cast<int>(rng.uniform_index(sites));
      }
      CMatrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = hermitian(ps[i], qs[j]) * C(xs[i], ys[j]);
      worst = std::max(worst, std::pow(std::abs(lu_det(m)), 1.0 / (2.0 * n)));
    }
    r["delta_trials"] = 2000;
    r["assertions"].push_back(assertion_le("abstract_delta_certified", worst, delta_c, 1e-9));
  }

  std::vector<double> lambdas = {1e-4, 2e-4, 4e-4, 7e-4, 1e-3};
  for (int P : {1, 2}) {
    auto rep = konv_remainder_check(quartic, C, 1.0, P, lambdas, alpha_c, delta_c);
    std::string tag = "orderP_P" + std::to_string(P);
    double worst_excess = 0.0;
    bool all_in_domain = true;
    for (const auto& pt : rep.points) {
      if (!pt.in_domain) all_in_domain = false;
      if (pt.in_domain && pt.rhs > 0.0)
        worst_excess = std::max(worst_excess, pt.remainder / pt.rhs);
    }
    r[tag + "_omega_C"] = rep.omega_C;
    r["assertions"].push_back(assertion(tag + "_all_in_domain", all_in_domain ? 1.0 : 0.0, 1.0,
                                        all_in_domain));
    r["assertions"].push_back(assertion_le(tag + "_remainder_ratio", worst_excess, 1.0, 1e-9));
  }

  {
    // Strictly upper-triangular covariance: no closed loops, so the series
    // terminates and a large enough order leaves zero remainder.
    CMatrix nil(sites, sites);
    nil(0, 1) = cdouble(0.4, 0.1);
    double a_nil = abstract_alpha(nil);
    double d_nil = abstract_delta(nil);
    auto rep = konv_remainder_check(quartic, nil, 1.0, 4, {0.005}, a_nil, d_nil);
    r["assertions"].push_back(
        assertion("exhaustion_remainder_zero", rep.points[0].remainder, 0.0,
                  rep.points[0].remainder == 0.0));
  }

  {
    // lambda = 0 gives no effective interaction at all.
    Interaction w0 = effective_action_exact(quartic, C, 0.0);
    r["assertions"].push_back(
        assertion("zero_coupling_empty", static_cast<double>(w0.entries().size()), 0.0,
                  w0.entries().empty()));
  }

  {
    // Iterated convolution: integrating the two summands of the covariance
    // one after the other matches integrating their sum.
    Interaction v(sites);
    v.add_term({0, 1}, {0, 1}, 0.1);
    v.add_term({0}, {0}, 0.05);
    v.add_term({1}, {1}, -0.03);
    v.add_term({0}, {1}, cdouble(0.0, 0.02));
    CMatrix c_lo(sites, sites), c_hi(sites, sites), c_sum(sites, sites);
    c_lo(0, 0) = 0.12;
    c_lo(0, 1) = cdouble(0.03, 0.05);
    c_lo(1, 1) = 0.08;
    c_hi(0, 0) = 0.05;
    c_hi(1, 0) = cdouble(-0.02, 0.01);
    c_hi(1, 1) = 0.11;
    for (int i = 0; i < sites; ++i)
      for (int j = 0; j < sites; ++j) c_sum(i, j) = c_lo(i, j) + c_hi(i, j);
    Interaction direct = effective_action_exact(v, c_sum, 1.0);
    Interaction inner = effective_action_exact(v, c_hi, 1.0);
    Interaction iterated = effective_action_exact(inner, c_lo, 1.0);
    r["assertions"].push_back(
        assertion_le("semigroup_defect", interaction_distance(direct, iterated), 1e-10));
  }

  {
    // Kernels stay antisymmetric under slot exchange.
    Interaction w = effective_action_exact(quartic, C, 0.3);
    double worst = 0.0;
    for (const auto& [key, val] : w.entries()) {
      if (key.first.size() == 2) {
        cdouble swapped = w.kernel({key.first[1], key.first[0]}, key.second);
        worst = std::max(worst, std::abs(swapped + val));
      }
    }
    r["assertions"].push_back(assertion_le("kernel_antisymmetry_defect", worst, 1e-12));
  }
  finalize(r);
  return r;
}

}  // namespace

LatticeModel make_model(const Options& opt) {
  if (opt.model == "metal1d") return metal_model_1d(opt.L, opt.beta);
  if (opt.model == "insulator1d") return insulator_model_1d(opt.L, opt.beta);
  if (opt.model == "metal2d") return metal_model_2d(opt.L, opt.beta);
  if (opt.model == "custom") {
    std::function<double(const std::vector<double>&)> disp;
    if (opt.dispersion == "cosine")
      disp = cosine_dispersion(opt.mu);
    else if (opt.dispersion == "constant")
      disp = constant_dispersion(opt.mu);
    else
      throw std::invalid_argument("unknown dispersion: " + opt.dispersion);
    std::function<double(const std::vector<double>&)> h;
    if (opt.scaling == "unit")
      h = unit_scaling();
    else if (opt.scaling == "shell")
      h = shell_scaling(disp, opt.scaling_eps);
    else
      throw std::invalid_argument("unknown scaling: " + opt.scaling);
    return LatticeModel(opt.d, opt.L, opt.beta, disp, h, opt.epsilon_reg);
  }
  throw std::invalid_argument("unknown model: " + opt.model);
}

std::vector<std::string> suite_names() {
  return {"car",      "chrono-det", "det-bound", "covariance", "gram-rep",
          "uv-split", "gram-ir",    "decay",     "sector",     "effective-action"};
}

ordered_json run_suite(const std::string& name, const Options& opt) {
  if (name == "car") return suite_car(opt);
  if (name == "chrono-det") return suite_chrono_det(opt);
  if (name == "det-bound") return suite_det_bound(opt);
  if (name == "covariance") return suite_covariance(opt);
  if (name == "gram-rep") return suite_gram_rep(opt);
  if (name == "uv-split") return suite_uv_split(opt);
  if (name == "gram-ir") return suite_gram_ir(opt);
  if (name == "decay") return suite_decay(opt);
  if (name == "sector") return suite_sector(opt);
  if (name == "effective-action") return suite_effective_action(opt);
  if (name == "all") {
    ordered_json r;
    r["artifact"] = kArtifact;
    r["suite"] = "all";
    r["seed"] = opt.seed;
    r["suites"] = ordered_json::array();
    bool pass = true;
    for (const auto& s : suite_names()) {
      ordered_json sub = run_suite(s, opt);
      if (!sub["pass"].get<bool>()) pass = false;
      r["suites"].push_back(sub);
    }
    r["pass"] = pass;
    return r;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

bool report_passed(const nlohmann::ordered_json& report) { return report.at("pass").get<bool>(); }

std::string covariance_csv(const Options& opt, int tau_steps) {
  LatticeModel model = make_model(opt);
  std::ostringstream out;
  out << "tau";
  for (int i = 0; i < model.d(); ++i) out << ",x" << (i + 1);
  out << ",re,im\n";
  int npts = model.momentum_count();
  out.precision(17);
  for (int s = 0; s < tau_steps; ++s) {
    double tau = -model.beta() + 2.0 * model.beta() * (s + 0.5) / tau_steps;
    for (int w = 0; w < npts; ++w) {
      std::vector<int> x(model.d());
      int rest = w;
      for (int i = 0; i < model.d(); ++i) {
        x[i] = rest % model.length();
        rest /= model.length();
      }
      cdouble v = covariance_rel(tau, x, model);
      out << tau;
      for (int i = 0; i < model.d(); ++i) out << "," << x[i];
      out << "," << v.real() << "," << v.imag() << "\n";
    }
  }
  return out.str();
}

}  // namespace fermidet::suites
