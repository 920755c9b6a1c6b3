#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fermidet/linalg.hpp"
#include "fermidet/model.hpp"
#include "fermidet/rng.hpp"

namespace fermidet {

/// Rule producing two-point matrix entries for sampled space-time points,
/// together with the bound its determinants are asserted against.
struct CovarianceMatrixSpec {
  std::string name;
  std::function<cdouble(const SpaceTimePoint&, const SpaceTimePoint&)> entry;
  double bound = 0.0;   // asserted delta: |det|^{1/(2n)} <= bound
  double beta = 1.0;    // time extent for point sampling
  int d = 0;            // spatial dimension for sampling (0: time only)
  int length = 1;
  bool cluster_times = false;  // adversarial near-coincident time sampling
};

/// One Gram piece of an assembled sum: an entry rule with a certified
/// vector-norm constant, optionally masked by a time-order indicator.
struct GramPiece {
  enum class Indicator { None, Strict, Weak };
  std::function<cdouble(const SpaceTimePoint&, const SpaceTimePoint&)> entry;
  double gamma = 0.0;
  Indicator indicator = Indicator::None;
};

struct BoundReport {
  std::string name;
  std::vector<int> n_values;
  int trials_per_n = 0;
  std::uint64_t seed = 0;
  double observed = 0.0;  // max over trials of |det|^{1/(2n)}
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
};

CovarianceMatrixSpec fermion_full_spec(const LatticeModel& model);
CovarianceMatrixSpec step_u_spec(double beta);
CovarianceMatrixSpec constant_spec(cdouble c, double beta);
CovarianceMatrixSpec gram_sum_spec(const std::vector<GramPiece>& pieces, double beta,
                                   const std::string& name);

/// Sum of the per-piece constants, the asserted bound for the assembled sum.
double gram_sum_bound(const std::vector<GramPiece>& pieces);

/// Uniform draw from the unit sphere of C^n.
std::vector<cdouble> sample_unit_ball(int n, Rng& rng);

/// Draws n row and n column points plus unit vectors p_i, q_j and returns
/// |det(<p_i,q_j> C_{x_i y_j})|.
double masked_det_trial(const CovarianceMatrixSpec& spec, int n, Rng& rng);

/// Same with a random positive semidefinite mask P = Q*Q, diag(P) <= 1.
double interp_det_trial(const CovarianceMatrixSpec& spec, int n, Rng& rng);

/// |det| at the diagonal configuration: identity mask, x_i = y_i placed at
/// the largest |entry| found scanning near-coincident times.  Returns the
/// observed |det|^{1/(2n)}, a lower witness for the true bound.
double diagonal_witness(const CovarianceMatrixSpec& spec, int n);

/// Random row/column selections from sum(A_pieces) with unit vectors;
/// checks |det| <= (sum gamma_l)^{2p} for submatrix sizes up to p_max.
/// Returns the worst ratio observed / bound.
double laplace_sum_check(const std::vector<CMatrix>& a_pieces, const std::vector<double>& gammas,
                         int p_max, int trials, std::uint64_t seed);

/// For the n x n all-ones matrix: (Hadamard bound n^{n/2}, rank-one Gram bound 1).
std::pair<double, double> hadamard_comparison(int n);

/// True iff every pair of vectors at distinct times is separated by at
/// least 1/gamma (up to 1e-12), the obstruction to step-matrix Gram
/// representations with small constants.
bool gram_separation_check(const std::vector<double>& times,
                           const std::vector<std::vector<cdouble>>& w, double gamma);

/// Runs trials of masked_det_trial (and interleaved interp_det_trial) for
/// each n, reducing by max.  Deterministic for fixed seed independent of
/// the thread count.
BoundReport run_bound_suite(const CovarianceMatrixSpec& spec, const std::vector<int>& n_values,
                            int trials, std::uint64_t seed, int threads = 1);

}  // namespace fermidet
