#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/core.hpp"

namespace vcsim::reliability {

// Parameters of the group-replacement failure chain for one (class, n) cell:
// n redundant copies, per-copy departure rate lambda, mean replacement time
// t_mttr. One chain step advances the clock by step_min minutes.
struct ChainParams {
  int n = 1;
  double lambda = 0.0;
  Minutes t_mttr = 5;
  Minutes step_min = 1;
};

void validate(const ChainParams& p);  // throws std::invalid_argument

// Probability that another copy departs before a replacement for the j-th
// lost copy arrives: p_j = lambda*(n-j) / (mu + lambda*(n-j)), mu = 1/t_mttr.
double escalation_prob(const ChainParams& p, int departed);

// Discrete-time absorbing chain over degradation levels. State layout:
//   0                        healthy (full group, j = 0)
//   1 + (j-1)*t_mttr + (k-1) degraded level j in replacement substate k,
//                            1 <= j <= n-1, 1 <= k <= t_mttr
//   last                     failed (absorbing)
struct ReliabilityChain {
  ChainParams params;
  Eigen::MatrixXd transition;  // row-stochastic

  int healthy_state() const { return 0; }
  int failed_state() const { return static_cast<int>(transition.rows()) - 1; }
  int state_index(int j, int k) const {
    return 1 + (j - 1) * static_cast<int>(params.t_mttr) + (k - 1);
  }
  std::int64_t state_count() const { return transition.rows(); }
};

ReliabilityChain build_chain(const ChainParams& p, std::int64_t state_cap = 1'000'000);

// F(t) on the step grid; values[i] = probability of having failed by time
// i*step_min, values[0] = 0.
struct FailureCdf {
  Minutes step_min = 1;
  std::vector<double> values;

  Minutes horizon_min() const {
    return (static_cast<Minutes>(values.size()) - 1) * step_min;
  }
};

FailureCdf failure_cdf(const ReliabilityChain& chain, Minutes horizon_min);

// F(horizon) alone, without storing the curve; usable for very long horizons.
double failure_mass_at(const ReliabilityChain& chain, Minutes horizon_min);

// Largest t with F(t) <= q (the group is still q-reliable at the returned
// time). nullopt when F(horizon) <= q, i.e. the horizon is too short to
// bracket the quantile; callers grow the horizon and retry.
std::optional<Minutes> quantile_time(const FailureCdf& cdf, double q);

struct LutEntry {
  VuClassTag cls = VuClassTag::Srt;
  int n = 0;
  Minutes mt99r_min = 0;
  ChainParams params;  // provenance
  double q = 0.01;
};

// (class, redundancy) -> largest still-q-reliable window, in minutes.
// Consulted by task splitting and by recruitment sizing.
struct Lut {
  std::vector<LutEntry> entries;

  const LutEntry* find(VuClassTag cls, int n) const;
  bool has(VuClassTag cls, int n) const { return find(cls, n) != nullptr; }
  Minutes mt99r(VuClassTag cls, int n) const;  // throws std::out_of_range

  // text form: header + one `class,n,mt99r_min,lambda,t_mttr,q` line per
  // entry, LF endings; bit-exact for identical params
  std::string to_csv() const;
  static Lut from_csv(std::string_view text);
};

struct NBounds {
  int n_min = 1;
  int n_max = 1;
};

struct LutBuildParams {
  double q = 0.01;
  Minutes t_mttr = 5;
  Minutes step_min = 1;
  int max_horizon_doublings = 8;     // starting horizon may grow 2^8-fold
  std::int64_t state_cap = 1'000'000;
};

// One entry per (class, n) with n inside that class's bounds. Starting
// horizon is 64 * mean_residency * n, doubled while the quantile stays
// unbracketed.
Lut build_lut(std::span<const VuClass> classes,
              const std::array<NBounds, kNumVuClasses>& bounds,
              const LutBuildParams& bp);

// Independent oracle for failure_cdf: simulates whole trajectories of the
// same windowed-replacement protocol the chain encodes (no matrices).
// Deterministic per seed and independent of the job count.
FailureCdf monte_carlo_failure_cdf(const ChainParams& p, std::int64_t trials,
                                   Minutes horizon_min, std::uint64_t seed,
                                   int jobs = 1);

}  // namespace vcsim::reliability
