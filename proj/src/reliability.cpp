#include "vcsim/reliability.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vcsim/rng.hpp"

namespace vcsim::reliability {

void validate(const ChainParams& p) {
  if (p.n < 1) throw std::invalid_argument("chain: n must be >= 1");
  if (!(p.lambda > 0.0)) throw std::invalid_argument("chain: lambda must be > 0");
  if (p.t_mttr < 1) throw std::invalid_argument("chain: t_mttr must be >= 1");
  if (p.step_min < 1) throw std::invalid_argument("chain: step_min must be >= 1");
  if (p.t_mttr % p.step_min != 0)
    throw std::invalid_argument("chain: step_min must divide t_mttr");
}

double escalation_prob(const ChainParams& p, int departed) {
  validate(p);
  if (departed < 0 || departed >= p.n)
    throw std::invalid_argument(
        "escalation_prob: departed count must be in [0, n)");
  const double mu = 1.0 / static_cast<double>(p.t_mttr);
  const double rate = p.lambda * static_cast<double>(p.n - departed);
  return rate / (mu + rate);
}

ReliabilityChain build_chain(const ChainParams& p, std::int64_t state_cap) {
  validate(p);
  const std::int64_t states =
      1 + static_cast<std::int64_t>(p.n - 1) * p.t_mttr + 1;
  if (states > state_cap)
    throw std::invalid_argument("build_chain: state count exceeds cap");

  ReliabilityChain chain;
  chain.params = p;
  chain.transition = Eigen::MatrixXd::Zero(states, states);
  Eigen::MatrixXd& A = chain.transition;

  const int failed = static_cast<int>(states) - 1;
  const int T = static_cast<int>(p.t_mttr);

  // healthy: one of the n copies departs within a step with hazard h0
  const double h0 =
      1.0 - std::exp(-static_cast<double>(p.n) * p.lambda *
                     static_cast<double>(p.step_min));
  const int first_degraded = (p.n == 1) ? failed : chain.state_index(1, 1);
  A(0, 0) = 1.0 - h0;
  A(0, first_degraded) = h0;

  // degraded level j, replacement substate k
  for (int j = 1; j <= p.n - 1; ++j) {
    const double pj = escalation_prob(p, j);
    const int next_level =
        (j + 1 == p.n) ? failed : chain.state_index(j + 1, 1);
    for (int k = 1; k <= T; ++k) {
      const int s = chain.state_index(j, k);
      if (k < T) {
        // another departure before this window's replacement finishes
        const double esc = pj / static_cast<double>(T);
        A(s, next_level) = esc;
        A(s, chain.state_index(j, k + 1)) = 1.0 - esc;
      } else {
        // window over: replacement restored the group, or it degraded again
        A(s, 0) = 1.0 - pj;
        A(s, next_level) = pj;
      }
    }
  }

  A(failed, failed) = 1.0;  // absorbing
  return chain;
}

FailureCdf failure_cdf(const ReliabilityChain& chain, Minutes horizon_min) {
  if (horizon_min < 0) throw std::invalid_argument("failure_cdf: negative horizon");
  const Minutes step = chain.params.step_min;
  const std::int64_t steps = horizon_min / step;

  FailureCdf cdf;
  cdf.step_min = step;
  cdf.values.resize(static_cast<std::size_t>(steps) + 1);

  const std::int64_t S = chain.state_count();
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(S);
  v(chain.healthy_state()) = 1.0;
  cdf.values[0] = 0.0;

  Eigen::RowVectorXd next(S);
  for (std::int64_t i = 1; i <= steps; ++i) {
    next.noalias() = v * chain.transition;
    v.swap(next);
    cdf.values[static_cast<std::size_t>(i)] = v(chain.failed_state());
  }
  return cdf;
}

double failure_mass_at(const ReliabilityChain& chain, Minutes horizon_min) {
  if (horizon_min < 0) throw std::invalid_argument("failure_mass_at: negative horizon");
  const std::int64_t steps = horizon_min / chain.params.step_min;
  const std::int64_t S = chain.state_count();
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(S);
  v(chain.healthy_state()) = 1.0;
  Eigen::RowVectorXd next(S);
  for (std::int64_t i = 0; i < steps; ++i) {
    next.noalias() = v * chain.transition;
    v.swap(next);
  }
  return v(chain.failed_state());
}

std::optional<Minutes> quantile_time(const FailureCdf& cdf, double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("quantile_time: q must be in (0,1)");
  if (cdf.values.empty())
    throw std::invalid_argument("quantile_time: empty cdf");
  if (cdf.values.back() <= q) return std::nullopt;  // horizon too short
  auto it = std::upper_bound(cdf.values.begin(), cdf.values.end(), q);
  const auto idx = static_cast<std::int64_t>(it - cdf.values.begin()) - 1;
  return idx * cdf.step_min;
}

const LutEntry* Lut::find(VuClassTag cls, int n) const {
  for (const auto& e : entries)
    if (e.cls == cls && e.n == n) return &e;
  return nullptr;
}

Minutes Lut::mt99r(VuClassTag cls, int n) const {
  const LutEntry* e = find(cls, n);
  if (!e) {
    std::string msg = "lut: no entry for (";
    msg += to_string(cls);
    msg += "," + std::to_string(n) + ")";
    throw std::out_of_range(msg);
  }
  return e->mt99r_min;
}

std::string Lut::to_csv() const {
  std::string out = "class,n,mt99r_min,lambda,t_mttr,q\n";
  char buf[160];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%s,%d,%" PRId64 ",%.17g,%" PRId64 ",%.17g\n",
                  std::string(to_string(e.cls)).c_str(), e.n, e.mt99r_min,
                  e.params.lambda, e.params.t_mttr, e.q);
    out += buf;
  }
  return out;
}

Lut Lut::from_csv(std::string_view text) {
  Lut lut;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "class,n,mt99r_min,lambda,t_mttr,q")
        throw std::runtime_error("lut csv: bad header at line 1");
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 6)
      throw std::runtime_error("lut csv: bad field count at line " +
                               std::to_string(lineno));
    auto cls = vu_class_from_string(f[0]);
    if (!cls)
      throw std::runtime_error("lut csv: unknown class at line " +
                               std::to_string(lineno));
    LutEntry e;
    e.cls = *cls;
    e.n = std::stoi(f[1]);
    e.mt99r_min = std::stoll(f[2]);
    e.params.n = e.n;
    e.params.lambda = std::stod(f[3]);
    e.params.t_mttr = std::stoll(f[4]);
    e.q = std::stod(f[5]);
    lut.entries.push_back(e);
  }
  return lut;
}

Lut build_lut(std::span<const VuClass> classes,
              const std::array<NBounds, kNumVuClasses>& bounds,
              const LutBuildParams& bp) {
  Lut lut;
  for (const VuClass& c : classes) {
    const NBounds& b = bounds[static_cast<int>(c.tag)];
    for (int n = b.n_min; n <= b.n_max; ++n) {
      ChainParams p;
      p.n = n;
      p.lambda = 1.0 / c.mean_residency_min;
      p.t_mttr = bp.t_mttr;
      p.step_min = bp.step_min;
      const ReliabilityChain chain = build_chain(p, bp.state_cap);

      Minutes horizon = static_cast<Minutes>(
          std::ceil(64.0 * c.mean_residency_min * n));
      horizon = (horizon + p.step_min - 1) / p.step_min * p.step_min;

      std::optional<Minutes> t;
      for (int d = 0; d <= bp.max_horizon_doublings; ++d) {
        t = quantile_time(failure_cdf(chain, horizon), bp.q);
        if (t) break;
        horizon *= 2;
      }
      if (!t) {
        std::string msg = "build_lut: horizon exhausted for (";
        msg += to_string(c.tag);
        msg += "," + std::to_string(n) + ")";
        throw std::runtime_error(msg);
      }
      lut.entries.push_back(LutEntry{c.tag, n, *t, p, bp.q});
    }
  }
  return lut;
}

namespace {

// index of the first success in a run of Bernoulli(p) trials (1-based);
// effectively infinite when p == 0
std::int64_t first_success(double u, double p) {
  if (p <= 0.0) return std::numeric_limits<std::int64_t>::max() / 4;
  const double x = std::ceil(std::log1p(-u) / std::log1p(-p));
  if (!(x < 4.0e18)) return std::numeric_limits<std::int64_t>::max() / 4;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(x));
}

// One trajectory of the windowed-replacement protocol; returns the failure
// step, or -1 when the group survives past horizon_steps.
std::int64_t run_trial(const ChainParams& p, std::int64_t horizon_steps,
                       double h0, const std::vector<double>& pj,
                       std::uint64_t seed) {
  std::mt19937_64 g(seed);
  const std::int64_t T = p.t_mttr;  // substates per replacement window
  std::int64_t t = 0;

  while (true) {
    // healthy dwell until the first departure
    t += first_success(uniform01(g), h0);
    if (t > horizon_steps) return -1;

    int j = 1;
    while (true) {
      if (j == p.n) return t;  // no copies left
      const double esc = pj[static_cast<std::size_t>(j)] / static_cast<double>(T);
      // a further departure may hit one of the window's first T-1 substates
      const std::int64_t i = first_success(uniform01(g), esc);
      if (i <= T - 1) {
        t += i;
        if (t > horizon_steps) return -1;
        ++j;
        continue;
      }
      // full window elapsed; the final substate either recovers or degrades
      t += T;
      if (t > horizon_steps) return -1;
      if (uniform01(g) < pj[static_cast<std::size_t>(j)]) {
        ++j;
        continue;
      }
      break;  // replacement landed, group whole again
    }
  }
}

}  // namespace

FailureCdf monte_carlo_failure_cdf(const ChainParams& p, std::int64_t trials,
                                   Minutes horizon_min, std::uint64_t seed,
                                   int jobs) {
  validate(p);
  if (trials < 1) throw std::invalid_argument("monte carlo: trials must be >= 1");
  if (jobs < 1) jobs = 1;

  const std::int64_t horizon_steps = horizon_min / p.step_min;
  const double h0 =
      1.0 - std::exp(-static_cast<double>(p.n) * p.lambda *
                     static_cast<double>(p.step_min));
  std::vector<double> pj(static_cast<std::size_t>(p.n) + 1, 0.0);
  for (int j = 1; j < p.n; ++j)
    pj[static_cast<std::size_t>(j)] = escalation_prob(p, j);

  // per-thread failure-step histograms, merged afterwards; per-trial seeds
  // make the result independent of the slicing
  const int nthreads = static_cast<int>(
      std::min<std::int64_t>(jobs, std::max<std::int64_t>(1, trials)));
  std::vector<std::vector<std::int64_t>> hist(
      static_cast<std::size_t>(nthreads),
      std::vector<std::int64_t>(static_cast<std::size_t>(horizon_steps) + 1, 0));

  auto worker = [&](int w) {
    auto& h = hist[static_cast<std::size_t>(w)];
    for (std::int64_t i = w; i < trials; i += nthreads) {
      const std::int64_t fs =
          run_trial(p, horizon_steps, h0, pj, trial_seed(seed, static_cast<std::uint64_t>(i)));
      if (fs >= 0) ++h[static_cast<std::size_t>(fs)];
    }
  };

  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  FailureCdf cdf;
  cdf.step_min = p.step_min;
  cdf.values.resize(static_cast<std::size_t>(horizon_steps) + 1, 0.0);
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < cdf.values.size(); ++i) {
    for (int w = 0; w < nthreads; ++w) acc += hist[static_cast<std::size_t>(w)][i];
    cdf.values[i] = static_cast<double>(acc) / static_cast<double>(trials);
  }
  return cdf;
}

}  // namespace vcsim::reliability
