#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vcsim/engine.hpp"
#include "vcsim/policy.hpp"
#include "vcsim/workload.hpp"

namespace vcsim::config {

// Absorbing-chain settings shared by LUT building and the replacement
// latency inside the simulator.
struct ChainSettings {
  Minutes t_mttr_min = 5;
  Minutes step_min = 1;
  double lut_q = 0.01;
  int max_horizon_doublings = 8;
  std::int64_t state_cap = 1'000'000;
};

struct RunSettings {
  std::uint64_t seed = 1;  // base seed for gen and single runs
  std::vector<std::uint64_t> seeds;  // defaults to 1..20
  std::vector<policy::Ordering> orderings = {policy::Ordering::Ep};
};

struct SweepSettings {
  std::vector<std::int64_t> task_counts = {1000, 2000, 3000};
  std::vector<std::int64_t> vu_counts = {2000, 4000, 6000, 8000, 10000};
  std::vector<double> exec_multipliers = {0.5, 1.0, 1.5, 2.0};
  std::vector<double> residency_multipliers = {0.75, 1.0, 1.5, 2.0};
};

struct IngestSettings {
  std::string parking_trace;  // empty: generate VUs synthetically
  Minutes day_window_min = 1440;
};

// Pre-existing inputs; empty entries are produced inline instead.
struct TraceSettings {
  std::string vu_trace;
  std::string task_trace;
  std::string lut;
};

struct RunConfig {
  workload::WorkloadConfig workload;
  ChainSettings chain;
  policy::PolicyConfig policy;
  engine::EngineConfig engine;
  RunSettings run;
  SweepSettings sweep;
  IngestSettings ingest;
  TraceSettings traces;
};

// Flat `key = value` lines under [section] headers; `#` starts a comment.
// Unknown sections or keys fail with the offending line number, as do
// malformed values. Derived fields (replacement latency, residency window)
// are filled in before returning.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

// Cross-field checks plus existence of referenced input files.
void validate(const RunConfig& cfg);

// Every setting in a fixed order, defaults included, so two configs that
// behave identically serialize identically.
std::string canonical_config(const RunConfig& cfg);

// FNV-1a of the canonical form, as 16 hex digits; stamped into reports.
std::string config_digest(const RunConfig& cfg);

}  // namespace vcsim::config
