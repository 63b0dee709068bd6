#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/core.hpp"

namespace vcsim::workload {

struct WorkloadConfig {
  std::int64_t num_tasks = 1000;  // N
  std::int64_t num_vus = 10000;   // M
  std::array<VuClass, 3> classes = default_vu_classes();

  double mean_exec_min = 1000.0;
  double max_exec_min = 5000.0;
  // a small heavy tail of long tasks, redrawn uniformly
  double exec_outlier_fraction = 0.02;
  double exec_outlier_lo_min = 3000.0;
  double exec_outlier_hi_min = 5000.0;

  // laxity = fraction * exec + uniform slack
  double laxity_exec_fraction = 0.1;
  std::int64_t laxity_lo_min = 100;
  std::int64_t laxity_hi_min = 5000;

  // price = k1 * e^1.5 + k2 / l^2
  double price_k1 = 3.0;
  double price_k2 = 10000.0;

  // fraction of VUs whose true departure deviates from the declared stay,
  // by a log-symmetric uniform factor
  double vu_outlier_fraction = 0.10;
  double vu_outlier_factor_lo = 0.25;
  double vu_outlier_factor_hi = 2.5;

  // Poisson arrival rates are derived from these windows: N tasks over
  // task_window, M vehicles over vu_window. The vehicle window runs longer
  // so late tasks still see supply.
  Minutes task_window_min = 10080;
  Minutes vu_window_min = 14400;

  Minutes config_delay_min = 5;  // VM setup time after arrival
};

struct VuTrace {
  std::vector<VehicularUnit> vus;  // sorted by arrival
};

struct TaskTrace {
  std::vector<Task> tasks;  // sorted by arrival
};

// residency class from the declared stay; thresholds at 3h and 6h,
// medium inclusive on both ends
VuClassTag classify_vu(Minutes declared_stay_min);

VuTrace gen_vus(const WorkloadConfig& cfg, std::uint64_t seed);
TaskTrace gen_tasks(const WorkloadConfig& cfg, std::uint64_t seed);

// the revenue a task offers, given its execution time and laxity
Money task_price(double exec_min, double laxity_min, double k1, double k2);

struct IngestOptions {
  Minutes day_window_min = 1440;  // histogram rows expand within this window per date
  Minutes config_delay_min = 5;
  std::uint64_t seed = 0;
};

// Real parking data, auto-detected by header:
//   event form:     arrival_min,stay_min             one VU per row
//   histogram form: date,stay_bucket_min_lo,stay_bucket_min_hi,count
// Histogram rows expand to `count` VUs with integer stays uniform in
// (lo, hi] and arrivals uniform over that date's day window.
VuTrace ingest_parking_trace(std::istream& in, const IngestOptions& opt);
VuTrace ingest_parking_trace_file(const std::string& path, const IngestOptions& opt);

// trace serialization; headers fixed, LF endings, money with 3 decimals
std::string vu_trace_csv(const VuTrace& t);
VuTrace vu_trace_from_csv(std::string_view text, Minutes config_delay_min);
std::string task_trace_csv(const TaskTrace& t);
TaskTrace task_trace_from_csv(std::string_view text);

}  // namespace vcsim::workload
