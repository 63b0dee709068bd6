#include "vcsim/workload.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "vcsim/rng.hpp"

namespace vcsim::workload {

VuClassTag classify_vu(Minutes declared_stay_min) {
  if (declared_stay_min < 180) return VuClassTag::Srt;
  if (declared_stay_min <= 360) return VuClassTag::Mrt;
  return VuClassTag::Lrt;
}

namespace {

std::size_t draw_class(std::mt19937_64& g, const std::array<VuClass, 3>& classes) {
  const double u = uniform01(g);
  double acc = 0.0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    acc += classes[i].population_share;
    if (u < acc) return i;
  }
  return classes.size() - 1;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string f;
  std::istringstream in(line);
  while (std::getline(in, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::int64_t parse_i64(const std::string& s, int lineno, const char* what) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("trace csv: bad ") + what +
                             " at line " + std::to_string(lineno));
  }
}

}  // namespace

VuTrace gen_vus(const WorkloadConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 g(substream_seed(seed, "vu-gen"));
  const double inter_mean =
      static_cast<double>(cfg.vu_window_min) / std::max<std::int64_t>(1, cfg.num_vus);

  VuTrace trace;
  trace.vus.reserve(static_cast<std::size_t>(cfg.num_vus));
  double t = 0.0;
  for (std::int64_t i = 0; i < cfg.num_vus; ++i) {
    t += exponential(g, inter_mean);
    VehicularUnit vu;
    vu.id = i;
    vu.arrival_min = std::llround(t);
    const VuClass& cls = cfg.classes[draw_class(g, cfg.classes)];
    vu.cls = cls.tag;
    const double mean = cls.mean_residency_min;
    vu.declared_stay_min = std::max<Minutes>(1, std::llround(exponential(g, mean)));
    if (uniform01(g) < cfg.vu_outlier_fraction) {
      // the driver's plans changed: true stay deviates by a uniform factor
      const double f = uniform_real(g, cfg.vu_outlier_factor_lo, cfg.vu_outlier_factor_hi);
      const Minutes stay = std::max<Minutes>(
          1, std::llround(static_cast<double>(vu.declared_stay_min) * f));
      vu.actual_departure_min = vu.arrival_min + stay;
    } else {
      vu.actual_departure_min = vu.arrival_min + vu.declared_stay_min;
    }
    vu.config_done_min = vu.arrival_min + cfg.config_delay_min;
    trace.vus.push_back(vu);
  }
  return trace;
}

Money task_price(double exec_min, double laxity_min, double k1, double k2) {
  return Money::from_double(k1 * std::pow(exec_min, 1.5) +
                            k2 / (laxity_min * laxity_min));
}

TaskTrace gen_tasks(const WorkloadConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 g(substream_seed(seed, "task-gen"));
  const double inter_mean =
      static_cast<double>(cfg.task_window_min) / std::max<std::int64_t>(1, cfg.num_tasks);

  TaskTrace trace;
  trace.tasks.reserve(static_cast<std::size_t>(cfg.num_tasks));
  double t = 0.0;
  for (std::int64_t i = 0; i < cfg.num_tasks; ++i) {
    t += exponential(g, inter_mean);
    Task task;
    task.id = i;
    task.arrival_min = std::llround(t);

    double e;
    if (uniform01(g) < cfg.exec_outlier_fraction) {
      e = uniform_real(g, cfg.exec_outlier_lo_min, cfg.exec_outlier_hi_min);
    } else {
      // truncate by resampling so the shape inside the range stays clean
      do {
        e = exponential(g, cfg.mean_exec_min);
      } while (e < 1.0 || e > cfg.max_exec_min);
    }
    task.exec_min = std::clamp<Minutes>(std::llround(e), 1,
                                        static_cast<Minutes>(cfg.max_exec_min));

    const Minutes laxity =
        std::llround(cfg.laxity_exec_fraction * static_cast<double>(task.exec_min)) +
        uniform_int(g, cfg.laxity_lo_min, cfg.laxity_hi_min);
    task.deadline_min = task.arrival_min + task.exec_min + laxity;
    task.revenue = task_price(static_cast<double>(task.exec_min),
                              static_cast<double>(laxity), cfg.price_k1, cfg.price_k2);
    task.remaining_exec_min = task.exec_min;
    trace.tasks.push_back(task);
  }
  return trace;
}

VuTrace ingest_parking_trace(std::istream& in, const IngestOptions& opt) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("parking trace: missing header at line 1");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const bool event_form = (line == "arrival_min,stay_min");
  const bool hist_form = (line == "date,stay_bucket_min_lo,stay_bucket_min_hi,count");
  if (!event_form && !hist_form)
    throw std::runtime_error("parking trace: unrecognized header at line 1");

  std::mt19937_64 g(substream_seed(opt.seed, "ingest"));
  std::vector<std::pair<Minutes, Minutes>> rows;  // (arrival, stay)
  std::vector<std::string> day_order;             // distinct dates, first seen

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);

    if (event_form) {
      if (f.size() != 2)
        throw std::runtime_error("parking trace: bad field count at line " +
                                 std::to_string(lineno));
      const Minutes arrival = parse_i64(f[0], lineno, "arrival");
      const Minutes stay = parse_i64(f[1], lineno, "stay");
      if (arrival < 0 || stay <= 0)
        throw std::runtime_error("parking trace: invalid values at line " +
                                 std::to_string(lineno));
      rows.emplace_back(arrival, stay);
      continue;
    }

    if (f.size() != 4)
      throw std::runtime_error("parking trace: bad field count at line " +
                               std::to_string(lineno));
    const Minutes lo = parse_i64(f[1], lineno, "bucket lo");
    const Minutes hi = parse_i64(f[2], lineno, "bucket hi");
    const std::int64_t count = parse_i64(f[3], lineno, "count");
    if (count < 0)
      throw std::runtime_error("parking trace: negative count at line " +
                               std::to_string(lineno));
    if (lo < 0 || hi <= lo)
      throw std::runtime_error("parking trace: bad bucket at line " +
                               std::to_string(lineno));

    auto it = std::find(day_order.begin(), day_order.end(), f[0]);
    std::int64_t day;
    if (it == day_order.end()) {
      day = static_cast<std::int64_t>(day_order.size());
      day_order.push_back(f[0]);
    } else {
      day = it - day_order.begin();
    }
    const Minutes day_start = day * opt.day_window_min;
    for (std::int64_t c = 0; c < count; ++c) {
      // uniform arrivals within the day are a Poisson process conditioned on
      // the day's count; stays land strictly above the bucket floor
      const Minutes arrival = day_start + uniform_int(g, 0, opt.day_window_min - 1);
      const Minutes stay = uniform_int(g, lo + 1, hi);
      rows.emplace_back(arrival, stay);
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  VuTrace trace;
  trace.vus.reserve(rows.size());
  std::int64_t id = 0;
  for (const auto& [arrival, stay] : rows) {
    VehicularUnit vu;
    vu.id = id++;
    vu.cls = classify_vu(stay);
    vu.arrival_min = arrival;
    vu.declared_stay_min = stay;
    vu.actual_departure_min = arrival + stay;
    vu.config_done_min = arrival + opt.config_delay_min;
    trace.vus.push_back(vu);
  }
  return trace;
}

VuTrace ingest_parking_trace_file(const std::string& path, const IngestOptions& opt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parking trace: cannot open " + path);
  return ingest_parking_trace(in, opt);
}

std::string vu_trace_csv(const VuTrace& t) {
  std::string out = "vu_id,class,arrival_min,declared_stay_min,actual_departure_min\n";
  char buf[160];
  for (const auto& v : t.vus) {
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%s,%" PRId64 ",%" PRId64 ",%" PRId64 "\n",
                  v.id, std::string(to_string(v.cls)).c_str(), v.arrival_min,
                  v.declared_stay_min, v.actual_departure_min);
    out += buf;
  }
  return out;
}

VuTrace vu_trace_from_csv(std::string_view text, Minutes config_delay_min) {
  VuTrace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "vu_id,class,arrival_min,declared_stay_min,actual_departure_min")
        throw std::runtime_error("vu trace csv: bad header at line 1");
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 5)
      throw std::runtime_error("vu trace csv: bad field count at line " +
                               std::to_string(lineno));
    VehicularUnit vu;
    vu.id = parse_i64(f[0], lineno, "vu id");
    const auto cls = vu_class_from_string(f[1]);
    if (!cls)
      throw std::runtime_error("vu trace csv: unknown class at line " +
                               std::to_string(lineno));
    vu.cls = *cls;
    vu.arrival_min = parse_i64(f[2], lineno, "arrival");
    vu.declared_stay_min = parse_i64(f[3], lineno, "declared stay");
    vu.actual_departure_min = parse_i64(f[4], lineno, "departure");
    vu.config_done_min = vu.arrival_min + config_delay_min;
    trace.vus.push_back(vu);
  }
  return trace;
}

std::string task_trace_csv(const TaskTrace& t) {
  std::string out = "task_id,arrival_min,exec_min,deadline_min,revenue\n";
  char buf[200];
  for (const auto& task : t.tasks) {
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%" PRId64 ",%" PRId64 ",%" PRId64 ",%s\n",
                  task.id, task.arrival_min, task.exec_min, task.deadline_min,
                  task.revenue.str().c_str());
    out += buf;
  }
  return out;
}

TaskTrace task_trace_from_csv(std::string_view text) {
  TaskTrace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "task_id,arrival_min,exec_min,deadline_min,revenue")
        throw std::runtime_error("task trace csv: bad header at line 1");
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 5)
      throw std::runtime_error("task trace csv: bad field count at line " +
                               std::to_string(lineno));
    Task task;
    task.id = parse_i64(f[0], lineno, "task id");
    task.arrival_min = parse_i64(f[1], lineno, "arrival");
    task.exec_min = parse_i64(f[2], lineno, "exec");
    task.deadline_min = parse_i64(f[3], lineno, "deadline");
    if (task.exec_min <= 0)
      throw std::runtime_error("task trace csv: nonpositive exec at line " +
                               std::to_string(lineno));
    try {
      std::size_t pos = 0;
      const double r = std::stod(f[4], &pos);
      if (pos != f[4].size()) throw std::invalid_argument(f[4]);
      task.revenue = Money::from_double(r);
    } catch (const std::exception&) {
      throw std::runtime_error("task trace csv: bad revenue at line " +
                               std::to_string(lineno));
    }
    task.remaining_exec_min = task.exec_min;
    trace.tasks.push_back(task);
  }
  return trace;
}

}  // namespace vcsim::workload
