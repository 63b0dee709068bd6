#include "vcsim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "vcsim/rng.hpp"

namespace vcsim::config {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("config: " + msg + " at line " + std::to_string(line));
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::int64_t p_i64(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const std::int64_t x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t p_u64(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size() || v.empty() || v[0] == '-')
      throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(line, "expected a non-negative integer, got '" + v + "'");
  }
}

double p_dbl(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

bool p_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<std::int64_t> p_i64_list(const std::string& v, int line) {
  std::vector<std::int64_t> out;
  for (const auto& s : split_commas(v)) out.push_back(p_i64(s, line));
  if (out.empty()) fail(line, "empty list");
  return out;
}

std::vector<double> p_dbl_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& s : split_commas(v)) out.push_back(p_dbl(s, line));
  if (out.empty()) fail(line, "empty list");
  return out;
}

// "1..20" ranges and plain values, comma separated
std::vector<std::uint64_t> p_seed_list(const std::string& v, int line) {
  std::vector<std::uint64_t> out;
  for (const auto& s : split_commas(v)) {
    const std::size_t dots = s.find("..");
    if (dots == std::string::npos) {
      out.push_back(p_u64(s, line));
      continue;
    }
    const std::uint64_t a = p_u64(trim(s.substr(0, dots)), line);
    const std::uint64_t b = p_u64(trim(s.substr(dots + 2)), line);
    if (b < a) fail(line, "descending seed range '" + s + "'");
    if (b - a >= 100000) fail(line, "seed range too large '" + s + "'");
    for (std::uint64_t x = a; x <= b; ++x) out.push_back(x);
  }
  if (out.empty()) fail(line, "empty seed list");
  return out;
}

std::vector<policy::Ordering> p_orderings(const std::string& v, int line) {
  if (v == "all")
    return {policy::kAllOrderings.begin(), policy::kAllOrderings.end()};
  std::vector<policy::Ordering> out;
  for (const auto& s : split_commas(v)) {
    const auto o = policy::ordering_from_string(s);
    if (!o) fail(line, "unknown ordering '" + s + "'");
    out.push_back(*o);
  }
  if (out.empty()) fail(line, "empty ordering list");
  return out;
}

struct KeyHandlerCtx {
  RunConfig& cfg;
  const std::string& section;
  const std::string& key;
  const std::string& value;
  int line;
};

void apply_workload(KeyHandlerCtx c) {
  auto& w = c.cfg.workload;
  const auto& v = c.value;
  const int ln = c.line;
  if (c.key == "num_tasks") w.num_tasks = p_i64(v, ln);
  else if (c.key == "num_vus") w.num_vus = p_i64(v, ln);
  else if (c.key == "srt_mean_min") w.classes[0].mean_residency_min = p_dbl(v, ln);
  else if (c.key == "mrt_mean_min") w.classes[1].mean_residency_min = p_dbl(v, ln);
  else if (c.key == "lrt_mean_min") w.classes[2].mean_residency_min = p_dbl(v, ln);
  else if (c.key == "srt_share") w.classes[0].population_share = p_dbl(v, ln);
  else if (c.key == "mrt_share") w.classes[1].population_share = p_dbl(v, ln);
  else if (c.key == "lrt_share") w.classes[2].population_share = p_dbl(v, ln);
  else if (c.key == "mean_exec_min") w.mean_exec_min = p_dbl(v, ln);
  else if (c.key == "max_exec_min") w.max_exec_min = p_dbl(v, ln);
  else if (c.key == "exec_outlier_fraction") w.exec_outlier_fraction = p_dbl(v, ln);
  else if (c.key == "exec_outlier_lo_min") w.exec_outlier_lo_min = p_dbl(v, ln);
  else if (c.key == "exec_outlier_hi_min") w.exec_outlier_hi_min = p_dbl(v, ln);
  else if (c.key == "laxity_exec_fraction") w.laxity_exec_fraction = p_dbl(v, ln);
  else if (c.key == "laxity_lo_min") w.laxity_lo_min = p_i64(v, ln);
  else if (c.key == "laxity_hi_min") w.laxity_hi_min = p_i64(v, ln);
  else if (c.key == "price_k1") w.price_k1 = p_dbl(v, ln);
  else if (c.key == "price_k2") w.price_k2 = p_dbl(v, ln);
  else if (c.key == "vu_outlier_fraction") w.vu_outlier_fraction = p_dbl(v, ln);
  else if (c.key == "vu_outlier_factor_lo") w.vu_outlier_factor_lo = p_dbl(v, ln);
  else if (c.key == "vu_outlier_factor_hi") w.vu_outlier_factor_hi = p_dbl(v, ln);
  else if (c.key == "task_window_min") w.task_window_min = p_i64(v, ln);
  else if (c.key == "vu_window_min") w.vu_window_min = p_i64(v, ln);
  else if (c.key == "config_delay_min") w.config_delay_min = p_i64(v, ln);
  else fail(ln, "unknown key '" + c.key + "' in [workload]");
}

void apply_chain(KeyHandlerCtx c) {
  auto& ch = c.cfg.chain;
  if (c.key == "t_mttr_min") ch.t_mttr_min = p_i64(c.value, c.line);
  else if (c.key == "step_min") ch.step_min = p_i64(c.value, c.line);
  else if (c.key == "lut_q") ch.lut_q = p_dbl(c.value, c.line);
  else if (c.key == "max_horizon_doublings")
    ch.max_horizon_doublings = static_cast<int>(p_i64(c.value, c.line));
  else if (c.key == "state_cap") ch.state_cap = p_i64(c.value, c.line);
  else fail(c.line, "unknown key '" + c.key + "' in [chain]");
}

void apply_policy(KeyHandlerCtx c) {
  auto& p = c.cfg.policy;
  const auto& v = c.value;
  const int ln = c.line;
  if (c.key == "delta") p.delta = p_dbl(v, ln);
  else if (c.key == "e_threshold_critical_min") p.e_threshold_critical_min = p_i64(v, ln);
  else if (c.key == "ordering") {
    const auto o = policy::ordering_from_string(v);
    if (!o) fail(ln, "unknown ordering '" + v + "'");
    p.ordering = *o;
  } else if (c.key == "reserved_lrt_fraction") p.reserved_lrt_fraction = p_dbl(v, ln);
  else if (c.key == "cost_per_vu_min") p.cost_per_vu_min = Money::from_double(p_dbl(v, ln));
  else if (c.key == "scan_period_min") p.scan_period_min = p_i64(v, ln);
  else if (c.key == "t_vu_ewma_alpha") p.t_vu_ewma_alpha = p_dbl(v, ln);
  else if (c.key == "srt_n_min") p.redundancy_bounds[0].n_min = static_cast<int>(p_i64(v, ln));
  else if (c.key == "srt_n_max") p.redundancy_bounds[0].n_max = static_cast<int>(p_i64(v, ln));
  else if (c.key == "mrt_n_min") p.redundancy_bounds[1].n_min = static_cast<int>(p_i64(v, ln));
  else if (c.key == "mrt_n_max") p.redundancy_bounds[1].n_max = static_cast<int>(p_i64(v, ln));
  else if (c.key == "lrt_n_min") p.redundancy_bounds[2].n_min = static_cast<int>(p_i64(v, ln));
  else if (c.key == "lrt_n_max") p.redundancy_bounds[2].n_max = static_cast<int>(p_i64(v, ln));
  else fail(ln, "unknown key '" + c.key + "' in [policy]");
}

void apply_engine(KeyHandlerCtx c) {
  auto& e = c.cfg.engine;
  const auto& v = c.value;
  const int ln = c.line;
  if (c.key == "mode") {
    if (v == "proposed") e.mode = engine::Mode::Proposed;
    else if (v == "sota") e.mode = engine::Mode::Sota;
    else fail(ln, "mode must be 'proposed' or 'sota', got '" + v + "'");
  } else if (c.key == "num_vcs") e.num_vcs = static_cast<int>(p_i64(v, ln));
  else if (c.key == "horizon_min") e.horizon_min = p_i64(v, ln);
  else if (c.key == "speed_variation") e.speed_variation = p_bool(v, ln);
  else if (c.key == "speed_lo") e.speed_lo = p_dbl(v, ln);
  else if (c.key == "speed_hi") e.speed_hi = p_dbl(v, ln);
  else if (c.key == "sota_redundancy") e.sota_redundancy = static_cast<int>(p_i64(v, ln));
  else fail(ln, "unknown key '" + c.key + "' in [engine]");
}

void apply_run(KeyHandlerCtx c) {
  auto& r = c.cfg.run;
  if (c.key == "seed") r.seed = p_u64(c.value, c.line);
  else if (c.key == "seeds") r.seeds = p_seed_list(c.value, c.line);
  else if (c.key == "orderings") r.orderings = p_orderings(c.value, c.line);
  else fail(c.line, "unknown key '" + c.key + "' in [run]");
}

void apply_sweep(KeyHandlerCtx c) {
  auto& s = c.cfg.sweep;
  if (c.key == "task_counts") s.task_counts = p_i64_list(c.value, c.line);
  else if (c.key == "vu_counts") s.vu_counts = p_i64_list(c.value, c.line);
  else if (c.key == "exec_multipliers") s.exec_multipliers = p_dbl_list(c.value, c.line);
  else if (c.key == "residency_multipliers")
    s.residency_multipliers = p_dbl_list(c.value, c.line);
  else fail(c.line, "unknown key '" + c.key + "' in [sweep]");
}

void apply_ingest(KeyHandlerCtx c) {
  if (c.key == "parking_trace") c.cfg.ingest.parking_trace = c.value;
  else if (c.key == "day_window_min") c.cfg.ingest.day_window_min = p_i64(c.value, c.line);
  else fail(c.line, "unknown key '" + c.key + "' in [ingest]");
}

void apply_traces(KeyHandlerCtx c) {
  if (c.key == "vu_trace") c.cfg.traces.vu_trace = c.value;
  else if (c.key == "task_trace") c.cfg.traces.task_trace = c.value;
  else if (c.key == "lut") c.cfg.traces.lut = c.value;
  else fail(c.line, "unknown key '" + c.key + "' in [traces]");
}

std::string fmt_dbl(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(ln, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "workload" && section != "chain" && section != "policy" &&
          section != "engine" && section != "run" && section != "sweep" &&
          section != "ingest" && section != "traces")
        fail(ln, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(ln, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(ln, "empty key");
    if (section.empty()) fail(ln, "key '" + key + "' before any [section]");

    KeyHandlerCtx c{cfg, section, key, value, ln};
    if (section == "workload") apply_workload(c);
    else if (section == "chain") apply_chain(c);
    else if (section == "policy") apply_policy(c);
    else if (section == "engine") apply_engine(c);
    else if (section == "run") apply_run(c);
    else if (section == "sweep") apply_sweep(c);
    else if (section == "ingest") apply_ingest(c);
    else apply_traces(c);
  }

  // derived fields kept coherent for every consumer
  cfg.engine.t_mttr_min = cfg.chain.t_mttr_min;
  cfg.engine.lrt_residency_window_min = cfg.workload.classes[2].mean_residency_min;
  if (cfg.run.seeds.empty())
    for (std::uint64_t s = 1; s <= 20; ++s) cfg.run.seeds.push_back(s);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return parse_config(in);
}

void validate(const RunConfig& cfg) {
  const auto bad = [](const std::string& msg) {
    throw std::runtime_error("config: " + msg);
  };
  const auto& w = cfg.workload;
  if (w.num_tasks < 0 || w.num_vus < 0) bad("counts must be non-negative");
  double share_sum = 0.0;
  for (const auto& c : w.classes) {
    if (c.mean_residency_min <= 0) bad("class residency means must be positive");
    if (c.population_share < 0) bad("class shares must be non-negative");
    share_sum += c.population_share;
  }
  if (std::abs(share_sum - 1.0) > 1e-6) bad("class shares must sum to 1");
  if (w.mean_exec_min <= 0 || w.max_exec_min < 1) bad("execution time settings invalid");
  if (w.exec_outlier_fraction < 0 || w.exec_outlier_fraction > 1)
    bad("exec_outlier_fraction must be in [0,1]");
  if (w.exec_outlier_lo_min < 1 || w.exec_outlier_hi_min < w.exec_outlier_lo_min)
    bad("exec outlier range invalid");
  if (w.laxity_exec_fraction < 0 || w.laxity_lo_min < 0 ||
      w.laxity_hi_min < w.laxity_lo_min)
    bad("laxity settings invalid");
  if (w.price_k1 < 0 || w.price_k2 < 0) bad("price coefficients must be non-negative");
  if (w.vu_outlier_fraction < 0 || w.vu_outlier_fraction > 1)
    bad("vu_outlier_fraction must be in [0,1]");
  if (w.vu_outlier_factor_lo <= 0 || w.vu_outlier_factor_hi < w.vu_outlier_factor_lo)
    bad("vu outlier factor range invalid");
  if (w.task_window_min < 1 || w.vu_window_min < 1) bad("windows must be >= 1 minute");
  if (w.config_delay_min < 0) bad("config_delay_min must be non-negative");

  const auto& ch = cfg.chain;
  if (ch.t_mttr_min < 1 || ch.step_min < 1) bad("chain timing must be >= 1 minute");
  if (ch.lut_q <= 0 || ch.lut_q >= 1) bad("lut_q must be in (0,1)");
  if (ch.max_horizon_doublings < 0) bad("max_horizon_doublings must be >= 0");
  if (ch.state_cap < 4) bad("state_cap too small");

  const auto& p = cfg.policy;
  if (p.delta < 0) bad("delta must be >= 0");
  if (p.e_threshold_critical_min < 0) bad("e_threshold_critical_min must be >= 0");
  if (p.reserved_lrt_fraction < 0 || p.reserved_lrt_fraction > 1)
    bad("reserved_lrt_fraction must be in [0,1]");
  if (p.cost_per_vu_min.milli < 0) bad("cost_per_vu_min must be >= 0");
  if (p.scan_period_min < 1) bad("scan_period_min must be >= 1");
  if (p.t_vu_ewma_alpha < 0 || p.t_vu_ewma_alpha > 1)
    bad("t_vu_ewma_alpha must be in [0,1]");
  for (const auto& b : p.redundancy_bounds)
    if (b.n_min < 1 || b.n_max < b.n_min) bad("redundancy bounds invalid");

  const auto& e = cfg.engine;
  if (e.num_vcs < 1) bad("num_vcs must be >= 1");
  if (e.horizon_min < 0) bad("horizon_min must be >= 0");
  if (e.speed_lo <= 0 || e.speed_hi < e.speed_lo) bad("speed range invalid");
  if (e.sota_redundancy < 1) bad("sota_redundancy must be >= 1");

  if (cfg.run.seeds.empty()) bad("seeds must be non-empty");
  if (cfg.run.orderings.empty()) bad("orderings must be non-empty");
  if (cfg.sweep.task_counts.empty() || cfg.sweep.vu_counts.empty() ||
      cfg.sweep.exec_multipliers.empty() || cfg.sweep.residency_multipliers.empty())
    bad("sweep axes must be non-empty");
  for (const std::int64_t n : cfg.sweep.task_counts)
    if (n < 0) bad("task_counts must be non-negative");
  for (const std::int64_t m : cfg.sweep.vu_counts)
    if (m < 0) bad("vu_counts must be non-negative");
  for (const double x : cfg.sweep.exec_multipliers)
    if (x <= 0) bad("exec_multipliers must be positive");
  for (const double x : cfg.sweep.residency_multipliers)
    if (x <= 0) bad("residency_multipliers must be positive");

  for (const std::string* path :
       {&cfg.ingest.parking_trace, &cfg.traces.vu_trace, &cfg.traces.task_trace,
        &cfg.traces.lut}) {
    if (!path->empty() && !std::filesystem::exists(*path))
      bad("referenced file does not exist: " + *path);
  }
  if (cfg.ingest.day_window_min < 1) bad("day_window_min must be >= 1");
}

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream out;
  const auto& w = cfg.workload;
  out << "[workload]\n"
      << "num_tasks = " << w.num_tasks << "\n"
      << "num_vus = " << w.num_vus << "\n"
      << "srt_mean_min = " << fmt_dbl(w.classes[0].mean_residency_min) << "\n"
      << "mrt_mean_min = " << fmt_dbl(w.classes[1].mean_residency_min) << "\n"
      << "lrt_mean_min = " << fmt_dbl(w.classes[2].mean_residency_min) << "\n"
      << "srt_share = " << fmt_dbl(w.classes[0].population_share) << "\n"
      << "mrt_share = " << fmt_dbl(w.classes[1].population_share) << "\n"
      << "lrt_share = " << fmt_dbl(w.classes[2].population_share) << "\n"
      << "mean_exec_min = " << fmt_dbl(w.mean_exec_min) << "\n"
      << "max_exec_min = " << fmt_dbl(w.max_exec_min) << "\n"
      << "exec_outlier_fraction = " << fmt_dbl(w.exec_outlier_fraction) << "\n"
      << "exec_outlier_lo_min = " << fmt_dbl(w.exec_outlier_lo_min) << "\n"
      << "exec_outlier_hi_min = " << fmt_dbl(w.exec_outlier_hi_min) << "\n"
      << "laxity_exec_fraction = " << fmt_dbl(w.laxity_exec_fraction) << "\n"
      << "laxity_lo_min = " << w.laxity_lo_min << "\n"
      << "laxity_hi_min = " << w.laxity_hi_min << "\n"
      << "price_k1 = " << fmt_dbl(w.price_k1) << "\n"
      << "price_k2 = " << fmt_dbl(w.price_k2) << "\n"
      << "vu_outlier_fraction = " << fmt_dbl(w.vu_outlier_fraction) << "\n"
      << "vu_outlier_factor_lo = " << fmt_dbl(w.vu_outlier_factor_lo) << "\n"
      << "vu_outlier_factor_hi = " << fmt_dbl(w.vu_outlier_factor_hi) << "\n"
      << "task_window_min = " << w.task_window_min << "\n"
      << "vu_window_min = " << w.vu_window_min << "\n"
      << "config_delay_min = " << w.config_delay_min << "\n";

  const auto& ch = cfg.chain;
  out << "[chain]\n"
      << "t_mttr_min = " << ch.t_mttr_min << "\n"
      << "step_min = " << ch.step_min << "\n"
      << "lut_q = " << fmt_dbl(ch.lut_q) << "\n"
      << "max_horizon_doublings = " << ch.max_horizon_doublings << "\n"
      << "state_cap = " << ch.state_cap << "\n";

  const auto& p = cfg.policy;
  out << "[policy]\n"
      << "delta = " << fmt_dbl(p.delta) << "\n"
      << "e_threshold_critical_min = " << p.e_threshold_critical_min << "\n"
      << "ordering = " << policy::to_string(p.ordering) << "\n"
      << "reserved_lrt_fraction = " << fmt_dbl(p.reserved_lrt_fraction) << "\n"
      << "cost_per_vu_min = " << p.cost_per_vu_min.str() << "\n"
      << "scan_period_min = " << p.scan_period_min << "\n"
      << "t_vu_ewma_alpha = " << fmt_dbl(p.t_vu_ewma_alpha) << "\n"
      << "srt_n_min = " << p.redundancy_bounds[0].n_min << "\n"
      << "srt_n_max = " << p.redundancy_bounds[0].n_max << "\n"
      << "mrt_n_min = " << p.redundancy_bounds[1].n_min << "\n"
      << "mrt_n_max = " << p.redundancy_bounds[1].n_max << "\n"
      << "lrt_n_min = " << p.redundancy_bounds[2].n_min << "\n"
      << "lrt_n_max = " << p.redundancy_bounds[2].n_max << "\n";

  const auto& e = cfg.engine;
  out << "[engine]\n"
      << "mode = " << engine::to_string(e.mode) << "\n"
      << "num_vcs = " << e.num_vcs << "\n"
      << "horizon_min = " << e.horizon_min << "\n"
      << "speed_variation = " << (e.speed_variation ? "true" : "false") << "\n"
      << "speed_lo = " << fmt_dbl(e.speed_lo) << "\n"
      << "speed_hi = " << fmt_dbl(e.speed_hi) << "\n"
      << "sota_redundancy = " << e.sota_redundancy << "\n";

  out << "[run]\n"
      << "seed = " << cfg.run.seed << "\n"
      << "seeds = ";
  for (std::size_t i = 0; i < cfg.run.seeds.size(); ++i)
    out << (i ? "," : "") << cfg.run.seeds[i];
  out << "\n" << "orderings = ";
  for (std::size_t i = 0; i < cfg.run.orderings.size(); ++i)
    out << (i ? "," : "") << policy::to_string(cfg.run.orderings[i]);
  out << "\n";

  const auto& s = cfg.sweep;
  out << "[sweep]\n" << "task_counts = ";
  for (std::size_t i = 0; i < s.task_counts.size(); ++i)
    out << (i ? "," : "") << s.task_counts[i];
  out << "\n" << "vu_counts = ";
  for (std::size_t i = 0; i < s.vu_counts.size(); ++i)
    out << (i ? "," : "") << s.vu_counts[i];
  out << "\n" << "exec_multipliers = ";
  for (std::size_t i = 0; i < s.exec_multipliers.size(); ++i)
    out << (i ? "," : "") << fmt_dbl(s.exec_multipliers[i]);
  out << "\n" << "residency_multipliers = ";
  for (std::size_t i = 0; i < s.residency_multipliers.size(); ++i)
    out << (i ? "," : "") << fmt_dbl(s.residency_multipliers[i]);
  out << "\n";

  out << "[ingest]\n"
      << "parking_trace = " << cfg.ingest.parking_trace << "\n"
      << "day_window_min = " << cfg.ingest.day_window_min << "\n";
  out << "[traces]\n"
      << "vu_trace = " << cfg.traces.vu_trace << "\n"
      << "task_trace = " << cfg.traces.task_trace << "\n"
      << "lut = " << cfg.traces.lut << "\n";
  return out.str();
}

std::string config_digest(const RunConfig& cfg) {
  const std::uint64_t h = fnv1a64(canonical_config(cfg));
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vcsim::config
