#include "vcsim/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "vcsim/engine.hpp"

namespace vcsim::driver {

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// temp-then-rename so a crash or a parallel sweep never leaves a torn file
void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double money_units(Money m) { return static_cast<double>(m.milli) / 1000.0; }

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

// linear-interpolation quantile over a sorted sample
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Runs cells 0..count-1 across up to `jobs` threads. Any cell failure is
// rethrown on the calling thread after all workers drain.
void parallel_cells(std::size_t count, int jobs,
                    const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  std::vector<std::string> errors(count);
  const auto guarded = [&](std::size_t i) {
    try {
      body(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    } catch (...) {
      errors[i] = "unknown error";
    }
  };

  const std::size_t nthreads =
      std::min<std::size_t>(std::max(jobs, 1), count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (std::size_t w = 0; w < nthreads; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
          guarded(i);
      });
    for (auto& t : workers) t.join();
  }
  for (std::size_t i = 0; i < count; ++i)
    if (!errors[i].empty())
      throw std::runtime_error("cell " + std::to_string(i) + ": " + errors[i]);
}

reliability::LutBuildParams lut_params(const config::RunConfig& cfg) {
  reliability::LutBuildParams bp;
  bp.q = cfg.chain.lut_q;
  bp.t_mttr = cfg.chain.t_mttr_min;
  bp.step_min = cfg.chain.step_min;
  bp.max_horizon_doublings = cfg.chain.max_horizon_doublings;
  bp.state_cap = cfg.chain.state_cap;
  return bp;
}

reliability::Lut build_lut_for(const config::RunConfig& cfg,
                               const std::array<VuClass, 3>& classes) {
  return reliability::build_lut(classes, cfg.policy.redundancy_bounds,
                                lut_params(cfg));
}

struct SimInputs {
  workload::VuTrace vus;
  workload::TaskTrace tasks;
  Money offered;  // sum of revenue over the whole task trace
};

Money offered_revenue(const workload::TaskTrace& t) {
  Money sum;
  for (const auto& task : t.tasks) sum = sum + task.revenue;
  return sum;
}

SimInputs make_inputs(const config::RunConfig& cfg,
                      const workload::WorkloadConfig& wcfg, std::uint64_t seed) {
  SimInputs in;
  if (!cfg.traces.vu_trace.empty()) {
    in.vus = workload::vu_trace_from_csv(slurp(cfg.traces.vu_trace),
                                         wcfg.config_delay_min);
  } else if (!cfg.ingest.parking_trace.empty()) {
    workload::IngestOptions opt;
    opt.day_window_min = cfg.ingest.day_window_min;
    opt.config_delay_min = wcfg.config_delay_min;
    opt.seed = seed;
    in.vus = workload::ingest_parking_trace_file(cfg.ingest.parking_trace, opt);
  } else {
    in.vus = workload::gen_vus(wcfg, seed);
  }
  in.tasks = !cfg.traces.task_trace.empty()
                 ? workload::task_trace_from_csv(slurp(cfg.traces.task_trace))
                 : workload::gen_tasks(wcfg, seed);
  in.offered = offered_revenue(in.tasks);
  return in;
}

engine::SimReport run_one(const SimInputs& in, const config::RunConfig& cfg,
                          const workload::WorkloadConfig& wcfg,
                          policy::Ordering ordering, engine::Mode mode,
                          std::uint64_t seed, const reliability::Lut& lut,
                          std::ostream* event_log) {
  policy::PolicyConfig pcfg = cfg.policy;
  pcfg.ordering = ordering;
  engine::EngineConfig ecfg = cfg.engine;
  ecfg.mode = mode;
  ecfg.t_mttr_min = cfg.chain.t_mttr_min;
  ecfg.lrt_residency_window_min = wcfg.classes[2].mean_residency_min;
  auto rep = engine::run(in.vus, in.tasks, pcfg, lut, ecfg, seed, event_log);
  rep.config_digest = config::config_digest(cfg);
  return rep;
}

}  // namespace

reliability::Lut make_lut(const config::RunConfig& cfg) {
  if (!cfg.traces.lut.empty())
    return reliability::Lut::from_csv(slurp(cfg.traces.lut));
  return build_lut_for(cfg, cfg.workload.classes);
}

workload::VuTrace make_vu_trace(const config::RunConfig& cfg, std::uint64_t seed) {
  return make_inputs(cfg, cfg.workload, seed).vus;
}

workload::TaskTrace make_task_trace(const config::RunConfig& cfg,
                                    std::uint64_t seed) {
  if (!cfg.traces.task_trace.empty())
    return workload::task_trace_from_csv(slurp(cfg.traces.task_trace));
  return workload::gen_tasks(cfg.workload, seed);
}

int cmd_lut(const config::RunConfig& cfg, const std::string& out_dir,
            std::ostream& out, std::ostream& err) {
  try {
    fs::create_directories(out_dir);
    const auto lut = build_lut_for(cfg, cfg.workload.classes);
    const fs::path lut_path = fs::path(out_dir) / "lut.csv";
    atomic_write(lut_path, lut.to_csv());
    out << "lut: wrote " << lut_path.string() << " (" << lut.entries.size()
        << " rows, q=" << cfg.chain.lut_q << ")\n";

    // companion curve per cell, thinned to plotting density
    for (const auto& e : lut.entries) {
      const auto chain = reliability::build_chain(e.params, cfg.chain.state_cap);
      Minutes horizon = e.mt99r_min * 4 + e.params.step_min;
      horizon += (e.params.step_min - horizon % e.params.step_min) % e.params.step_min;
      reliability::FailureCdf cdf = reliability::failure_cdf(chain, horizon);
      for (int d = 0; d < cfg.chain.max_horizon_doublings &&
                      cdf.values.back() < 0.999;
           ++d) {
        horizon *= 2;
        cdf = reliability::failure_cdf(chain, horizon);
      }
      const std::size_t npoints = cdf.values.size();
      const std::size_t stride = std::max<std::size_t>(1, npoints / 2000);
      std::string body = "t_min,failure_prob\n";
      for (std::size_t i = 0; i < npoints; i += stride) {
        body += std::to_string(static_cast<Minutes>(i) * cdf.step_min);
        body += ',';
        body += fmt("%.12g", cdf.values[i]);
        body += '\n';
      }
      if ((npoints - 1) % stride != 0) {
        body += std::to_string(cdf.horizon_min());
        body += ',';
        body += fmt("%.12g", cdf.values.back());
        body += '\n';
      }
      const std::string name = "cdf_" + lower(to_string(e.cls)) + "_n" +
                               std::to_string(e.n) + ".csv";
      atomic_write(fs::path(out_dir) / name, body);
    }
    out << "lut: wrote " << lut.entries.size() << " cdf curves\n";
    return 0;
  } catch (const std::exception& e) {
    err << "lut: " << e.what() << "\n";
    return 1;
  }
}

int cmd_gen(const config::RunConfig& cfg, const std::string& out_dir,
            std::ostream& out, std::ostream& err) {
  try {
    fs::create_directories(out_dir);
    const auto in = make_inputs(cfg, cfg.workload, cfg.run.seed);
    const fs::path vu_path = fs::path(out_dir) / "vus.csv";
    const fs::path task_path = fs::path(out_dir) / "tasks.csv";
    atomic_write(vu_path, workload::vu_trace_csv(in.vus));
    atomic_write(task_path, workload::task_trace_csv(in.tasks));

    std::array<std::int64_t, 3> count{};
    std::array<double, 3> stay_sum{};
    for (const auto& v : in.vus.vus) {
      const int c = static_cast<int>(v.cls);
      ++count[c];
      stay_sum[c] += static_cast<double>(v.declared_stay_min);
    }
    const double total = std::max<std::int64_t>(1, in.vus.vus.size());
    out << "gen: " << in.vus.vus.size() << " vus -> " << vu_path.string() << "\n";
    for (int c = 0; c < 3; ++c) {
      out << "  " << to_string(static_cast<VuClassTag>(c)) << ": " << count[c]
          << " (" << fmt("%.1f", 100.0 * static_cast<double>(count[c]) / total)
          << "%), mean declared stay "
          << fmt("%.1f", count[c] ? stay_sum[c] / static_cast<double>(count[c]) : 0.0)
          << " min\n";
    }

    std::vector<double> prices;
    double exec_sum = 0.0;
    prices.reserve(in.tasks.tasks.size());
    for (const auto& t : in.tasks.tasks) {
      prices.push_back(money_units(t.revenue));
      exec_sum += static_cast<double>(t.exec_min);
    }
    std::sort(prices.begin(), prices.end());
    out << "gen: " << in.tasks.tasks.size() << " tasks -> " << task_path.string()
        << "\n";
    if (!prices.empty()) {
      out << "  mean exec "
          << fmt("%.1f", exec_sum / static_cast<double>(prices.size()))
          << " min, price quantiles (p0/p25/p50/p75/p100): "
          << fmt("%.3f", prices.front()) << " / "
          << fmt("%.3f", quantile_sorted(prices, 0.25)) << " / "
          << fmt("%.3f", quantile_sorted(prices, 0.50)) << " / "
          << fmt("%.3f", quantile_sorted(prices, 0.75)) << " / "
          << fmt("%.3f", prices.back()) << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const config::RunConfig& cfg, const std::string& out_dir, int jobs,
            bool event_log, std::ostream& out, std::ostream& err) {
  try {
    fs::create_directories(out_dir);
    const auto lut = make_lut(cfg);
    const auto& seeds = cfg.run.seeds;
    const auto& orderings = cfg.run.orderings;

    struct Cell {
      std::uint64_t seed;
      policy::Ordering ordering;
    };
    std::vector<Cell> cells;
    for (const auto o : orderings)
      for (const auto s : seeds) cells.push_back({s, o});

    std::vector<engine::SimReport> reports(cells.size());
    parallel_cells(cells.size(), jobs, [&](std::size_t i) {
      const auto in = make_inputs(cfg, cfg.workload, cells[i].seed);
      std::ofstream ev;
      if (event_log) {
        const std::string name =
            "events_" + std::string(engine::to_string(cfg.engine.mode)) + "_" +
            std::string(policy::to_string(cells[i].ordering)) + "_seed" +
            std::to_string(cells[i].seed) + ".csv";
        ev.open(fs::path(out_dir) / name, std::ios::binary | std::ios::trunc);
        if (!ev) throw std::runtime_error("cannot write event log " + name);
      }
      reports[i] = run_one(in, cfg, cfg.workload, cells[i].ordering,
                           cfg.engine.mode, cells[i].seed, lut,
                           event_log ? &ev : nullptr);
    });

    std::string runs_csv = "ordering," + engine::SimReport::csv_header() + "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      runs_csv += policy::to_string(cells[i].ordering);
      runs_csv += ',';
      runs_csv += reports[i].csv_row();
      runs_csv += '\n';
    }
    atomic_write(fs::path(out_dir) / "runs.csv", runs_csv);

    std::string summary_csv =
        "policy,ordering,num_seeds,profit_mean,profit_stddev,config_digest\n";
    const std::string digest = config::config_digest(cfg);
    for (std::size_t oi = 0; oi < orderings.size(); ++oi) {
      std::vector<double> profits;
      for (std::size_t si = 0; si < seeds.size(); ++si)
        profits.push_back(money_units(reports[oi * seeds.size() + si].profit));
      const double m = mean_of(profits);
      const double sd = sample_stddev(profits);
      summary_csv += std::string(engine::to_string(cfg.engine.mode)) + "," +
                     std::string(policy::to_string(orderings[oi])) + "," +
                     std::to_string(seeds.size()) + "," + fmt("%.3f", m) + "," +
                     fmt("%.3f", sd) + "," + digest + "\n";
      out << "run: " << engine::to_string(cfg.engine.mode) << " "
          << policy::to_string(orderings[oi]) << " over " << seeds.size()
          << " seeds: profit mean " << fmt("%.3f", m) << ", stddev "
          << fmt("%.3f", sd) << "\n";
    }
    atomic_write(fs::path(out_dir) / "run_summary.csv", summary_csv);
    out << "run: wrote " << (fs::path(out_dir) / "runs.csv").string() << " and "
        << (fs::path(out_dir) / "run_summary.csv").string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "run: " << e.what() << "\n";
    return 1;
  }
}

int cmd_compare(const config::RunConfig& cfg, const std::string& out_dir, int jobs,
                std::ostream& out, std::ostream& err) {
  try {
    fs::create_directories(out_dir);
    const auto base_lut = make_lut(cfg);
    const auto& seeds = cfg.run.seeds;
    const auto& sw = cfg.sweep;

    // Residency points shift the stay-time means, which changes both the
    // generated supply and the reliability horizon, so each point gets its
    // own LUT. Built once up front; cells only read them.
    std::vector<std::array<VuClass, 3>> res_classes;
    std::vector<reliability::Lut> res_luts;
    for (const double mult : sw.residency_multipliers) {
      auto classes = cfg.workload.classes;
      for (auto& c : classes) c.mean_residency_min *= mult;
      res_classes.push_back(classes);
      res_luts.push_back(build_lut_for(cfg, classes));
    }

    enum Series { kBase = 0, kTasks, kVus, kExec, kResidency };
    struct Cell {
      int series;
      std::size_t point;
      std::uint64_t seed;
      workload::WorkloadConfig wcfg;
      const reliability::Lut* lut;
    };
    std::vector<Cell> cells;
    const auto add_point = [&](int series, std::size_t point,
                               const workload::WorkloadConfig& wcfg,
                               const reliability::Lut* lut) {
      for (const auto s : seeds) cells.push_back({series, point, s, wcfg, lut});
    };

    add_point(kBase, 0, cfg.workload, &base_lut);
    for (std::size_t p = 0; p < sw.task_counts.size(); ++p) {
      auto w = cfg.workload;
      w.num_tasks = sw.task_counts[p];
      add_point(kTasks, p, w, &base_lut);
    }
    for (std::size_t p = 0; p < sw.vu_counts.size(); ++p) {
      auto w = cfg.workload;
      w.num_vus = sw.vu_counts[p];
      add_point(kVus, p, w, &base_lut);
    }
    for (std::size_t p = 0; p < sw.exec_multipliers.size(); ++p) {
      auto w = cfg.workload;
      const double m = sw.exec_multipliers[p];
      w.mean_exec_min *= m;
      w.max_exec_min *= m;
      w.exec_outlier_lo_min *= m;
      w.exec_outlier_hi_min *= m;
      add_point(kExec, p, w, &base_lut);
    }
    for (std::size_t p = 0; p < sw.residency_multipliers.size(); ++p) {
      auto w = cfg.workload;
      w.classes = res_classes[p];
      add_point(kResidency, p, w, &res_luts[p]);
    }

    struct CellResult {
      Money proposed, sota, offered;
    };
    std::vector<CellResult> results(cells.size());
    parallel_cells(cells.size(), jobs, [&](std::size_t i) {
      const Cell& c = cells[i];
      // one trace pair per cell, fed bit-identically to both policies
      const auto in = make_inputs(cfg, c.wcfg, c.seed);
      const auto prop = run_one(in, cfg, c.wcfg, cfg.policy.ordering,
                                engine::Mode::Proposed, c.seed, *c.lut, nullptr);
      const auto sota = run_one(in, cfg, c.wcfg, cfg.policy.ordering,
                                engine::Mode::Sota, c.seed, *c.lut, nullptr);
      results[i] = {prop.profit, sota.profit, in.offered};
    });

    struct Agg {
      std::vector<double> prop, sota;
      Money prop_sum, sota_sum, offered_sum;
      void add(const CellResult& r) {
        prop.push_back(money_units(r.proposed));
        sota.push_back(money_units(r.sota));
        prop_sum = prop_sum + r.proposed;
        sota_sum = sota_sum + r.sota;
        offered_sum = offered_sum + r.offered;
      }
      double pct_prop() const {
        return offered_sum.milli
                   ? 100.0 * static_cast<double>(prop_sum.milli) /
                         static_cast<double>(offered_sum.milli)
                   : 0.0;
      }
      double pct_sota() const {
        return offered_sum.milli
                   ? 100.0 * static_cast<double>(sota_sum.milli) /
                         static_cast<double>(offered_sum.milli)
                   : 0.0;
      }
    };
    const auto collect = [&](int series, std::size_t point) {
      Agg a;
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].series == series && cells[i].point == point)
          a.add(results[i]);
      return a;
    };

    std::string s1 = "num_tasks,num_vus,seeds,proposed_profit_mean,sota_profit_mean\n";
    for (std::size_t p = 0; p < sw.task_counts.size(); ++p) {
      const Agg a = collect(kTasks, p);
      s1 += std::to_string(sw.task_counts[p]) + "," +
            std::to_string(cfg.workload.num_vus) + "," +
            std::to_string(seeds.size()) + "," + fmt("%.3f", mean_of(a.prop)) +
            "," + fmt("%.3f", mean_of(a.sota)) + "\n";
    }
    atomic_write(fs::path(out_dir) / "profit_vs_tasks.csv", s1);

    std::string s2 = "num_vus,num_tasks,seeds,proposed_profit_mean,sota_profit_mean\n";
    for (std::size_t p = 0; p < sw.vu_counts.size(); ++p) {
      const Agg a = collect(kVus, p);
      s2 += std::to_string(sw.vu_counts[p]) + "," +
            std::to_string(cfg.workload.num_tasks) + "," +
            std::to_string(seeds.size()) + "," + fmt("%.3f", mean_of(a.prop)) +
            "," + fmt("%.3f", mean_of(a.sota)) + "\n";
    }
    atomic_write(fs::path(out_dir) / "profit_vs_vus.csv", s2);

    // profit percentage = 100 * total profit / total offered revenue,
    // pooled over seeds; the denominator choice is in the header name
    std::string s3 =
        "exec_multiplier,mean_exec_min,seeds,"
        "proposed_profit_pct_of_offered_revenue,"
        "sota_profit_pct_of_offered_revenue\n";
    for (std::size_t p = 0; p < sw.exec_multipliers.size(); ++p) {
      const Agg a = collect(kExec, p);
      s3 += fmt("%g", sw.exec_multipliers[p]) + "," +
            fmt("%g", cfg.workload.mean_exec_min * sw.exec_multipliers[p]) + "," +
            std::to_string(seeds.size()) + "," + fmt("%.4f", a.pct_prop()) + "," +
            fmt("%.4f", a.pct_sota()) + "\n";
    }
    atomic_write(fs::path(out_dir) / "profit_pct_vs_exec.csv", s3);

    std::string s4 =
        "residency_multiplier,srt_mean_min,mrt_mean_min,lrt_mean_min,seeds,"
        "proposed_profit_pct_of_offered_revenue,"
        "sota_profit_pct_of_offered_revenue\n";
    for (std::size_t p = 0; p < sw.residency_multipliers.size(); ++p) {
      const Agg a = collect(kResidency, p);
      s4 += fmt("%g", sw.residency_multipliers[p]) + "," +
            fmt("%g", res_classes[p][0].mean_residency_min) + "," +
            fmt("%g", res_classes[p][1].mean_residency_min) + "," +
            fmt("%g", res_classes[p][2].mean_residency_min) + "," +
            std::to_string(seeds.size()) + "," + fmt("%.4f", a.pct_prop()) + "," +
            fmt("%.4f", a.pct_sota()) + "\n";
    }
    atomic_write(fs::path(out_dir) / "profit_pct_vs_residency.csv", s4);

    const Agg base = collect(kBase, 0);
    std::int64_t wins = 0;
    for (std::size_t i = 0; i < base.prop.size(); ++i)
      if (base.prop[i] > base.sota[i]) ++wins;
    const double pm = mean_of(base.prop), sm = mean_of(base.sota);
    std::string s5 =
        "num_seeds,proposed_profit_mean,sota_profit_mean,profit_ratio,"
        "proposed_wins,config_digest\n";
    s5 += std::to_string(seeds.size()) + "," + fmt("%.3f", pm) + "," +
          fmt("%.3f", sm) + "," + fmt("%.4f", sm != 0.0 ? pm / sm : 0.0) + "," +
          std::to_string(wins) + "," + config::config_digest(cfg) + "\n";
    atomic_write(fs::path(out_dir) / "compare_summary.csv", s5);

    out << "compare: base profit mean proposed " << fmt("%.3f", pm) << " vs sota "
        << fmt("%.3f", sm) << " over " << seeds.size() << " paired seeds ("
        << wins << " wins)\n";
    out << "compare: wrote 5 csv files under " << out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace vcsim::driver
