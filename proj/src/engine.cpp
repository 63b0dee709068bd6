#include "vcsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "vcsim/rng.hpp"

namespace vcsim::engine {

std::string_view to_string(Mode m) {
  return m == Mode::Proposed ? "proposed" : "sota";
}

double RunningGroup::member_workdone(const GroupMember& m, Minutes now) const {
  const double w =
      m.progress_base + m.speed * static_cast<double>(now - m.base_time);
  return std::min(w, static_cast<double>(checkpoint_len));
}

double RunningGroup::max_workdone(Minutes now) const {
  double w = 0.0;
  for (const auto& m : members) w = std::max(w, member_workdone(m, now));
  return w;
}

Minutes RunningGroup::projected_end(Minutes now) const {
  assert(!members.empty());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : members) {
    const double finish =
        static_cast<double>(m.base_time) +
        (static_cast<double>(checkpoint_len) - m.progress_base) / m.speed;
    best = std::min(best, finish);
  }
  // integer clock: the boundary lands on the first minute at or past the
  // exact crossing (a hair of slack absorbs float noise in the division)
  const Minutes t = static_cast<Minutes>(std::ceil(best - 1e-9));
  return std::max(now, t);
}

int required_redundancy(const reliability::Lut& lut, VuClassTag cls,
                        Minutes remaining_checkpoint_min,
                        const reliability::NBounds& bounds) {
  for (int x = bounds.n_min; x <= bounds.n_max; ++x) {
    if (!lut.has(cls, x)) continue;
    if (lut.mt99r(cls, x) >= remaining_checkpoint_min) return x;
  }
  return bounds.n_max;
}

double sync_workdone_max(const RunningGroup& g, Minutes now) {
  double w = g.max_workdone(now);
  for (double d : g.departed_progress) w = std::max(w, d);
  return std::min(w, static_cast<double>(g.checkpoint_len));
}

void apply_recruit_sync(RunningGroup& g, std::int64_t recruit_vu_id, Minutes now,
                        double speed) {
  const double wmax = sync_workdone_max(g, now);
  for (auto& m : g.members) {
    if (m.vu_id != g.recruiter_vu) continue;
    if (g.member_workdone(m, now) < wmax) {
      // the recruiter adopts the best image seen, which may have come from
      // a member that already left
      m.progress_base = wmax;
      m.base_time = now;
    }
    break;
  }
  g.members.push_back({recruit_vu_id, wmax, now, speed, now});
  g.departed_progress.clear();
}

std::string SimReport::csv_header() {
  return "policy,seed,num_tasks,num_vus,profit,revenue,cost,completed,late,"
         "failed,rejected,vu_minutes_busy,vu_minutes_idle";
}

std::string SimReport::csv_row() const {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%s,%" PRIu64 ",%" PRId64 ",%" PRId64 ",%s,%s,%s,%" PRId64
                ",%" PRId64 ",%" PRId64 ",%" PRId64 ",%" PRId64 ",%" PRId64,
                policy.c_str(), seed, num_tasks, num_vus, profit.str().c_str(),
                revenue.str().c_str(), cost.str().c_str(), completed, late,
                failed, rejected, vu_minutes_busy, vu_minutes_idle);
  return buf;
}

namespace {

enum EvKind : int {
  kVuArrival,
  kVuConfigDone,
  kVuDeparture,
  kTaskArrival,
  kApScan,
  kCheckpointDone,
  kRecruitDone,
  kHorizonEnd,
};

int prio_of(EvKind k) {
  switch (k) {
    case kVuDeparture: return 0;
    case kVuArrival:
    case kVuConfigDone:
    case kTaskArrival: return 1;
    case kRecruitDone: return 2;
    case kCheckpointDone: return 3;
    case kApScan: return 4;
    case kHorizonEnd: return 5;
  }
  return 9;
}

struct Event {
  Minutes t = 0;
  int prio = 0;
  std::int64_t entity = 0;
  std::uint64_t seq = 0;  // insertion order, the last tie-break
  EvKind kind = kHorizonEnd;
  std::uint64_t aux = 0;  // generation / recruit slot
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.t, a.prio, a.entity, a.seq) >
           std::tie(b.t, b.prio, b.entity, b.seq);
  }
};

struct VuRt {
  const VehicularUnit* src = nullptr;
  int vc = 0;
  bool arrived = false;
  VuState state = VuState::Configuring;
  Minutes state_since = 0;
  double speed = 1.0;
  std::int64_t group_task = -1;
};

struct TaskRt {
  Task t;
  Money cost;
  Money revenue_credited;
  Minutes completion = -1;
  int vc = -1;
  std::int64_t checkpoints_done = 0;
};

// idle VUs keyed by (arrival, id): FCFS picks are the set's front
using IdlePool = std::set<std::pair<Minutes, std::int64_t>>;

struct VcState {
  std::array<IdlePool, 3> pool;
  double lrt_ewma = 0.0;
  std::int64_t lrt_arrivals = 0;  // since the last scan
  std::int64_t t_vu = 0;          // current reservation target
};

struct Sim {
  const policy::PolicyConfig& pcfg;
  const reliability::Lut& lut;
  const EngineConfig& cfg;
  std::uint64_t seed;
  std::ostream* elog;

  Minutes horizon = 0;
  std::mt19937_64 rng;

  std::vector<VuRt> vu_rt;
  std::vector<TaskRt> task_rt;
  std::unordered_map<std::int64_t, std::size_t> vu_ix, task_ix;

  std::vector<VcState> vcs;
  std::set<std::int64_t> queued;       // arrived, awaiting first admission
  std::set<std::int64_t> needs_group;  // between checkpoints or retrying
  std::map<std::int64_t, RunningGroup> groups;

  Minutes busy_total = 0;
  Minutes idle_total = 0;
  std::uint64_t recruit_seq = 0;
  std::uint64_t ckpt_gen = 0;  // global so stale events can't match a successor group
  std::uint64_t event_seq = 0;

  std::priority_queue<Event, std::vector<Event>, EventAfter> eq;

  Sim(const policy::PolicyConfig& p, const reliability::Lut& l,
      const EngineConfig& c, std::uint64_t s, std::ostream* log)
      : pcfg(p), lut(l), cfg(c), seed(s), elog(log),
        rng(substream_seed(s, "sim")) {}

  VuRt& vu(std::int64_t id) { return vu_rt[vu_ix.at(id)]; }
  TaskRt& task(std::int64_t id) { return task_rt[task_ix.at(id)]; }

  void logln(Minutes t, const char* type, std::int64_t entity,
             const std::string& detail) {
    if (!elog) return;
    *elog << t << ',' << type << ',' << entity << ',' << detail << '\n';
  }

  void push_event(Minutes t, EvKind kind, std::int64_t entity, std::uint64_t aux) {
    if (t > horizon) return;
    eq.push(Event{t, prio_of(kind), entity, event_seq++, kind, aux});
  }

  std::int64_t pool_size(int vc, VuClassTag c) const {
    return static_cast<std::int64_t>(
        vcs[vc].pool[static_cast<int>(c)].size());
  }

  std::array<std::int64_t, 3> idle_counts(int vc) const {
    return {pool_size(vc, VuClassTag::Srt), pool_size(vc, VuClassTag::Mrt),
            pool_size(vc, VuClassTag::Lrt)};
  }

  std::int64_t total_idle(int vc) const {
    const auto c = idle_counts(vc);
    return c[0] + c[1] + c[2];
  }

  // remove the FCFS-first idle VU of one class; accrues its idle time
  std::int64_t take_from_pool(int vc, VuClassTag c, Minutes now) {
    IdlePool& p = vcs[vc].pool[static_cast<int>(c)];
    if (p.empty()) throw std::logic_error("idle pool drained unexpectedly");
    const std::int64_t id = p.begin()->second;
    p.erase(p.begin());
    VuRt& v = vu(id);
    idle_total += now - v.state_since;
    v.state = VuState::Executing;
    v.state_since = now;
    return id;
  }

  // class-blind FCFS pick across all pools of one controller
  std::optional<VuClassTag> best_any_class(int vc) const {
    std::optional<VuClassTag> best;
    std::pair<Minutes, std::int64_t> best_key{};
    for (int c = 0; c < kNumVuClasses; ++c) {
      const IdlePool& p = vcs[vc].pool[c];
      if (p.empty()) continue;
      if (!best || *p.begin() < best_key) {
        best = static_cast<VuClassTag>(c);
        best_key = *p.begin();
      }
    }
    return best;
  }

  // recruit supply: the planned class first, then longer-stay classes
  std::optional<VuClassTag> recruit_class(const RunningGroup& g) const {
    if (g.class_blind) return best_any_class(g.vc);
    for (int c = static_cast<int>(g.cls); c < kNumVuClasses; ++c)
      if (!vcs[g.vc].pool[c].empty()) return static_cast<VuClassTag>(c);
    return std::nullopt;
  }

  void to_idle(std::int64_t vu_id, Minutes now) {
    VuRt& v = vu(vu_id);
    v.state = VuState::Idle;
    v.state_since = now;
    v.group_task = -1;
    vcs[v.vc].pool[static_cast<int>(v.src->cls)].insert(
        {v.src->arrival_min, vu_id});
  }

  void bill_member(TaskRt& tr, const GroupMember& m, Minutes now) {
    const Minutes mins = now - m.joined_min;
    tr.cost += pcfg.cost_per_vu_min * mins;
    busy_total += mins;
  }

  void discard(TaskRt& tr, Minutes now, const char* why) {
    tr.t.status = TaskStatus::Discarded;
    logln(now, "task_discarded", tr.t.id, why);
  }

  void schedule_checkpoint(RunningGroup& g, Minutes now) {
    // a retry group reuses its task id, so generations must never repeat
    // across group instances or a stale event could fire into the successor
    g.event_gen = ++ckpt_gen;
    const Minutes end = g.projected_end(now);
    push_event(end, kCheckpointDone, g.task_id, g.event_gen);
  }

  void start_group(TaskRt& tr, int vc, ExecutionPlan plan, Minutes now) {
    Task& t = tr.t;
    plan.current_checkpoint = tr.checkpoints_done;
    plan.persisted_progress_min = t.exec_min - t.remaining_exec_min;
    t.plan = plan;
    t.status = TaskStatus::Running;
    tr.vc = vc;

    RunningGroup g;
    g.task_id = t.id;
    g.vc = vc;
    g.cls = plan.vu_type;
    g.class_blind = plan.class_blind;
    g.checkpoint_len =
        policy::checkpoint_length(t.remaining_exec_min, plan.checkpoints, 0);
    g.started_min = now;
    for (int i = 0; i < plan.redundancy; ++i) {
      VuClassTag c = plan.vu_type;
      if (plan.class_blind) {
        const auto any = best_any_class(vc);
        if (!any) throw std::logic_error("baseline pick from empty pools");
        c = *any;
      }
      const std::int64_t vu_id = take_from_pool(vc, c, now);
      vu(vu_id).group_task = t.id;
      g.members.push_back({vu_id, 0.0, now, vu(vu_id).speed, now});
    }
    g.recruiter_vu = g.members.front().vu_id;
    schedule_checkpoint(g, now);
    char d[128];
    std::snprintf(d, sizeof d, "vc=%d x=%d len=%" PRId64 " remaining=%" PRId64,
                  vc, plan.redundancy, g.checkpoint_len, t.remaining_exec_min);
    logln(now, "task_started", t.id, d);
    groups.emplace(t.id, std::move(g));
  }

  void on_vu_arrival(std::int64_t id, Minutes now) {
    VuRt& v = vu(id);
    v.arrived = true;
    v.state = VuState::Configuring;
    v.state_since = now;
    if (cfg.speed_variation) v.speed = uniform_real(rng, cfg.speed_lo, cfg.speed_hi);
    if (v.src->cls == VuClassTag::Lrt) ++vcs[v.vc].lrt_arrivals;
    logln(now, "vu_arrival", id, std::string("class=") + std::string(to_string(v.src->cls)));
  }

  void on_vu_config_done(std::int64_t id, Minutes now) {
    VuRt& v = vu(id);
    if (v.state != VuState::Configuring || !v.arrived) return;  // already gone
    to_idle(id, now);
    logln(now, "vu_config_done", id, "");
  }

  void on_task_arrival(std::int64_t id, Minutes now) {
    queued.insert(id);
    Task& t = task(id).t;
    // criticality is fixed once, on arrival; later scans never reclassify
    t.critical = policy::classify_task(t, pcfg);
    char d[96];
    std::snprintf(d, sizeof d, "e=%" PRId64 " d=%" PRId64, t.exec_min,
                  t.deadline_min);
    logln(now, "task_arrival", id, d);
  }

  void on_vu_departure(std::int64_t id, Minutes now) {
    VuRt& v = vu(id);
    if (!v.arrived || v.state == VuState::Departed) return;
    const VuState was = v.state;
    if (was == VuState::Idle) {
      idle_total += now - v.state_since;
      vcs[v.vc].pool[static_cast<int>(v.src->cls)].erase(
          {v.src->arrival_min, id});
    }
    v.state = VuState::Departed;
    v.state_since = now;
    logln(now, "vu_departure", id,
          was == VuState::Executing ? "state=executing"
          : was == VuState::Idle    ? "state=idle"
                                    : "state=configuring");
    if (was != VuState::Executing) return;

    auto git = groups.find(v.group_task);
    assert(git != groups.end());
    RunningGroup& g = git->second;
    TaskRt& tr = task(g.task_id);

    auto mit = std::find_if(g.members.begin(), g.members.end(),
                            [id](const GroupMember& m) { return m.vu_id == id; });
    assert(mit != g.members.end());
    const double image = g.member_workdone(*mit, now);
    bill_member(tr, *mit, now);
    g.departed_progress.push_back(image);
    g.members.erase(mit);
    v.group_task = -1;

    if (g.members.empty()) return group_failed(g, tr, now);

    if (g.recruiter_vu == id) {
      // promote the surviving member with the lowest id
      std::int64_t next = g.members.front().vu_id;
      for (const auto& m : g.members) next = std::min(next, m.vu_id);
      g.recruiter_vu = next;
      logln(now, "recruiter_promoted", g.task_id, "vu=" + std::to_string(next));
    }

    const Minutes remaining_ckpt =
        g.checkpoint_len -
        static_cast<Minutes>(std::floor(g.max_workdone(now) + 1e-9));
    if (remaining_ckpt > 0) {
      if (cfg.mode == Mode::Sota) {
        // one replacement per leaver, carrying the leaver's frozen image
        g.pending.push_back({recruit_seq, now + cfg.t_mttr_min, image});
        push_event(now + cfg.t_mttr_min, kRecruitDone, g.task_id, recruit_seq);
        ++recruit_seq;
      } else {
        const int required = required_redundancy(
            lut, g.cls, remaining_ckpt,
            pcfg.redundancy_bounds[static_cast<int>(g.cls)]);
        const std::size_t target = static_cast<std::size_t>(
            std::max<std::int64_t>(0, required - static_cast<std::int64_t>(
                                                     g.members.size())));
        while (g.pending.size() > target) g.pending.pop_back();
        while (g.pending.size() < target) {
          g.pending.push_back({recruit_seq, now + cfg.t_mttr_min, -1.0});
          push_event(now + cfg.t_mttr_min, kRecruitDone, g.task_id, recruit_seq);
          ++recruit_seq;
        }
      }
    }
    schedule_checkpoint(g, now);  // the leader may have been the one to leave
  }

  void group_failed(RunningGroup& g, TaskRt& tr, Minutes now) {
    const std::int64_t id = g.task_id;
    groups.erase(id);  // pending recruit events go stale with it
    logln(now, "group_failure", id, "");
    Task& t = tr.t;
    if (cfg.mode == Mode::Sota) {
      // the baseline has no checkpoints to fall back on
      t.remaining_exec_min = t.exec_min;
      tr.checkpoints_done = 0;
      if (t.plan) {
        t.plan->persisted_progress_min = 0;
        t.plan->current_checkpoint = 0;
      }
    }
    if (now + t.remaining_exec_min > t.deadline_min) {
      discard(tr, now, "deadline_unreachable");
    } else {
      t.status = TaskStatus::FailedPendingRetry;
      needs_group.insert(id);
      logln(now, "task_retry", id,
            "remaining=" + std::to_string(t.remaining_exec_min));
    }
  }

  void on_recruit_done(std::int64_t task_id, std::uint64_t slot, Minutes now) {
    auto git = groups.find(task_id);
    if (git == groups.end()) return;  // group closed meanwhile
    RunningGroup& g = git->second;
    auto pit = std::find_if(g.pending.begin(), g.pending.end(),
                            [slot](const auto& p) { return p.seq == slot; });
    if (pit == g.pending.end()) return;  // slot was cancelled

    const auto cls = recruit_class(g);
    if (!cls) {
      // nothing idle to recruit; try again one replacement window later
      pit->due = now + cfg.t_mttr_min;
      push_event(pit->due, kRecruitDone, task_id, slot);
      logln(now, "recruit_retry", task_id, "slot=" + std::to_string(slot));
      return;
    }
    const double image = pit->image;
    g.pending.erase(pit);

    const std::int64_t vu_id = take_from_pool(g.vc, *cls, now);
    vu(vu_id).group_task = task_id;
    if (image >= 0.0) {
      // baseline: the recruit resumes exactly where the leaver stopped
      g.members.push_back({vu_id, std::min(image, static_cast<double>(g.checkpoint_len)),
                           now, vu(vu_id).speed, now});
    } else {
      apply_recruit_sync(g, vu_id, now, vu(vu_id).speed);
    }
    schedule_checkpoint(g, now);  // the recruiter's image may have advanced
    logln(now, "recruitment_done", task_id, "vu=" + std::to_string(vu_id));
  }

  void on_checkpoint_done(std::int64_t task_id, std::uint64_t gen, Minutes now) {
    auto git = groups.find(task_id);
    if (git == groups.end() || git->second.event_gen != gen) return;  // stale
    RunningGroup& g = git->second;
    TaskRt& tr = task(task_id);
    Task& t = tr.t;
    assert(g.max_workdone(now) + 1e-6 >= static_cast<double>(g.checkpoint_len));

    for (const auto& m : g.members) {
      bill_member(tr, m, now);
      to_idle(m.vu_id, now);
    }
    const Minutes len = g.checkpoint_len;
    groups.erase(git);

    t.remaining_exec_min -= len;
    ++tr.checkpoints_done;
    if (t.plan) {
      t.plan->persisted_progress_min = t.exec_min - t.remaining_exec_min;
      t.plan->current_checkpoint = tr.checkpoints_done;
    }
    char d[96];
    std::snprintf(d, sizeof d, "len=%" PRId64 " remaining=%" PRId64, len,
                  t.remaining_exec_min);
    logln(now, "checkpoint_done", task_id, d);

    if (t.remaining_exec_min > 0) {
      needs_group.insert(task_id);  // next split requested at the next scan
      return;
    }
    t.status = TaskStatus::Completed;
    tr.completion = now;
    if (now <= t.deadline_min) tr.revenue_credited = t.revenue;
    logln(now, "task_completed", task_id,
          now <= t.deadline_min ? "on_time=1" : "on_time=0");
  }

  void admit(std::int64_t id, int vc, const ExecutionPlan& plan, Minutes now) {
    queued.erase(id);
    TaskRt& tr = task(id);
    char d[64];
    std::snprintf(d, sizeof d, "vc=%d x=%d g=%" PRId64, vc, plan.redundancy,
                  plan.checkpoints);
    logln(now, "task_admitted", id, d);
    start_group(tr, vc, plan, now);
  }

  void on_scan(Minutes now) {
    logln(now, "ap_scan", 0, "queued=" + std::to_string(queued.size()));

    if (cfg.mode == Mode::Proposed) {
      for (auto& vc : vcs) {
        const double est =
            static_cast<double>(vc.lrt_arrivals) *
            (cfg.lrt_residency_window_min /
             static_cast<double>(pcfg.scan_period_min));
        vc.lrt_ewma = pcfg.t_vu_ewma_alpha * est +
                      (1.0 - pcfg.t_vu_ewma_alpha) * vc.lrt_ewma;
        vc.lrt_arrivals = 0;
        vc.t_vu = static_cast<std::int64_t>(
            std::ceil(pcfg.reserved_lrt_fraction * vc.lrt_ewma - 1e-12));
      }
    }

    // continuations and retries get first pick of the idle supply
    const std::vector<std::int64_t> waiting(needs_group.begin(), needs_group.end());
    for (const std::int64_t id : waiting) {
      TaskRt& tr = task(id);
      Task& t = tr.t;
      if (now + t.remaining_exec_min > t.deadline_min) {
        needs_group.erase(id);
        discard(tr, now, "deadline_unreachable");
        continue;
      }
      for (int v = 0; v < static_cast<int>(vcs.size()); ++v) {
        std::optional<ExecutionPlan> plan;
        if (cfg.mode == Mode::Sota) {
          if (total_idle(v) >= cfg.sota_redundancy)
            plan = policy::sota_plan(t, total_idle(v), cfg.sota_redundancy);
        } else {
          // prefer to stay on the class the task already ran on
          const VuClassTag same = t.plan ? t.plan->vu_type : VuClassTag::Lrt;
          plan = policy::split_task(t, same, pool_size(v, same), now, lut, pcfg);
          if (!plan)
            plan = policy::vu_requirement(t, idle_counts(v), vcs[v].t_vu, now,
                                          lut, pcfg);
        }
        if (plan) {
          needs_group.erase(id);
          start_group(tr, v, *plan, now);
          break;
        }
      }
    }

    // fresh admissions over the ordered queue
    if (!queued.empty()) {
      std::vector<const Task*> cand;
      cand.reserve(queued.size());
      for (const std::int64_t id : queued) cand.push_back(&task_rt[task_ix.at(id)].t);

      std::vector<policy::VcSnapshot> snaps;
      snaps.reserve(vcs.size());
      for (int v = 0; v < static_cast<int>(vcs.size()); ++v)
        snaps.push_back({v, idle_counts(v), vcs[v].t_vu});

      std::vector<int> px(cand.size(), cfg.sota_redundancy);
      if (cfg.mode == Mode::Proposed)
        for (std::size_t i = 0; i < cand.size(); ++i)
          px[i] = policy::provisional_redundancy(*cand[i], snaps, now, lut, pcfg);

      const auto q = policy::order_tasks(cand, pcfg.ordering, px, pcfg.cost_per_vu_min);

      if (cfg.mode == Mode::Proposed) {
        const auto decisions =
            policy::accept_tasks(q, cand, snaps, now, lut, pcfg);
        for (const auto& d : decisions) {
          if (d.kind == policy::AdmissionDecision::Kind::Admit) {
            admit(d.task_id, d.vc_id, d.plan, now);
          } else if (d.kind == policy::AdmissionDecision::Kind::Reject) {
            queued.erase(d.task_id);
            task(d.task_id).t.status = TaskStatus::Rejected;
            logln(now, "task_rejected", d.task_id, "");
          }
        }
      } else {
        std::vector<std::int64_t> avail(vcs.size());
        for (std::size_t v = 0; v < vcs.size(); ++v)
          avail[v] = total_idle(static_cast<int>(v));
        for (const auto& e : q.entries) {
          const Task& t = *cand[e.index];
          if (t.deadline_min <= now + t.exec_min) {
            queued.erase(t.id);
            task(t.id).t.status = TaskStatus::Rejected;
            logln(now, "task_rejected", t.id, "");
            continue;
          }
          for (std::size_t v = 0; v < vcs.size(); ++v) {
            if (avail[v] < cfg.sota_redundancy) continue;
            const auto plan = policy::sota_plan(t, avail[v], cfg.sota_redundancy);
            if (!plan) continue;
            avail[v] -= cfg.sota_redundancy;
            admit(t.id, static_cast<int>(v), *plan, now);
            break;
          }
        }
      }
    }

    if (now + pcfg.scan_period_min <= horizon)
      push_event(now + pcfg.scan_period_min, kApScan, 0, 0);
  }

  void closeout() {
    const Minutes now = horizon;
    for (auto& [id, g] : groups) {
      TaskRt& tr = task(id);
      for (const auto& m : g.members) {
        bill_member(tr, m, now);
        VuRt& v = vu(m.vu_id);
        v.state = VuState::Departed;
        v.group_task = -1;
      }
      discard(tr, now, "horizon");
    }
    groups.clear();
    for (auto& tr : task_rt) {
      const TaskStatus s = tr.t.status;
      if (s == TaskStatus::Queued || s == TaskStatus::Running ||
          s == TaskStatus::FailedPendingRetry)
        tr.t.status = TaskStatus::Discarded;
    }
    for (auto& v : vu_rt)
      if (v.arrived && v.state == VuState::Idle) idle_total += now - v.state_since;
    logln(now, "horizon_end", 0, "");
  }

  SimReport report(std::int64_t n_tasks, std::int64_t n_vus) const {
    SimReport r;
    r.policy = std::string(to_string(cfg.mode));
    r.seed = seed;
    r.num_tasks = n_tasks;
    r.num_vus = n_vus;
    r.vu_minutes_busy = busy_total;
    r.vu_minutes_idle = idle_total;

    std::vector<std::size_t> order(task_rt.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
      return task_rt[a].t.id < task_rt[b].t.id;
    });

    for (const std::size_t i : order) {
      const TaskRt& tr = task_rt[i];
      TaskLedgerRow row;
      row.task_id = tr.t.id;
      row.status = tr.t.status;
      row.revenue_credited = tr.revenue_credited;
      row.cost = tr.cost;
      row.completion_min = tr.completion;
      row.vc = tr.vc;
      row.late = tr.t.status == TaskStatus::Completed &&
                 tr.completion > tr.t.deadline_min;
      r.ledger.push_back(row);

      r.revenue += row.revenue_credited;
      r.cost += row.cost;
      switch (tr.t.status) {
        case TaskStatus::Completed: row.late ? ++r.late : ++r.completed; break;
        case TaskStatus::Discarded: ++r.failed; break;
        case TaskStatus::Rejected: ++r.rejected; break;
        default: assert(false && "task left in a transient state");
      }
    }
    r.profit = r.revenue - r.cost;
    return r;
  }
};

}  // namespace

SimReport run(const workload::VuTrace& vus, const workload::TaskTrace& tasks,
              const policy::PolicyConfig& policy_cfg, const reliability::Lut& lut,
              const EngineConfig& cfg, std::uint64_t seed, std::ostream* event_log) {
  if (cfg.num_vcs < 1) throw std::invalid_argument("num_vcs must be >= 1");
  if (policy_cfg.scan_period_min < 1)
    throw std::invalid_argument("scan period must be >= 1 minute");
  if (cfg.t_mttr_min < 1)
    throw std::invalid_argument("replacement latency must be >= 1 minute");
  if (cfg.mode == Mode::Proposed) {
    for (int c = 0; c < kNumVuClasses; ++c) {
      const auto& b = policy_cfg.redundancy_bounds[c];
      for (int x = b.n_min; x <= b.n_max; ++x)
        if (!lut.has(static_cast<VuClassTag>(c), x))
          throw std::runtime_error(
              std::string("lut has no entry for ") +
              std::string(to_string(static_cast<VuClassTag>(c))) + " n=" +
              std::to_string(x));
    }
  }

  Sim sim(policy_cfg, lut, cfg, seed, event_log);

  Minutes horizon = cfg.horizon_min;
  if (horizon <= 0) {
    horizon = 0;
    for (const Task& t : tasks.tasks)
      horizon = std::max(horizon, t.deadline_min + 1440);
  }
  sim.horizon = horizon;

  sim.vu_rt.reserve(vus.vus.size());
  Minutes prev = std::numeric_limits<Minutes>::min();
  for (std::size_t i = 0; i < vus.vus.size(); ++i) {
    const VehicularUnit& v = vus.vus[i];
    if (v.arrival_min < prev)
      throw std::invalid_argument("vu trace must be sorted by arrival");
    prev = v.arrival_min;
    if (v.actual_departure_min <= v.arrival_min ||
        v.config_done_min < v.arrival_min)
      throw std::invalid_argument("vu trace has inconsistent times");
    if (!sim.vu_ix.emplace(v.id, i).second)
      throw std::invalid_argument("duplicate vu id in trace");
    VuRt rt;
    rt.src = &v;
    rt.vc = static_cast<int>(i % static_cast<std::size_t>(cfg.num_vcs));
    sim.vu_rt.push_back(rt);
  }

  sim.task_rt.reserve(tasks.tasks.size());
  prev = std::numeric_limits<Minutes>::min();
  for (std::size_t i = 0; i < tasks.tasks.size(); ++i) {
    const Task& t = tasks.tasks[i];
    if (t.arrival_min < prev)
      throw std::invalid_argument("task trace must be sorted by arrival");
    prev = t.arrival_min;
    if (t.exec_min <= 0 || t.remaining_exec_min != t.exec_min)
      throw std::invalid_argument("task trace has inconsistent work fields");
    if (!sim.task_ix.emplace(t.id, i).second)
      throw std::invalid_argument("duplicate task id in trace");
    TaskRt rt;
    rt.t = t;
    rt.t.status = TaskStatus::Queued;
    sim.task_rt.push_back(rt);
  }

  sim.vcs.resize(static_cast<std::size_t>(cfg.num_vcs));

  if (event_log) *event_log << kEventLogHeader << '\n';

  for (const auto& v : vus.vus) {
    if (v.arrival_min > horizon) continue;
    sim.push_event(v.arrival_min, kVuArrival, v.id, 0);
    sim.push_event(v.config_done_min, kVuConfigDone, v.id, 0);
    sim.push_event(v.actual_departure_min, kVuDeparture, v.id, 0);
  }
  for (const auto& t : tasks.tasks) sim.push_event(t.arrival_min, kTaskArrival, t.id, 0);
  if (horizon > 0) sim.push_event(0, kApScan, 0, 0);
  sim.push_event(horizon, kHorizonEnd, 0, 0);

  while (!sim.eq.empty()) {
    const Event ev = sim.eq.top();
    sim.eq.pop();
    switch (ev.kind) {
      case kVuArrival: sim.on_vu_arrival(ev.entity, ev.t); break;
      case kVuConfigDone: sim.on_vu_config_done(ev.entity, ev.t); break;
      case kVuDeparture: sim.on_vu_departure(ev.entity, ev.t); break;
      case kTaskArrival: sim.on_task_arrival(ev.entity, ev.t); break;
      case kApScan: sim.on_scan(ev.t); break;
      case kCheckpointDone: sim.on_checkpoint_done(ev.entity, ev.aux, ev.t); break;
      case kRecruitDone: sim.on_recruit_done(ev.entity, ev.aux, ev.t); break;
      case kHorizonEnd:
        sim.closeout();
        return sim.report(static_cast<std::int64_t>(tasks.tasks.size()),
                          static_cast<std::int64_t>(vus.vus.size()));
    }
  }
  throw std::logic_error("event queue drained before horizon");
}

}  // namespace vcsim::engine
