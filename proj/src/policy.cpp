#include "vcsim/policy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vcsim::policy {

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Ep: return "EP";
    case Ordering::Rv: return "RV";
    case Ordering::Rpe: return "RPE";
    case Ordering::Edd: return "EDD";
    case Ordering::Fcfs: return "FCFS";
    case Ordering::Gus: return "GUS";
  }
  return "?";
}

std::optional<Ordering> ordering_from_string(std::string_view s) {
  for (Ordering o : kAllOrderings)
    if (s == to_string(o)) return o;
  return std::nullopt;
}

bool classify_task(const Task& task, const PolicyConfig& cfg) {
  // l < (1+delta)*e evaluated in integers at ppm granularity, so the
  // boundary l == (1+delta)*e lands on the non-critical side instead of
  // being decided by float rounding
  const std::int64_t delta_ppm = std::llround(cfg.delta * 1e6);
  const __int128 lhs = static_cast<__int128>(task.laxity_min()) * 1'000'000;
  const __int128 rhs =
      static_cast<__int128>(task.exec_min) * (1'000'000 + delta_ppm);
  return lhs < rhs || task.exec_min < cfg.e_threshold_critical_min;
}

namespace {

// true when a's key strictly precedes b's under the heuristic's direction
bool key_before(const OrderedQueue::Entry& a, const OrderedQueue::Entry& b,
                bool descending) {
  const __int128 lhs = static_cast<__int128>(a.key_num) * b.key_den;
  const __int128 rhs = static_cast<__int128>(b.key_num) * a.key_den;
  if (lhs != rhs) return descending ? lhs > rhs : lhs < rhs;
  if (a.arrival_min != b.arrival_min) return a.arrival_min < b.arrival_min;
  return a.task_id < b.task_id;
}

}  // namespace

OrderedQueue order_tasks(std::span<const Task* const> tasks, Ordering heuristic,
                         std::span<const int> provisional_x, Money k_per_vu_min) {
  if (heuristic == Ordering::Ep && provisional_x.size() != tasks.size())
    throw std::invalid_argument("order_tasks: EP needs a redundancy estimate per task");

  OrderedQueue q;
  q.entries.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = *tasks[i];
    OrderedQueue::Entry e{i, t.id, 0, 1, t.arrival_min};
    switch (heuristic) {
      case Ordering::Ep: {
        const Money cost =
            task_cost(provisional_x[i], t.exec_min, k_per_vu_min);
        e.key_num = (t.revenue - cost).milli;
        break;
      }
      case Ordering::Rv:
        e.key_num = t.revenue.milli;
        break;
      case Ordering::Rpe:
        e.key_num = t.revenue.milli;
        e.key_den = t.exec_min;
        break;
      case Ordering::Edd:
        e.key_num = t.deadline_min;
        break;
      case Ordering::Fcfs:
        e.key_num = t.arrival_min;
        break;
      case Ordering::Gus:
        e.key_num = t.laxity_min();
        e.key_den = t.exec_min;
        break;
    }
    q.entries.push_back(e);
  }

  const bool descending = heuristic == Ordering::Ep || heuristic == Ordering::Rv ||
                          heuristic == Ordering::Rpe;
  std::sort(q.entries.begin(), q.entries.end(),
            [descending](const auto& a, const auto& b) {
              return key_before(a, b, descending);
            });
  return q;
}

Minutes checkpoint_length(Minutes work, std::int64_t checkpoints, std::int64_t index) {
  assert(checkpoints > 0 && index >= 0 && index < checkpoints);
  const Minutes base = work / checkpoints;
  const Minutes rem = work % checkpoints;
  return base + (index < rem ? 1 : 0);
}

std::optional<ExecutionPlan> split_task(const Task& task, VuClassTag vu_type,
                                        std::int64_t available, Minutes now,
                                        const reliability::Lut& lut,
                                        const PolicyConfig& cfg) {
  const Minutes work = task.remaining_exec_min;
  assert(work > 0);
  // checkpoints run back to back, so the finish time is now + work for any
  // split; if that misses the deadline no redundancy can save it
  if (now + work >= task.deadline_min) return std::nullopt;

  const auto& bounds = cfg.redundancy_bounds[static_cast<int>(vu_type)];
  for (int x = bounds.n_min; x <= bounds.n_max; ++x) {
    if (x > available) break;
    if (!lut.has(vu_type, x)) continue;
    const Minutes mt = lut.mt99r(vu_type, x);
    if (mt < 1) continue;
    const std::int64_t g = (work + mt - 1) / mt;
    ExecutionPlan plan;
    plan.vu_type = vu_type;
    plan.redundancy = x;
    plan.checkpoints = g;
    plan.checkpoint_len_min = checkpoint_length(work, g, 0);
    plan.strict_slots_ok = g * x <= available;
    return plan;
  }
  return std::nullopt;
}

std::optional<ExecutionPlan> vu_requirement(const Task& task,
                                            const std::array<std::int64_t, 3>& idle,
                                            std::int64_t reserved_lrt, Minutes now,
                                            const reliability::Lut& lut,
                                            const PolicyConfig& cfg) {
  const std::int64_t lrt = idle[static_cast<int>(VuClassTag::Lrt)];
  if (task.critical && lrt < reserved_lrt) {
    // the reserve exists for exactly this case
    if (auto p = split_task(task, VuClassTag::Lrt, lrt, now, lut, cfg)) return p;
  } else if (lrt > reserved_lrt) {
    if (auto p = split_task(task, VuClassTag::Lrt, lrt, now, lut, cfg)) return p;
  }
  if (auto p = split_task(task, VuClassTag::Mrt,
                          idle[static_cast<int>(VuClassTag::Mrt)], now, lut, cfg))
    return p;
  if (auto p = split_task(task, VuClassTag::Srt,
                          idle[static_cast<int>(VuClassTag::Srt)], now, lut, cfg))
    return p;
  return std::nullopt;
}

std::vector<AdmissionDecision> accept_tasks(const OrderedQueue& queue,
                                            std::span<const Task* const> tasks,
                                            std::vector<VcSnapshot>& vcs, Minutes now,
                                            const reliability::Lut& lut,
                                            const PolicyConfig& cfg) {
  std::vector<std::size_t> probe_order(vcs.size());
  std::iota(probe_order.begin(), probe_order.end(), std::size_t{0});
  std::sort(probe_order.begin(), probe_order.end(),
            [&vcs](std::size_t a, std::size_t b) { return vcs[a].vc_id < vcs[b].vc_id; });

  std::vector<AdmissionDecision> out;
  out.reserve(queue.entries.size());
  for (const auto& entry : queue.entries) {
    const Task& task = *tasks[entry.index];
    AdmissionDecision d;
    d.task_id = task.id;

    if (task.deadline_min <= now + task.exec_min) {
      d.kind = AdmissionDecision::Kind::Reject;
      out.push_back(d);
      continue;
    }

    d.kind = AdmissionDecision::Kind::Keep;
    for (std::size_t v : probe_order) {
      if (auto plan = vu_requirement(task, vcs[v].idle, vcs[v].reserved_lrt, now,
                                     lut, cfg)) {
        d.kind = AdmissionDecision::Kind::Admit;
        d.vc_id = vcs[v].vc_id;
        d.plan = *plan;
        vcs[v].idle[static_cast<int>(plan->vu_type)] -= plan->redundancy;
        break;
      }
    }
    out.push_back(d);
  }
  return out;
}

int provisional_redundancy(const Task& task, std::span<const VcSnapshot> vcs,
                           Minutes now, const reliability::Lut& lut,
                           const PolicyConfig& cfg) {
  for (const VcSnapshot& vc : vcs) {
    if (auto p = vu_requirement(task, vc.idle, vc.reserved_lrt, now, lut, cfg))
      return p->redundancy;
  }
  // nothing fits right now; estimate against lifted availability so the EP
  // key still reflects the redundancy the task would get
  const std::int64_t lots = std::numeric_limits<std::int64_t>::max() / 4;
  if (auto p = vu_requirement(task, {lots, lots, lots}, 0, now, lut, cfg))
    return p->redundancy;
  return 2;
}

std::optional<ExecutionPlan> sota_plan(const Task& task, std::int64_t idle_total,
                                       int n_fixed) {
  if (idle_total < n_fixed) return std::nullopt;
  ExecutionPlan plan;
  plan.vu_type = VuClassTag::Srt;  // not used; the baseline ignores classes
  plan.redundancy = n_fixed;
  plan.checkpoints = 1;
  plan.checkpoint_len_min = task.remaining_exec_min;
  plan.strict_slots_ok = true;
  plan.class_blind = true;
  return plan;
}

}  // namespace vcsim::policy
