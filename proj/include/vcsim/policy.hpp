#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vcsim/core.hpp"
#include "vcsim/reliability.hpp"

namespace vcsim::policy {

// Admission-priority heuristics: expected profit, revenue, revenue per
// execution minute, earliest deadline, arrival order, and guaranteed
// urgency (laxity over execution, ascending).
enum class Ordering { Ep, Rv, Rpe, Edd, Fcfs, Gus };

inline constexpr std::array<Ordering, 6> kAllOrderings = {
    Ordering::Ep,  Ordering::Rv,   Ordering::Rpe,
    Ordering::Edd, Ordering::Fcfs, Ordering::Gus};

std::string_view to_string(Ordering o);
std::optional<Ordering> ordering_from_string(std::string_view s);

struct PolicyConfig {
  // criticality: laxity below delta*exec of headroom, or a short task
  double delta = 0.1;
  Minutes e_threshold_critical_min = 200;

  Ordering ordering = Ordering::Ep;

  // redundancy bounds per class, indexed by VuClassTag
  std::array<reliability::NBounds, 3> redundancy_bounds = {{{3, 5}, {2, 4}, {2, 3}}};

  // share of the long-stay arrival rate held back for critical tasks
  double reserved_lrt_fraction = 0.10;

  Money cost_per_vu_min = Money::from_units(1);  // K

  Minutes scan_period_min = 5;
  double t_vu_ewma_alpha = 0.1;  // smoothing for the LRT arrival estimate
};

bool classify_task(const Task& task, const PolicyConfig& cfg);

struct OrderedQueue {
  struct Entry {
    std::size_t index;  // position in the span handed to order_tasks
    std::int64_t task_id;
    // cached priority key as a rational num/den (den = 1 for scalar keys);
    // comparisons cross-multiply so no float creeps into the ordering
    std::int64_t key_num;
    std::int64_t key_den;
    Minutes arrival_min;
  };
  std::vector<Entry> entries;
};

// `provisional_x` holds the redundancy estimate per task (same length and
// order as `tasks`); only EP reads it. Ties break by arrival, then id.
OrderedQueue order_tasks(std::span<const Task* const> tasks, Ordering heuristic,
                         std::span<const int> provisional_x, Money k_per_vu_min);

// Length of checkpoint `index` (0-based) when `work` minutes are split into
// `checkpoints` pieces: the remainder goes to the front, so lengths are
// ceil(work/g) then floor(work/g) and always sum to `work`.
Minutes checkpoint_length(Minutes work, std::int64_t checkpoints, std::int64_t index);

// Smallest redundancy x within the class bounds such that x idle VUs exist
// and the remaining work still fits before the deadline; the work is split
// into ceil(work / MT99R(type, x)) sequential checkpoints. Returns no value
// when no x qualifies.
std::optional<ExecutionPlan> split_task(const Task& task, VuClassTag vu_type,
                                        std::int64_t available, Minutes now,
                                        const reliability::Lut& lut,
                                        const PolicyConfig& cfg);

// Class walk: critical tasks may dip into the reserved long-stay pool when
// it has dropped below the reservation target; otherwise long-stay VUs are
// used only above the target, then medium, then short. Equality at the
// target falls through to medium.
std::optional<ExecutionPlan> vu_requirement(const Task& task,
                                            const std::array<std::int64_t, 3>& idle,
                                            std::int64_t reserved_lrt, Minutes now,
                                            const reliability::Lut& lut,
                                            const PolicyConfig& cfg);

// Idle capacity of one controller at scan time, mutated as admissions are
// granted within the scan.
struct VcSnapshot {
  int vc_id = 0;
  std::array<std::int64_t, 3> idle{};  // per VuClassTag
  std::int64_t reserved_lrt = 0;       // this controller's T_VU
};

struct AdmissionDecision {
  enum class Kind { Admit, Reject, Keep };
  std::int64_t task_id = 0;
  Kind kind = Kind::Keep;
  int vc_id = -1;        // valid for Admit
  ExecutionPlan plan{};  // valid for Admit
};

// Walk the ordered queue once: tasks that cannot finish even if started now
// are rejected for good; the rest are admitted into the first controller
// (ascending id) where vu_requirement succeeds, or kept for the next scan.
// Idle counts in `vcs` are decremented as plans are granted.
std::vector<AdmissionDecision> accept_tasks(const OrderedQueue& queue,
                                            std::span<const Task* const> tasks,
                                            std::vector<VcSnapshot>& vcs, Minutes now,
                                            const reliability::Lut& lut,
                                            const PolicyConfig& cfg);

// Redundancy estimate used for EP keys before any allocation happens: the
// plan against current availability if one exists, else the plan with
// availability lifted, else 2.
int provisional_redundancy(const Task& task, std::span<const VcSnapshot> vcs,
                           Minutes now, const reliability::Lut& lut,
                           const PolicyConfig& cfg);

// Baseline planner: fixed redundancy, one span, any vehicles.
std::optional<ExecutionPlan> sota_plan(const Task& task, std::int64_t idle_total,
                                       int n_fixed = 3);

}  // namespace vcsim::policy
