#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <optional>
#include <string_view>

#include "vcsim/money.hpp"

namespace vcsim {

// The whole simulator runs on an integer-minute clock.
using Minutes = std::int64_t;

enum class VuClassTag : int { Srt = 0, Mrt = 1, Lrt = 2 };
inline constexpr int kNumVuClasses = 3;

inline std::string_view to_string(VuClassTag t) {
  switch (t) {
    case VuClassTag::Srt: return "SRT";
    case VuClassTag::Mrt: return "MRT";
    case VuClassTag::Lrt: return "LRT";
  }
  return "?";
}

inline std::optional<VuClassTag> vu_class_from_string(std::string_view s) {
  if (s == "SRT") return VuClassTag::Srt;
  if (s == "MRT") return VuClassTag::Mrt;
  if (s == "LRT") return VuClassTag::Lrt;
  return std::nullopt;
}

// Residency class: exponential stay-time mean plus the class's share of the
// vehicle population.
struct VuClass {
  VuClassTag tag;
  double mean_residency_min;
  double population_share;
};

// short / medium / long residency mix used everywhere by default
inline std::array<VuClass, 3> default_vu_classes() {
  return {{{VuClassTag::Srt, 120.0, 0.70},
           {VuClassTag::Mrt, 200.0, 0.20},
           {VuClassTag::Lrt, 400.0, 0.10}}};
}

enum class VuState { Configuring, Idle, Executing, Departed };

struct VehicularUnit {
  std::int64_t id = 0;
  VuClassTag cls = VuClassTag::Srt;
  Minutes arrival_min = 0;
  Minutes declared_stay_min = 0;   // what the driver announced
  Minutes actual_departure_min = 0;  // when it really leaves
  Minutes config_done_min = 0;     // usable only from here on
  VuState state = VuState::Configuring;
};

enum class TaskStatus { Queued, Rejected, Running, FailedPendingRetry, Completed, Discarded };

// How an admitted task runs: `redundancy` parallel copies per checkpoint
// group, `checkpoints` sequential splits of the remaining work at planning
// time. Only one checkpoint's group exists at a time.
struct ExecutionPlan {
  VuClassTag vu_type = VuClassTag::Srt;
  int redundancy = 0;
  std::int64_t checkpoints = 0;
  Minutes checkpoint_len_min = 0;  // longest split; later ones may be shorter
  std::int64_t current_checkpoint = 0;
  Minutes persisted_progress_min = 0;
  // True when idle VUs could cover every checkpoint of the plan at once
  // (slots = checkpoints * redundancy). Recorded for comparison only; the
  // gate is concurrent occupancy, since checkpoints run sequentially and
  // reuse freed VUs.
  bool strict_slots_ok = true;
  // Set by the baseline planner, which treats every vehicle the same.
  bool class_blind = false;
};

struct Task {
  std::int64_t id = 0;
  Minutes arrival_min = 0;
  Minutes exec_min = 0;
  Minutes deadline_min = 0;
  Money revenue;
  Minutes remaining_exec_min = 0;
  bool critical = false;
  std::optional<ExecutionPlan> plan;
  TaskStatus status = TaskStatus::Queued;

  Minutes laxity_min() const { return deadline_min - arrival_min - exec_min; }
};

// cost of keeping n copies busy for exec_min minutes at k per VU-minute
inline Money task_cost(std::int64_t n, Minutes exec_min, Money k_per_vu_min) {
  assert(n >= 0 && exec_min >= 0 && k_per_vu_min.milli >= 0);
  return k_per_vu_min * (n * exec_min);
}

// revenue minus cost; credited to the zone only for on-time completion
inline Money task_profit(Money revenue, Money total_cost) {
  return revenue - total_cost;
}

}  // namespace vcsim
