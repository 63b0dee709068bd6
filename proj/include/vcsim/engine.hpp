#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vcsim/core.hpp"
#include "vcsim/policy.hpp"
#include "vcsim/reliability.hpp"
#include "vcsim/workload.hpp"

namespace vcsim::engine {

// Proposed: class-aware splitting against the LUT, reserved long-stay pool,
// recruiter sync at max progress. Sota: fixed redundancy, class-blind, no
// splitting, failed tasks restart from zero.
enum class Mode { Proposed, Sota };

std::string_view to_string(Mode m);

struct EngineConfig {
  Mode mode = Mode::Proposed;
  int num_vcs = 1;
  Minutes horizon_min = 0;  // 0 picks max task deadline + one day
  Minutes t_mttr_min = 5;   // recruitment / VM copy latency

  // optional per-VU execution speed factor; off keeps every VU at 1.0
  bool speed_variation = false;
  double speed_lo = 0.9;
  double speed_hi = 1.1;

  int sota_redundancy = 3;

  // residency window used to scale the long-stay arrival estimate that
  // feeds the reservation target
  double lrt_residency_window_min = 400.0;
};

struct GroupMember {
  std::int64_t vu_id = -1;
  double progress_base = 0.0;  // checkpoint work done as of base_time
  Minutes base_time = 0;
  double speed = 1.0;
  Minutes joined_min = 0;  // billing starts here
};

// One checkpoint's replica group. Progress counts work within the current
// checkpoint only; completed checkpoints live in the task's remaining_exec.
struct RunningGroup {
  std::int64_t task_id = -1;
  int vc = 0;
  VuClassTag cls = VuClassTag::Srt;
  bool class_blind = false;
  Minutes checkpoint_len = 0;
  Minutes started_min = 0;
  std::int64_t recruiter_vu = -1;
  std::vector<GroupMember> members;

  // progress of members that left since the last recruit sync, so a sync
  // can still see a departed leader's high-water mark
  std::vector<double> departed_progress;

  struct PendingRecruit {
    std::uint64_t seq = 0;
    Minutes due = 0;
    double image = -1.0;  // >= 0: baseline mode, frozen progress of the leaver
  };
  std::vector<PendingRecruit> pending;

  std::uint64_t event_gen = 0;  // invalidates scheduled checkpoint_done events

  double member_workdone(const GroupMember& m, Minutes now) const;
  double max_workdone(Minutes now) const;  // over current members
  // earliest integer minute at which some member reaches checkpoint_len
  Minutes projected_end(Minutes now) const;
};

// Smallest redundancy whose MT99R covers the remaining checkpoint time,
// clamped into the class bounds.
int required_redundancy(const reliability::Lut& lut, VuClassTag cls,
                        Minutes remaining_checkpoint_min,
                        const reliability::NBounds& bounds);

// Max progress visible to a recruit sync: current members plus anything
// recorded from departed members.
double sync_workdone_max(const RunningGroup& g, Minutes now);

// Recruit joins at the synced maximum; the recruiter's own image is lifted
// to it first if it was behind. Departed records are consumed.
void apply_recruit_sync(RunningGroup& g, std::int64_t recruit_vu_id, Minutes now,
                        double speed);

struct TaskLedgerRow {
  std::int64_t task_id = 0;
  TaskStatus status = TaskStatus::Queued;
  Money revenue_credited;  // zero unless completed on time
  Money cost;              // accrued VU-minutes priced at K, kept even on failure
  Minutes completion_min = -1;
  int vc = -1;
  bool late = false;  // completed but past the deadline
};

struct SimReport {
  std::string policy;  // "proposed" or "sota"
  std::uint64_t seed = 0;
  std::int64_t num_tasks = 0;
  std::int64_t num_vus = 0;

  Money profit, revenue, cost;
  std::int64_t completed = 0;  // on time
  std::int64_t late = 0;
  std::int64_t failed = 0;  // discarded, including anything cut off at horizon
  std::int64_t rejected = 0;

  Minutes vu_minutes_busy = 0;
  Minutes vu_minutes_idle = 0;

  std::vector<TaskLedgerRow> ledger;  // by task id
  std::string config_digest;

  static std::string csv_header();
  std::string csv_row() const;
};

// Single-threaded deterministic event loop over the traces. The optional
// event log receives one CSV row per processed event and decision.
SimReport run(const workload::VuTrace& vus, const workload::TaskTrace& tasks,
              const policy::PolicyConfig& policy_cfg, const reliability::Lut& lut,
              const EngineConfig& cfg, std::uint64_t seed,
              std::ostream* event_log = nullptr);

inline constexpr char kEventLogHeader[] = "time_min,event_type,entity_id,detail";

}  // namespace vcsim::engine
