#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "vcsim/policy.hpp"

using namespace vcsim;
using namespace vcsim::policy;

namespace {

Task mk_task(std::int64_t id, Minutes arrival, Minutes exec, Minutes deadline,
             double revenue = 1.0) {
  Task t;
  t.id = id;
  t.arrival_min = arrival;
  t.exec_min = exec;
  t.deadline_min = deadline;
  t.remaining_exec_min = exec;
  t.revenue = Money::from_double(revenue);
  return t;
}

reliability::LutEntry lut_entry(VuClassTag cls, int n, Minutes mt99r) {
  reliability::LutEntry e;
  e.cls = cls;
  e.n = n;
  e.mt99r_min = mt99r;
  return e;
}

std::vector<std::int64_t> ids_of(const OrderedQueue& q) {
  std::vector<std::int64_t> out;
  for (const auto& e : q.entries) out.push_back(e.task_id);
  return out;
}

OrderedQueue order(const std::vector<Task>& tasks, Ordering o,
                   const std::vector<int>& x = {},
                   Money k = Money::from_units(1)) {
  std::vector<const Task*> ptrs;
  for (const auto& t : tasks) ptrs.push_back(&t);
  std::vector<int> xs = x.empty() && o == Ordering::Ep
                            ? std::vector<int>(tasks.size(), 1)
                            : x;
  return order_tasks(ptrs, o, xs, k);
}

}  // namespace

TEST_CASE("criticality is a strict disjunction") {
  PolicyConfig cfg;
  cfg.e_threshold_critical_min = 0;  // isolates the laxity condition
  // laxity 1050 < 1.1 * 1000
  CHECK(classify_task(mk_task(0, 0, 1000, 2050), cfg));
  // boundary: 1100 is not strictly below 1100
  CHECK(!classify_task(mk_task(0, 0, 1000, 2100), cfg));
  CHECK(classify_task(mk_task(0, 0, 1000, 2099), cfg));

  cfg.e_threshold_critical_min = 100;
  // giant laxity, but the task is short: condition (b) alone fires
  CHECK(classify_task(mk_task(0, 0, 50, 1000050), cfg));
  CHECK(!classify_task(mk_task(0, 0, 100, 1000100), cfg));  // boundary again
}

TEST_CASE("ordering heuristics reproduce the worked examples") {
  SUBCASE("revenue per execution minute") {
    std::vector<Task> ts = {mk_task(0, 0, 20, 10000, 100),
                            mk_task(1, 1, 10, 10000, 100)};
    CHECK(ids_of(order(ts, Ordering::Rpe)) == std::vector<std::int64_t>{1, 0});
  }
  SUBCASE("earliest deadline first") {
    std::vector<Task> ts = {mk_task(0, 0, 10, 500), mk_task(1, 1, 10, 300),
                            mk_task(2, 2, 10, 900)};
    CHECK(ids_of(order(ts, Ordering::Edd)) == std::vector<std::int64_t>{1, 0, 2});
  }
  SUBCASE("expected profit nets out the vehicle bill") {
    // 24000 - 1*3*400 = 22800 beats 24000 - 1*3*2000 = 18000
    std::vector<Task> ts = {mk_task(0, 0, 2000, 30000, 24000),
                            mk_task(1, 1, 400, 30000, 24000)};
    CHECK(ids_of(order(ts, Ordering::Ep, {3, 3})) ==
          std::vector<std::int64_t>{1, 0});
    // with revenue-only ranking the tie falls back to arrival order
    CHECK(ids_of(order(ts, Ordering::Rv)) == std::vector<std::int64_t>{0, 1});
  }
  SUBCASE("arrival order and laxity-to-exec") {
    std::vector<Task> ts = {mk_task(0, 5, 10, 500), mk_task(1, 2, 10, 500),
                            mk_task(2, 8, 10, 500)};
    CHECK(ids_of(order(ts, Ordering::Fcfs)) == std::vector<std::int64_t>{1, 0, 2});
    // laxities: 485/10, 488/10, 482/10 ascending -> task 2 first
    CHECK(ids_of(order(ts, Ordering::Gus)) == std::vector<std::int64_t>{2, 0, 1});
  }
}

TEST_CASE("ep requires a redundancy estimate per task") {
  std::vector<Task> ts = {mk_task(0, 0, 10, 100)};
  std::vector<const Task*> ptrs = {&ts[0]};
  CHECK_THROWS_AS(order_tasks(ptrs, Ordering::Ep, {}, Money::from_units(1)),
                  std::invalid_argument);
}

TEST_CASE("orderings are permutations and scale-invariant") {
  std::vector<Task> ts;
  for (int i = 0; i < 40; ++i)
    ts.push_back(mk_task(i, (i * 37) % 11, 10 + (i * 13) % 900,
                         2000 + (i * 101) % 5000, 50 + (i * 77) % 9000));

  for (const Ordering o : kAllOrderings) {
    CAPTURE(to_string(o));
    auto ordered = ids_of(order(ts, o, std::vector<int>(ts.size(), 3)));
    auto sorted = ordered;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int64_t> expect(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) expect[i] = static_cast<std::int64_t>(i);
    CHECK(sorted == expect);
  }

  // doubling every revenue (and K with it, for EP) preserves the order
  std::vector<Task> doubled = ts;
  for (auto& t : doubled) t.revenue = t.revenue * 2;
  const std::vector<int> xs(ts.size(), 3);
  CHECK(ids_of(order(ts, Ordering::Ep, xs, Money::from_units(1))) ==
        ids_of(order(doubled, Ordering::Ep, xs, Money::from_units(2))));
  CHECK(ids_of(order(ts, Ordering::Rv)) == ids_of(order(doubled, Ordering::Rv)));
  CHECK(ids_of(order(ts, Ordering::Rpe)) == ids_of(order(doubled, Ordering::Rpe)));
  CHECK(ids_of(order(ts, Ordering::Edd)) == ids_of(order(doubled, Ordering::Edd)));
  CHECK(ids_of(order(ts, Ordering::Gus)) == ids_of(order(doubled, Ordering::Gus)));
}

TEST_CASE("checkpoint lengths sum to the work and lead with the remainder") {
  CHECK(checkpoint_length(2100, 7, 0) == 300);
  CHECK(checkpoint_length(2100, 7, 6) == 300);
  CHECK(checkpoint_length(100, 3, 0) == 34);
  CHECK(checkpoint_length(100, 3, 1) == 33);
  CHECK(checkpoint_length(100, 3, 2) == 33);
  Minutes sum = 0;
  for (std::int64_t i = 0; i < 7; ++i) sum += checkpoint_length(2100, 7, i);
  CHECK(sum == 2100);
  sum = 0;
  for (std::int64_t i = 0; i < 5; ++i) sum += checkpoint_length(103, 5, i);
  CHECK(sum == 103);
}

TEST_CASE("task splitting follows the lookup table") {
  PolicyConfig cfg;
  reliability::Lut lut;
  lut.entries.push_back(lut_entry(VuClassTag::Mrt, 2, 300));
  lut.entries.push_back(lut_entry(VuClassTag::Mrt, 3, 700));

  SUBCASE("the 2100-minute example splits into seven checkpoints") {
    const auto plan =
        split_task(mk_task(0, 0, 2100, 9000), VuClassTag::Mrt, 10, 0, lut, cfg);
    REQUIRE(plan.has_value());
    CHECK(plan->vu_type == VuClassTag::Mrt);
    CHECK(plan->redundancy == 2);
    CHECK(plan->checkpoints == 7);
    CHECK(plan->checkpoint_len_min == 300);
    CHECK(plan->checkpoint_len_min <= 300);  // within the reliability window
    CHECK(!plan->class_blind);
  }

  SUBCASE("without an n=2 row the three-vehicle split takes over") {
    reliability::Lut only3;
    only3.entries.push_back(lut_entry(VuClassTag::Mrt, 3, 700));
    const auto plan =
        split_task(mk_task(0, 0, 2100, 9000), VuClassTag::Mrt, 10, 0, only3, cfg);
    REQUIRE(plan.has_value());
    CHECK(plan->redundancy == 3);
    CHECK(plan->checkpoints == 3);
    CHECK(plan->checkpoint_len_min == 700);
  }

  SUBCASE("work inside one window needs no split") {
    reliability::Lut lrt;
    lrt.entries.push_back(lut_entry(VuClassTag::Lrt, 2, 150));
    const auto plan =
        split_task(mk_task(0, 0, 100, 5000), VuClassTag::Lrt, 2, 0, lrt, cfg);
    REQUIRE(plan.has_value());
    CHECK(plan->redundancy == 2);
    CHECK(plan->checkpoints == 1);
    CHECK(plan->checkpoint_len_min == 100);
  }

  SUBCASE("the literal slot product is recorded but not enforced") {
    const auto tight =
        split_task(mk_task(0, 0, 2100, 9000), VuClassTag::Mrt, 2, 0, lut, cfg);
    REQUIRE(tight.has_value());
    CHECK(tight->redundancy == 2);
    CHECK(!tight->strict_slots_ok);  // 7 * 2 > 2 idle
    const auto roomy =
        split_task(mk_task(0, 0, 2100, 9000), VuClassTag::Mrt, 14, 0, lut, cfg);
    REQUIRE(roomy.has_value());
    CHECK(roomy->strict_slots_ok);
  }

  SUBCASE("no-fit cases") {
    // nothing idle
    CHECK(!split_task(mk_task(0, 0, 2100, 9000), VuClassTag::Mrt, 1, 0, lut, cfg)
               .has_value());
    // sequential checkpoints cannot finish before the deadline
    CHECK(!split_task(mk_task(0, 0, 2100, 2100), VuClassTag::Mrt, 10, 0, lut, cfg)
               .has_value());
    CHECK(!split_task(mk_task(0, 0, 2100, 2101), VuClassTag::Mrt, 10, 700, lut, cfg)
               .has_value());
    // class absent from the table
    CHECK(!split_task(mk_task(0, 0, 100, 9000), VuClassTag::Srt, 10, 0, lut, cfg)
               .has_value());
  }
}

TEST_CASE("vehicle-class walk honours the reservation") {
  PolicyConfig cfg;
  reliability::Lut lut;
  lut.entries.push_back(lut_entry(VuClassTag::Srt, 3, 50));
  lut.entries.push_back(lut_entry(VuClassTag::Mrt, 2, 300));
  lut.entries.push_back(lut_entry(VuClassTag::Lrt, 2, 800));
  cfg.e_threshold_critical_min = 0;

  Task critical = mk_task(0, 0, 700, 1430);  // laxity 730 < 770
  Task relaxed = mk_task(1, 0, 700, 6000);   // plenty of headroom
  critical.critical = classify_task(critical, cfg);
  relaxed.critical = classify_task(relaxed, cfg);
  REQUIRE(critical.critical);
  REQUIRE(!relaxed.critical);

  SUBCASE("critical tasks may dip into the reserve") {
    const auto plan = vu_requirement(critical, {0, 0, 3}, 5, 0, lut, cfg);
    REQUIRE(plan.has_value());
    CHECK(plan->vu_type == VuClassTag::Lrt);
  }
  SUBCASE("non-critical tasks leave a depleted long-stay pool alone") {
    const auto plan = vu_requirement(relaxed, {0, 5, 2}, 5, 0, lut, cfg);
    REQUIRE(plan.has_value());
    CHECK(plan->vu_type == VuClassTag::Mrt);
  }
  SUBCASE("above the target everyone may use long-stay vehicles") {
    const auto plan = vu_requirement(relaxed, {0, 5, 6}, 5, 0, lut, cfg);
    REQUIRE(plan.has_value());
    CHECK(plan->vu_type == VuClassTag::Lrt);
  }
  SUBCASE("equality at the target falls through to medium") {
    const auto with_mrt = vu_requirement(relaxed, {0, 5, 5}, 5, 0, lut, cfg);
    REQUIRE(with_mrt.has_value());
    CHECK(with_mrt->vu_type == VuClassTag::Mrt);
    const auto crit_eq = vu_requirement(critical, {0, 5, 5}, 5, 0, lut, cfg);
    REQUIRE(crit_eq.has_value());
    CHECK(crit_eq->vu_type == VuClassTag::Mrt);
  }
  SUBCASE("empty pools yield no plan") {
    CHECK(!vu_requirement(relaxed, {0, 0, 0}, 5, 0, lut, cfg).has_value());
  }
  SUBCASE("short-stay is the last resort") {
    const Task small = mk_task(2, 0, 100, 6000);
    const auto plan = vu_requirement(small, {4, 0, 0}, 5, 0, lut, cfg);
    REQUIRE(plan.has_value());
    CHECK(plan->vu_type == VuClassTag::Srt);
    CHECK(plan->redundancy == 3);
  }
}

TEST_CASE("admission walk rejects, admits, and keeps") {
  PolicyConfig cfg;
  reliability::Lut lut;
  lut.entries.push_back(lut_entry(VuClassTag::Mrt, 2, 300));

  SUBCASE("the deadline guard is inclusive") {
    std::vector<Task> ts = {mk_task(0, 0, 500, 1400)};
    std::vector<const Task*> ptrs = {&ts[0]};
    auto queue = order(ts, Ordering::Fcfs);
    std::vector<VcSnapshot> vcs = {{0, {0, 10, 0}, 0}};
    const auto decisions = accept_tasks(queue, ptrs, vcs, 1000, lut, cfg);
    REQUIRE(decisions.size() == 1);
    CHECK(decisions[0].kind == AdmissionDecision::Kind::Reject);  // 1400 <= 1500
  }

  SUBCASE("a fitting task is admitted with its plan") {
    std::vector<Task> ts = {mk_task(0, 0, 500, 5000)};
    std::vector<const Task*> ptrs = {&ts[0]};
    auto queue = order(ts, Ordering::Fcfs);
    std::vector<VcSnapshot> vcs = {{0, {0, 10, 0}, 0}};
    const auto decisions = accept_tasks(queue, ptrs, vcs, 0, lut, cfg);
    REQUIRE(decisions.size() == 1);
    CHECK(decisions[0].kind == AdmissionDecision::Kind::Admit);
    CHECK(decisions[0].vc_id == 0);
    CHECK(decisions[0].plan.redundancy == 2);
    CHECK(vcs[0].idle[1] == 8);  // snapshot debited
  }

  SUBCASE("scarcity goes to the better-ranked task") {
    std::vector<Task> ts = {mk_task(0, 0, 500, 5000, 100.0),
                            mk_task(1, 0, 500, 5000, 900.0)};
    std::vector<const Task*> ptrs = {&ts[0], &ts[1]};
    auto queue = order(ts, Ordering::Ep, {2, 2});
    std::vector<VcSnapshot> vcs = {{0, {0, 2, 0}, 0}};
    const auto decisions = accept_tasks(queue, ptrs, vcs, 0, lut, cfg);
    REQUIRE(decisions.size() == 2);
    CHECK(decisions[0].task_id == 1);
    CHECK(decisions[0].kind == AdmissionDecision::Kind::Admit);
    CHECK(decisions[1].task_id == 0);
    CHECK(decisions[1].kind == AdmissionDecision::Kind::Keep);
  }

  SUBCASE("second controller is probed in id order") {
    std::vector<Task> ts = {mk_task(0, 0, 500, 5000)};
    std::vector<const Task*> ptrs = {&ts[0]};
    auto queue = order(ts, Ordering::Fcfs);
    std::vector<VcSnapshot> vcs = {{0, {0, 0, 0}, 0}, {1, {0, 4, 0}, 0}};
    const auto decisions = accept_tasks(queue, ptrs, vcs, 0, lut, cfg);
    CHECK(decisions[0].kind == AdmissionDecision::Kind::Admit);
    CHECK(decisions[0].vc_id == 1);
  }
}

TEST_CASE("provisional redundancy estimates degrade gracefully") {
  PolicyConfig cfg;
  reliability::Lut lut;
  lut.entries.push_back(lut_entry(VuClassTag::Mrt, 2, 300));
  lut.entries.push_back(lut_entry(VuClassTag::Mrt, 3, 700));

  const Task t = mk_task(0, 0, 2100, 9000);
  std::vector<VcSnapshot> roomy = {{0, {0, 10, 0}, 0}};
  CHECK(provisional_redundancy(t, roomy, 0, lut, cfg) == 2);

  // nothing idle now, but the class could host it: lifted availability
  std::vector<VcSnapshot> empty = {{0, {0, 0, 0}, 0}};
  CHECK(provisional_redundancy(t, empty, 0, lut, cfg) == 2);

  // infeasible everywhere: fall back to the smallest sensible group
  const Task hopeless = mk_task(1, 0, 2100, 2100);
  CHECK(provisional_redundancy(hopeless, empty, 0, lut, cfg) == 2);
}

TEST_CASE("baseline planner is fixed and class-blind") {
  const Task t = mk_task(0, 0, 2100, 9000);
  const auto plan = sota_plan(t, 5);
  REQUIRE(plan.has_value());
  CHECK(plan->redundancy == 3);
  CHECK(plan->checkpoints == 1);
  CHECK(plan->checkpoint_len_min == 2100);  // one unbroken span
  CHECK(plan->class_blind);
  CHECK(!sota_plan(t, 2).has_value());
}
