#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "vcsim/config.hpp"

using namespace vcsim;
using namespace vcsim::config;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("defaults survive an empty config") {
  const auto cfg = parse("");
  CHECK(cfg.workload.num_tasks == 1000);
  CHECK(cfg.workload.num_vus == 10000);
  CHECK(cfg.chain.t_mttr_min == 5);
  CHECK(cfg.policy.ordering == policy::Ordering::Ep);
  CHECK(cfg.engine.mode == engine::Mode::Proposed);
  // seed list defaults to twenty seeds
  REQUIRE(cfg.run.seeds.size() == 20);
  CHECK(cfg.run.seeds.front() == 1);
  CHECK(cfg.run.seeds.back() == 20);
  // derived engine fields follow their sources
  CHECK(cfg.engine.t_mttr_min == cfg.chain.t_mttr_min);
  CHECK(cfg.engine.lrt_residency_window_min == 400.0);
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("sections and keys parse with comments and spacing") {
  const auto cfg = parse(
      "# top comment\n"
      "[workload]\n"
      "num_tasks = 50   # inline comment\n"
      "  lrt_mean_min=800\n"
      "\n"
      "[chain]\n"
      "t_mttr_min = 7\n"
      "[policy]\n"
      "ordering = GUS\n"
      "srt_n_max = 6\n"
      "[engine]\n"
      "mode = sota\n"
      "speed_variation = on\n"
      "[run]\n"
      "seeds = 3,9,1..4\n"
      "orderings = all\n");
  CHECK(cfg.workload.num_tasks == 50);
  CHECK(cfg.workload.classes[2].mean_residency_min == 800.0);
  CHECK(cfg.chain.t_mttr_min == 7);
  CHECK(cfg.policy.ordering == policy::Ordering::Gus);
  CHECK(cfg.policy.redundancy_bounds[0].n_max == 6);
  CHECK(cfg.engine.mode == engine::Mode::Sota);
  CHECK(cfg.engine.speed_variation);
  CHECK(cfg.run.seeds == std::vector<std::uint64_t>{3, 9, 1, 2, 3, 4});
  CHECK(cfg.run.orderings.size() == 6);
  // derived fields track the overrides
  CHECK(cfg.engine.t_mttr_min == 7);
  CHECK(cfg.engine.lrt_residency_window_min == 800.0);
}

TEST_CASE("unknown keys fail fast with the line number") {
  CHECK_THROWS_WITH_AS(parse("[workload]\nnum_task = 5\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse("[nope]\n"), doctest::Contains("line 1"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse("[workload]\nnum_tasks\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse("num_tasks = 5\n"),
                       doctest::Contains("before any"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse("[run]\nseeds = 9..1\n"),
                       doctest::Contains("descending"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse("[run]\norderings = EP,XX\n"),
                       doctest::Contains("XX"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse("[workload]\nnum_tasks = ten\n"),
                       doctest::Contains("integer"), std::runtime_error);
}

TEST_CASE("validation catches cross-field mistakes") {
  auto cfg = parse("");
  cfg.workload.classes[0].population_share = 0.9;  // sums to 1.2 now
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("sum"),
                       std::runtime_error);

  cfg = parse("");
  cfg.chain.lut_q = 1.5;
  CHECK_THROWS_AS(validate(cfg), std::runtime_error);

  cfg = parse("");
  cfg.policy.redundancy_bounds[1] = {4, 2};
  CHECK_THROWS_AS(validate(cfg), std::runtime_error);

  cfg = parse("");
  cfg.engine.speed_lo = 1.5;
  cfg.engine.speed_hi = 1.0;
  CHECK_THROWS_AS(validate(cfg), std::runtime_error);

  cfg = parse("");
  cfg.traces.lut = "/definitely/not/here.csv";
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("does not exist"),
                       std::runtime_error);

  cfg = parse("");
  cfg.sweep.exec_multipliers = {0.5, -1.0};
  CHECK_THROWS_AS(validate(cfg), std::runtime_error);
}

TEST_CASE("canonical form is stable and total") {
  const auto a = canonical_config(parse(""));
  const auto b = canonical_config(parse("# just a comment\n[workload]\n"));
  CHECK(a == b);
  // every section appears even when never mentioned
  for (const char* section :
       {"[workload]", "[chain]", "[policy]", "[engine]", "[run]", "[sweep]",
        "[ingest]", "[traces]"})
    CHECK(a.find(section) != std::string::npos);

  const auto c = canonical_config(parse("[chain]\nt_mttr_min = 9\n"));
  CHECK(a != c);
}

TEST_CASE("digest distinguishes configs and ignores formatting") {
  const auto base = config_digest(parse(""));
  CHECK(base.size() == 16);
  CHECK(base == config_digest(parse("   \n# noise\n")));
  CHECK(base != config_digest(parse("[workload]\nnum_tasks = 999\n")));
  CHECK(base != config_digest(parse("[policy]\ndelta = 0.2\n")));
}

TEST_CASE("boolean and list forms") {
  CHECK(parse("[engine]\nspeed_variation = true\n").engine.speed_variation);
  CHECK(parse("[engine]\nspeed_variation = 1\n").engine.speed_variation);
  CHECK(!parse("[engine]\nspeed_variation = off\n").engine.speed_variation);
  CHECK_THROWS_AS(parse("[engine]\nspeed_variation = yep\n"), std::runtime_error);

  const auto cfg = parse("[sweep]\ntask_counts = 100, 200 ,300\n");
  CHECK(cfg.sweep.task_counts == std::vector<std::int64_t>{100, 200, 300});
}
