#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "vcsim/config.hpp"
#include "vcsim/reliability.hpp"
#include "vcsim/workload.hpp"

namespace vcsim::driver {

// Orchestration layer behind the CLI. The binary only parses flags and
// forwards here, so tests can drive the exact production paths in-process.

// LUT per config: loaded from [traces] lut when pinned, otherwise built
// from the chain settings over the policy redundancy bounds.
reliability::Lut make_lut(const config::RunConfig& cfg);

// Traces per config and seed: loaded when pinned, ingested when a parking
// trace is configured, generated from [workload] otherwise.
workload::VuTrace make_vu_trace(const config::RunConfig& cfg, std::uint64_t seed);
workload::TaskTrace make_task_trace(const config::RunConfig& cfg, std::uint64_t seed);

// Subcommand bodies. Progress goes to `out`, failures to `err`; the return
// value is the process exit code, 0 only when every requested run finished
// and every output file landed. Files are written under `out_dir`
// (created if missing) via temp-then-rename.
int cmd_lut(const config::RunConfig& cfg, const std::string& out_dir,
            std::ostream& out, std::ostream& err);
int cmd_gen(const config::RunConfig& cfg, const std::string& out_dir,
            std::ostream& out, std::ostream& err);
int cmd_run(const config::RunConfig& cfg, const std::string& out_dir, int jobs,
            bool event_log, std::ostream& out, std::ostream& err);
int cmd_compare(const config::RunConfig& cfg, const std::string& out_dir, int jobs,
                std::ostream& out, std::ostream& err);

}  // namespace vcsim::driver
