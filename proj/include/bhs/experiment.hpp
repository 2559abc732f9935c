#pragma once
// Experiment orchestration: turn a flat text config into a run (evolve +
// checkpoints + ledgers), fan the configured probes out over the stored
// trajectory, and leave behind a manifest that makes the output directory
// self-describing and resumable.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bhs/config.hpp"
#include "bhs/evolve.hpp"
#include "bhs/manifest.hpp"

namespace bhs {

extern const char* const kVersion;

// Build the evolution part of a config (grid.*, time.*, interaction.*,
// data.*, scattering.*, run.*). Throws ValidationError naming the offending
// key.
RunConfig run_config_from(const Config& cfg);

struct ExperimentOptions {
  std::string out_dir = "out";
  long checkpoint_every = 0;  // steps between resume checkpoints; 0 = final only
  std::optional<std::uint64_t> seed;  // overrides the config seed
  // Testing hook: halt the session (as an abrupt kill would) right after this
  // step's observers ran; the manifest stays in `running` state and the run
  // can be continued with resume(). Negative = run to completion.
  long stop_after_step = -1;
};

struct ExperimentOutcome {
  Manifest manifest;
  std::string out_dir;
  bool completed = false;  // false when stop_after_step halted the session
  // Labels of probe summaries that carried a pass verdict and failed it
  // (only when the config declares probes.pass_margin).
  std::vector<std::string> failed_probes;
};

// Validate (run config + parameter region for scattering.mode), then evolve,
// write sample/state checkpoints and ledger sidecars, run the probes in
// probes.list, and finalize the manifest. Aborts before any compute on
// validation failure; a blowup mid-run marks the manifest `aborted` and
// rethrows.
ExperimentOutcome run_experiment(const Config& cfg, const ExperimentOptions& opt);

// Continue an interrupted run from its latest state checkpoint (or from
// scratch when none was written yet), reusing the sample files already on
// disk; bit-identical to the uninterrupted run. A `complete` manifest is
// returned unchanged.
ExperimentOutcome resume_experiment(const std::string& manifest_path);

// Re-run a probe list against a finished run's stored trajectory; artifacts
// are added to the manifest.
ExperimentOutcome analyze_experiment(const std::string& manifest_path,
                                     const std::vector<std::string>& probe_names);

// Reconstruct the trajectory of a run directory from config.txt + samples/.
Trajectory load_trajectory(const std::string& out_dir);

// Names accepted in probes.list / analyze --probes.
const std::vector<std::string>& known_probe_names();

// Full command-line interface (subcommands simulate, analyze, probe-kernel,
// probe-commutator, probe-velocity, validate, fit, resume). Returns the
// process exit code: 0 pass, 1 validation failure, 2 runtime abort,
// 3 acceptance-threshold failure.
int run_cli(int argc, char** argv);

}  // namespace bhs
