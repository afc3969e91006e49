#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace at::experiments {

enum class Kind {
    oracle_equivalence,
    harmonic_mc,
    channel_conjugation,
    sde_refinement,
    goe_gap_compare,
    antitree_pipeline,
};

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

std::string version();

/// Schema check (strict unknown-key rejection) plus semantic validation of
/// ranges and cross-field constraints. Throws a config error on any problem.
void validate_experiment(const config::Config& cfg);

struct RunOutcome {
    std::string output_dir;
    std::vector<std::string> artifacts; // paths of every file written
};

/// Validates, runs, and writes all artifacts plus a run manifest into the
/// config's output_dir (resolved against $ANTITREE_OUTPUT_ROOT when set and
/// the path is relative). Partial outputs are removed when the run fails.
RunOutcome run_experiment(const config::Config& cfg);

} // namespace at::experiments
