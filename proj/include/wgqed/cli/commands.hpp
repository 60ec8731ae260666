#pragma once

#include "wgqed/cli/config.hpp"
#include "wgqed/cli/report.hpp"

namespace wgqed::cli {

/// Mode table sorted by cutoff: pol, m, n, h, nu_c, branch at omega.
Artifact cmd_modes(const RunConfig& cfg);

/// Decay rate, window-regularized level shift and per-mode contributions.
Artifact cmd_decay(const RunConfig& cfg);

/// G1 on an (x, z, t) grid plus the fitted decay slopes (sidecar).
Artifact cmd_corr(const RunConfig& cfg);

struct OmegaDOutcome {
    Artifact artifact;
    bool no_crossing = false;  // for the selected radicand model
};

/// omega_d under both radicand models.
OmegaDOutcome cmd_omegad(const RunConfig& cfg);

struct ValidateOptions {
    bool corrupt_normalization = false;  // test hook
};

struct ValidateOutcome {
    Artifact artifact;
    bool all_passed = true;
};

/// Invariant battery; one row per check.
ValidateOutcome cmd_validate(const RunConfig& cfg, const ValidateOptions& options = {});

}  // namespace wgqed::cli
