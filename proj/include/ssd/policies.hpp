#pragma once

// Scripted cooperate/defect policies used for Schelling sweeps.

#include "ssd/dilemma.hpp"
#include "ssd/gridworld.hpp"
#include "ssd/rng.hpp"

namespace ssd::grid {

struct PolicyContext {
    int beam_length = 5;
    int zap_width = 1;
    // Harvest cooperators only target apples with at least this many
    // neighbouring apples within `density_radius`.
    int density_threshold = 3;
    int density_radius = 2;
};

PolicyContext policy_context(const EnvConfig& config, int agent);

// Greedy item seeking with a role-dependent mask. Timed-out agents always Stay.
Action scripted_policy(dilemma::Strategy role, const Observation& obs, const PolicyContext& ctx, Rng& rng);

} // namespace ssd::grid
