#include "ssd/policies.hpp"

#include <array>
#include <cstdlib>

namespace ssd::grid {

namespace {

bool is_target(dilemma::Strategy role, const Observation& obs, const PolicyContext& ctx, int dx, int dy)
{
    const CellKind kind = obs.at(dx, dy).kind;
    if (obs.env == EnvKind::Coins) {
        if (kind == CellKind::CoinOwn) {
            return true;
        }
        return kind == CellKind::CoinOther && role == dilemma::Strategy::Defect;
    }
    if (kind != CellKind::Apple) {
        return false;
    }
    if (role == dilemma::Strategy::Defect) {
        return true;
    }
    int neighbours = 0;
    const int r = ctx.density_radius;
    for (int oy = -r; oy <= r; ++oy) {
        for (int ox = -r; ox <= r; ++ox) {
            if ((ox == 0 && oy == 0) || ox * ox + oy * oy > r * r) {
                continue;
            }
            if (obs.at(dx + ox, dy + oy).kind == CellKind::Apple) {
                ++neighbours;
            }
        }
    }
    return neighbours >= ctx.density_threshold;
}

// Cooperators never step onto an item their mask excludes.
bool passable(dilemma::Strategy role, const Observation& obs, const PolicyContext& ctx, Orientation o)
{
    Position f = forward_offset(o);
    CellKind k = obs.at(f.x, f.y).kind;
    if (k == CellKind::Wall || k == CellKind::Other) {
        return false;
    }
    if (role == dilemma::Strategy::Cooperate && (k == CellKind::Apple || k == CellKind::CoinOther)) {
        return is_target(role, obs, ctx, f.x, f.y);
    }
    return true;
}

Action turn_towards(Orientation facing, Orientation want)
{
    if (want == turn_left(facing)) {
        return Action::TurnLeft;
    }
    return Action::TurnRight;
}

Action wander(dilemma::Strategy role, const Observation& obs, const PolicyContext& ctx, Rng& rng)
{
    if (!passable(role, obs, ctx, obs.facing)) {
        return rng.bernoulli(0.5) ? Action::TurnLeft : Action::TurnRight;
    }
    static constexpr std::array<Action, 4> kChoices = {Action::Forward, Action::Forward, Action::TurnLeft,
                                                       Action::TurnRight};
    return kChoices[rng.below(kChoices.size())];
}

bool target_in_beam(const Observation& obs, const PolicyContext& ctx)
{
    auto cells = beam_cells({0, 0}, obs.facing, ctx.zap_width, ctx.beam_length,
                            [&](Position p) { return obs.at(p.x, p.y).kind == CellKind::Wall; });
    for (Position p : cells) {
        if (obs.at(p.x, p.y).kind == CellKind::Other) {
            return true;
        }
    }
    return false;
}

} // namespace

PolicyContext policy_context(const EnvConfig& config, int agent)
{
    PolicyContext ctx;
    ctx.beam_length = config.beam_length;
    ctx.zap_width = config.agents.at(static_cast<std::size_t>(agent)).zap_width;
    ctx.density_radius = config.regrowth_radius;
    return ctx;
}

Action scripted_policy(dilemma::Strategy role, const Observation& obs, const PolicyContext& ctx, Rng& rng)
{
    if (obs.timed_out) {
        return Action::Stay;
    }
    if (obs.env == EnvKind::Harvest && role == dilemma::Strategy::Defect && target_in_beam(obs, ctx)) {
        return Action::Zap;
    }

    std::vector<Position> best;
    int best_dist = 0;
    for (int dy = -obs.radius; dy <= obs.radius; ++dy) {
        for (int dx = -obs.radius; dx <= obs.radius; ++dx) {
            if (!is_target(role, obs, ctx, dx, dy)) {
                continue;
            }
            int d = std::abs(dx) + std::abs(dy);
            if (best.empty() || d < best_dist) {
                best.clear();
                best_dist = d;
            }
            if (d == best_dist) {
                best.push_back({dx, dy});
            }
        }
    }
    if (best.empty()) {
        return wander(role, obs, ctx, rng);
    }
    Position goal = best[best.size() == 1 ? 0 : rng.below(best.size())];

    // Directions that shrink the Manhattan distance, in fixed N/E/S/W priority.
    std::vector<Orientation> useful;
    if (goal.y < 0) useful.push_back(Orientation::North);
    if (goal.x > 0) useful.push_back(Orientation::East);
    if (goal.y > 0) useful.push_back(Orientation::South);
    if (goal.x < 0) useful.push_back(Orientation::West);

    for (Orientation o : useful) {
        if (o == obs.facing) {
            if (passable(role, obs, ctx, o)) {
                return Action::Forward;
            }
            if (useful.size() == 1) {
                return rng.bernoulli(0.5) ? Action::TurnLeft : Action::TurnRight;
            }
        }
    }
    std::vector<Orientation> open;
    for (Orientation o : useful) {
        if (o != obs.facing && passable(role, obs, ctx, o)) {
            open.push_back(o);
        }
    }
    if (open.empty()) {
        for (Orientation o : useful) {
            if (o != obs.facing) {
                open.push_back(o);
            }
        }
    }
    if (open.empty()) {
        return wander(role, obs, ctx, rng);
    }
    return turn_towards(obs.facing, open[open.size() == 1 ? 0 : rng.below(open.size())]);
}

} // namespace ssd::grid
