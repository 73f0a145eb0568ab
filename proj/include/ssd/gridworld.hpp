#pragma once

// Deterministic Coins / Harvest gridworlds with typed agents.
//
// Step order inside `step()`:
//   1. zaps (Harvest) resolve against pre-step positions; victims leave the grid
//   2. turns
//   3. simultaneous forward moves; contested cells and swaps block everyone involved
//   4. item collection
//   5. timeout bookkeeping and respawn of agents whose timeout expired
//   6. item dynamics (coin ageing/spawning, apple regrowth)

#include "ssd/rng.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssd::grid {

enum class EnvKind { Coins, Harvest };
enum class Variant { Symmetric, AsymRewards, AsymActions };
enum class AgentType : std::uint8_t { Standard, LowReward, HighReward, WideZap, SpawnBiased };
enum class Action : std::uint8_t { Stay, Forward, TurnLeft, TurnRight, Zap };
enum class Orientation : std::uint8_t { North, East, South, West };

// Who has to collect a mismatch coin for a spawn-biased agent's window to open.
enum class SpawnBiasTrigger {
    BiasedAgentCollects, // the spawn-biased agent takes the other's coin
    OtherAgentCollects,  // the other agent takes the spawn-biased agent's coin
};

inline constexpr int kNumAgentTypes = 5;

std::string_view to_string(EnvKind v);
std::string_view to_string(Variant v);
std::string_view to_string(AgentType v);
std::string_view to_string(Action v);
std::string_view to_string(SpawnBiasTrigger v);
EnvKind parse_env_kind(std::string_view text);
Variant parse_variant(std::string_view text);
AgentType parse_agent_type(std::string_view text);
SpawnBiasTrigger parse_spawn_bias_trigger(std::string_view text);

struct Position {
    int x = 0;
    int y = 0;

    auto operator<=>(const Position&) const = default;
};

Position forward_offset(Orientation o);
Position right_offset(Orientation o);
Orientation turn_left(Orientation o);
Orientation turn_right(Orientation o);

struct AgentSpec {
    int id = 0;
    AgentType type = AgentType::Standard;
    double reward_multiplier = 1.0; // per collected item
    double mismatch_penalty = 2.0;  // inflicted on the owner when this agent takes its coin
    int zap_width = 1;              // beam width in cells (odd)
    int spawn_bias_steps = 0;       // > 0 only for spawn-biased agents
    double phi = 1.0;               // social drive modifier

    static AgentSpec defaults(int id, AgentType type);

    bool operator==(const AgentSpec&) const = default;
};

struct EnvConfig {
    EnvKind env = EnvKind::Coins;
    Variant variant = Variant::Symmetric;
    int width = 5;
    int height = 5;
    int episode_length = 500;
    std::vector<AgentSpec> agents;
    int view_radius = 0; // 0 selects the default: full grid for Coins, 5 for Harvest

    // Rows of the static layout; empty means an open width x height grid.
    // 'W' wall, 'A' apple site (starts with an apple), 'a' apple site (starts
    // empty), 'P' spawn point, '.' floor.
    std::vector<std::string> map;

    int coin_lifetime = 50;
    double coin_spawn_prob = 0.1;
    int max_coins = 1;
    SpawnBiasTrigger spawn_bias_trigger = SpawnBiasTrigger::BiasedAgentCollects;

    // Index = number of apples within `regrowth_radius`; the last entry covers
    // every larger count.
    std::vector<double> regrowth_probs = {0.0, 0.0025, 0.005, 0.025};
    int regrowth_radius = 2;
    int zap_timeout = 25;
    int beam_length = 5;

    static EnvConfig coins(Variant variant = Variant::Symmetric);
    static EnvConfig harvest(Variant variant = Variant::Symmetric, int num_agents = 10);
    static std::vector<std::string> default_harvest_map();

    // Agent list for a variant: Coins uses two agents; Harvest splits N into halves.
    static std::vector<AgentSpec> variant_agents(EnvKind env, Variant variant, int num_agents);

    void validate() const;
    int num_agents() const { return static_cast<int>(agents.size()); }
    int effective_view_radius() const;
    int num_actions() const { return env == EnvKind::Harvest ? 5 : 4; }

    bool operator==(const EnvConfig&) const = default;
};

// Static per-config data derived once at reset.
struct Layout {
    EnvConfig config;
    std::vector<std::uint8_t> walls;       // row-major
    std::vector<std::uint8_t> apple_sites; // row-major
    std::vector<Position> spawn_points;

    explicit Layout(EnvConfig cfg);

    int index(Position p) const { return p.y * config.width + p.x; }
    bool in_bounds(Position p) const;
    bool is_wall(Position p) const { return !in_bounds(p) || walls[static_cast<std::size_t>(index(p))] != 0; }
};

struct AgentState {
    Position pos;
    Orientation facing = Orientation::North;
    int timeout = 0; // remaining steps off the grid

    bool operator==(const AgentState&) const = default;
};

struct Coin {
    int owner = 0;
    Position pos;
    int age = 0;

    bool operator==(const Coin&) const = default;
};

struct EnvState {
    std::shared_ptr<const Layout> layout;
    int t = 0;
    std::vector<AgentState> agents;
    std::vector<Coin> coins;
    std::vector<std::uint8_t> apples; // row-major occupancy
    int bias_remaining = 0;
    int bias_owner = -1;
    Rng rng;

    const EnvConfig& config() const { return layout->config; }
    bool active(int agent) const { return agents[static_cast<std::size_t>(agent)].timeout == 0; }
    bool done() const { return t >= config().episode_length; }
    int apple_count() const;

    bool operator==(const EnvState& other) const;
};

enum class EventKind : std::uint8_t {
    CoinOwn,      // agent collected its own coin; value = reward
    CoinMismatch, // agent collected counterparty's coin; value = reward
    Penalty,      // agent penalized because counterparty took its coin; value < 0
    Apple,        // value = reward
    Zap,          // agent zapped counterparty; value = 1
    Timeout,      // agent spent this step off the grid; value = 1
};

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view text);

struct Event {
    int t = 0;
    int agent = 0;
    EventKind kind = EventKind::CoinOwn;
    double value = 0.0;
    int counterparty = -1;

    bool operator==(const Event&) const = default;
};

using EventLog = std::vector<Event>;

struct StepResult {
    std::vector<double> rewards;
    EventLog events;
};

EnvState reset(const EnvConfig& config, std::uint64_t seed);

// Timed-out agents must be sent Action::Stay; Zap is only legal in Harvest.
StepResult step(EnvState& state, std::span<const Action> joint_action);

// Beam cells from `origin`: `length` cells ahead in each of `width` parallel
// lanes; a lane stops at the first blocked cell.
std::vector<Position> beam_cells(Position origin, Orientation facing, int width, int length,
                                 const std::function<bool(Position)>& blocked);

enum class CellKind : std::uint8_t { Empty, Wall, Apple, CoinOwn, CoinOther, Self, Other };

struct ObsCell {
    CellKind kind = CellKind::Empty;
    AgentType other_type = AgentType::Standard; // meaningful for CellKind::Other

    bool operator==(const ObsCell&) const = default;
};

struct Observation {
    EnvKind env = EnvKind::Coins;
    int agent = 0;
    int radius = 0;
    std::vector<ObsCell> cells; // (2r+1)^2, row-major, observer at the centre
    Orientation facing = Orientation::North;
    bool timed_out = false;
    std::vector<int> visible;

    int side() const { return 2 * radius + 1; }
    // Offsets relative to the observer; outside the window reads as Wall.
    const ObsCell& at(int dx, int dy) const;

    bool operator==(const Observation&) const = default;
};

Observation observe(const EnvState& state, int agent);

// Active agents other than `agent` inside its window; empty while `agent` is timed out.
std::vector<int> visible_agents(const EnvState& state, int agent);

} // namespace ssd::grid
