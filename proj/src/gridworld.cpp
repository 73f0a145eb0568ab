#include "ssd/gridworld.hpp"

#include "ssd/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ssd::grid {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::array<E, N>& values, const char* what)
{
    for (E v : values) {
        if (to_string(v) == text) {
            return v;
        }
    }
    throw ValidationError(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

constexpr std::array kAgentTypes = {AgentType::Standard, AgentType::LowReward, AgentType::HighReward,
                                    AgentType::WideZap, AgentType::SpawnBiased};

} // namespace

std::string_view to_string(EnvKind v)
{
    return v == EnvKind::Coins ? "Coins" : "Harvest";
}

std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::Symmetric: return "Symmetric";
    case Variant::AsymRewards: return "AsymRewards";
    case Variant::AsymActions: return "AsymActions";
    }
    return "?";
}

std::string_view to_string(AgentType v)
{
    switch (v) {
    case AgentType::Standard: return "Standard";
    case AgentType::LowReward: return "LowReward";
    case AgentType::HighReward: return "HighReward";
    case AgentType::WideZap: return "WideZap";
    case AgentType::SpawnBiased: return "SpawnBiased";
    }
    return "?";
}

std::string_view to_string(Action v)
{
    switch (v) {
    case Action::Stay: return "Stay";
    case Action::Forward: return "Forward";
    case Action::TurnLeft: return "TurnLeft";
    case Action::TurnRight: return "TurnRight";
    case Action::Zap: return "Zap";
    }
    return "?";
}

std::string_view to_string(SpawnBiasTrigger v)
{
    return v == SpawnBiasTrigger::BiasedAgentCollects ? "BiasedAgentCollects" : "OtherAgentCollects";
}

EnvKind parse_env_kind(std::string_view text)
{
    return parse_enum(text, std::array{EnvKind::Coins, EnvKind::Harvest}, "environment");
}

Variant parse_variant(std::string_view text)
{
    return parse_enum(text, std::array{Variant::Symmetric, Variant::AsymRewards, Variant::AsymActions}, "variant");
}

AgentType parse_agent_type(std::string_view text)
{
    return parse_enum(text, kAgentTypes, "agent type");
}

SpawnBiasTrigger parse_spawn_bias_trigger(std::string_view text)
{
    return parse_enum(text,
                      std::array{SpawnBiasTrigger::BiasedAgentCollects, SpawnBiasTrigger::OtherAgentCollects},
                      "spawn bias trigger");
}

std::string_view to_string(EventKind k)
{
    switch (k) {
    case EventKind::CoinOwn: return "coin_own";
    case EventKind::CoinMismatch: return "coin_mismatch";
    case EventKind::Penalty: return "penalty";
    case EventKind::Apple: return "apple";
    case EventKind::Zap: return "zap";
    case EventKind::Timeout: return "timeout";
    }
    return "?";
}

EventKind parse_event_kind(std::string_view text)
{
    return parse_enum(text,
                      std::array{EventKind::CoinOwn, EventKind::CoinMismatch, EventKind::Penalty, EventKind::Apple,
                                 EventKind::Zap, EventKind::Timeout},
                      "event kind");
}

Position forward_offset(Orientation o)
{
    switch (o) {
    case Orientation::North: return {0, -1};
    case Orientation::East: return {1, 0};
    case Orientation::South: return {0, 1};
    case Orientation::West: return {-1, 0};
    }
    return {0, 0};
}

Position right_offset(Orientation o)
{
    return forward_offset(turn_right(o));
}

Orientation turn_left(Orientation o)
{
    return static_cast<Orientation>((static_cast<int>(o) + 3) % 4);
}

Orientation turn_right(Orientation o)
{
    return static_cast<Orientation>((static_cast<int>(o) + 1) % 4);
}

// ---------------------------------------------------------------------------

AgentSpec AgentSpec::defaults(int id, AgentType type)
{
    AgentSpec s;
    s.id = id;
    s.type = type;
    switch (type) {
    case AgentType::Standard: break;
    case AgentType::LowReward:
        s.reward_multiplier = 0.5;
        s.mismatch_penalty = 3.0;
        break;
    case AgentType::HighReward:
        s.reward_multiplier = 1.5;
        s.mismatch_penalty = 1.0;
        break;
    case AgentType::WideZap: s.zap_width = 3; break;
    case AgentType::SpawnBiased: s.spawn_bias_steps = 25; break;
    }
    return s;
}

std::vector<std::string> EnvConfig::default_harvest_map()
{
    return {
        "P..P..P..P..P..P",
        "................",
        "..A.....A....A..",
        ".AAA...AAA..AAA.",
        "AAAAA.AAAAAAAAAA",
        ".AAA...AAA..AAA.",
        "..A.....A....A..",
        "................",
        ".P...P....P...P.",
    };
}

std::vector<AgentSpec> EnvConfig::variant_agents(EnvKind env, Variant variant, int num_agents)
{
    AgentType first = AgentType::Standard;
    AgentType second = AgentType::Standard;
    if (variant == Variant::AsymRewards) {
        first = AgentType::HighReward;
        second = AgentType::LowReward;
    } else if (variant == Variant::AsymActions) {
        second = env == EnvKind::Coins ? AgentType::SpawnBiased : AgentType::WideZap;
    }
    std::vector<AgentSpec> agents;
    for (int i = 0; i < num_agents; ++i) {
        agents.push_back(AgentSpec::defaults(i, i < (num_agents + 1) / 2 ? first : second));
    }
    return agents;
}

EnvConfig EnvConfig::coins(Variant variant)
{
    EnvConfig c;
    c.env = EnvKind::Coins;
    c.variant = variant;
    c.width = 5;
    c.height = 5;
    c.episode_length = 500;
    c.agents = variant_agents(EnvKind::Coins, variant, 2);
    return c;
}

EnvConfig EnvConfig::harvest(Variant variant, int num_agents)
{
    EnvConfig c;
    c.env = EnvKind::Harvest;
    c.variant = variant;
    c.map = default_harvest_map();
    c.width = static_cast<int>(c.map.front().size());
    c.height = static_cast<int>(c.map.size());
    c.episode_length = 1000;
    c.agents = variant_agents(EnvKind::Harvest, variant, num_agents);
    return c;
}

int EnvConfig::effective_view_radius() const
{
    if (view_radius > 0) {
        return view_radius;
    }
    return env == EnvKind::Coins ? std::max(width, height) - 1 : 5;
}

void EnvConfig::validate() const
{
    auto fail = [](const std::string& what) { throw ValidationError("invalid environment config: " + what); };
    if (episode_length <= 0) {
        fail("episode_length must be > 0");
    }
    if (width < 3 || height < 3) {
        fail("grid must be at least 3x3");
    }
    if (env == EnvKind::Coins && agents.size() != 2) {
        fail("Coins needs exactly 2 agents");
    }
    if (env == EnvKind::Harvest && agents.size() < 2) {
        fail("Harvest needs at least 2 agents");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto& a = agents[i];
        if (a.id != static_cast<int>(i)) {
            fail("agent ids must be 0..N-1 in order");
        }
        if (!(a.phi >= 0.0) || !std::isfinite(a.phi)) {
            fail("phi must be >= 0");
        }
        if (a.zap_width < 1 || a.zap_width % 2 == 0) {
            fail("zap_width must be a positive odd number");
        }
        if (a.spawn_bias_steps < 0 || !(a.mismatch_penalty >= 0.0) || !std::isfinite(a.reward_multiplier)) {
            fail("agent " + std::to_string(i) + " has invalid parameters");
        }
    }
    if (view_radius < 0) {
        fail("view_radius must be >= 0");
    }
    if (!map.empty()) {
        if (static_cast<int>(map.size()) != height) {
            fail("map has " + std::to_string(map.size()) + " rows but height is " + std::to_string(height));
        }
        for (const auto& row : map) {
            if (static_cast<int>(row.size()) != width) {
                fail("map row '" + row + "' does not match width " + std::to_string(width));
            }
            for (char c : row) {
                if (std::string_view(".WAaP").find(c) == std::string_view::npos) {
                    fail(std::string("unknown map symbol '") + c + "'");
                }
                if (env == EnvKind::Coins && (c == 'A' || c == 'a')) {
                    fail("apple sites are not allowed in Coins");
                }
            }
        }
    }
    if (coin_lifetime <= 0 || max_coins < 1 || coin_spawn_prob < 0.0 || coin_spawn_prob > 1.0) {
        fail("coin parameters out of range");
    }
    if (regrowth_probs.empty()) {
        fail("regrowth_probs must not be empty");
    }
    for (double p : regrowth_probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            fail("regrowth probabilities must lie in [0, 1]");
        }
    }
    if (regrowth_radius < 0 || zap_timeout < 1 || beam_length < 1) {
        fail("harvest parameters out of range");
    }
}

// ---------------------------------------------------------------------------

Layout::Layout(EnvConfig cfg) : config(std::move(cfg))
{
    const std::size_t cells = static_cast<std::size_t>(config.width * config.height);
    walls.assign(cells, 0);
    apple_sites.assign(cells, 0);
    for (int y = 0; y < static_cast<int>(config.map.size()); ++y) {
        for (int x = 0; x < config.width; ++x) {
            char c = config.map[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            std::size_t i = static_cast<std::size_t>(y * config.width + x);
            walls[i] = c == 'W';
            apple_sites[i] = c == 'A' || c == 'a';
            if (c == 'P') {
                spawn_points.push_back({x, y});
            }
        }
    }
}

bool Layout::in_bounds(Position p) const
{
    return p.x >= 0 && p.y >= 0 && p.x < config.width && p.y < config.height;
}

int EnvState::apple_count() const
{
    return static_cast<int>(std::count(apples.begin(), apples.end(), std::uint8_t{1}));
}

bool EnvState::operator==(const EnvState& other) const
{
    return layout->config == other.layout->config && t == other.t && agents == other.agents &&
           coins == other.coins && apples == other.apples && bias_remaining == other.bias_remaining &&
           bias_owner == other.bias_owner && rng == other.rng;
}

namespace {

bool occupied_by_agent(const EnvState& s, Position p, int ignore = -1)
{
    for (int i = 0; i < static_cast<int>(s.agents.size()); ++i) {
        if (i != ignore && s.active(i) && s.agents[static_cast<std::size_t>(i)].pos == p) {
            return true;
        }
    }
    return false;
}

bool has_coin(const EnvState& s, Position p)
{
    return std::any_of(s.coins.begin(), s.coins.end(), [&](const Coin& c) { return c.pos == p; });
}

bool has_item(const EnvState& s, Position p)
{
    return has_coin(s, p) || s.apples[static_cast<std::size_t>(s.layout->index(p))] != 0;
}

// Free floor cells for (re)spawning: spawn points first when the map has them.
std::vector<Position> spawn_candidates(const EnvState& s)
{
    const Layout& L = *s.layout;
    std::vector<Position> out;
    for (Position p : L.spawn_points) {
        if (!occupied_by_agent(s, p) && !has_item(s, p)) {
            out.push_back(p);
        }
    }
    if (!out.empty()) {
        return out;
    }
    for (int y = 0; y < L.config.height; ++y) {
        for (int x = 0; x < L.config.width; ++x) {
            Position p{x, y};
            if (!L.is_wall(p) && !L.apple_sites[static_cast<std::size_t>(L.index(p))] &&
                !occupied_by_agent(s, p) && !has_item(s, p)) {
                out.push_back(p);
            }
        }
    }
    return out;
}

int neighbour_apples(const EnvState& s, const std::vector<std::uint8_t>& apples, Position c, int radius)
{
    const Layout& L = *s.layout;
    int n = 0;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if ((dx == 0 && dy == 0) || dx * dx + dy * dy > radius * radius) {
                continue;
            }
            Position p{c.x + dx, c.y + dy};
            if (L.in_bounds(p) && apples[static_cast<std::size_t>(L.index(p))] != 0) {
                ++n;
            }
        }
    }
    return n;
}

} // namespace

EnvState reset(const EnvConfig& config, std::uint64_t seed)
{
    config.validate();
    EnvState s;
    s.layout = std::make_shared<const Layout>(config);
    s.rng = Rng(derive_seed(seed, 0x656e76));
    s.apples = s.layout->apple_sites;
    for (std::size_t i = 0; i < s.apples.size(); ++i) {
        if (s.apples[i] != 0) {
            int x = static_cast<int>(i) % config.width;
            int y = static_cast<int>(i) / config.width;
            s.apples[i] = config.map[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == 'A';
        }
    }

    const Layout& L = *s.layout;
    std::vector<Position> preferred = L.spawn_points;
    std::vector<Position> others;
    for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
            Position p{x, y};
            if (!L.is_wall(p) && !L.apple_sites[static_cast<std::size_t>(L.index(p))] &&
                std::find(preferred.begin(), preferred.end(), p) == preferred.end()) {
                others.push_back(p);
            }
        }
    }
    s.rng.shuffle(preferred);
    s.rng.shuffle(others);
    preferred.insert(preferred.end(), others.begin(), others.end());
    if (preferred.size() < config.agents.size()) {
        throw ValidationError("configuration error: " + std::to_string(config.agents.size()) +
                              " agents but only " + std::to_string(preferred.size()) + " free cells");
    }
    for (std::size_t i = 0; i < config.agents.size(); ++i) {
        AgentState a;
        a.pos = preferred[i];
        a.facing = static_cast<Orientation>(s.rng.below(4));
        s.agents.push_back(a);
    }
    return s;
}

std::vector<Position> beam_cells(Position origin, Orientation facing, int width, int length,
                                 const std::function<bool(Position)>& blocked)
{
    std::vector<Position> cells;
    Position fwd = forward_offset(facing);
    Position right = right_offset(facing);
    int half = width / 2;
    for (int lane = -half; lane <= half; ++lane) {
        for (int d = 1; d <= length; ++d) {
            Position p{origin.x + d * fwd.x + lane * right.x, origin.y + d * fwd.y + lane * right.y};
            if (blocked(p)) {
                break;
            }
            cells.push_back(p);
        }
    }
    return cells;
}

StepResult step(EnvState& s, std::span<const Action> joint_action)
{
    const EnvConfig& cfg = s.config();
    const Layout& L = *s.layout;
    const int n = cfg.num_agents();
    if (static_cast<int>(joint_action.size()) != n) {
        throw ValidationError("joint action has " + std::to_string(joint_action.size()) + " entries for " +
                              std::to_string(n) + " agents");
    }
    if (s.done()) {
        throw ValidationError("episode already finished");
    }
    for (int i = 0; i < n; ++i) {
        Action a = joint_action[static_cast<std::size_t>(i)];
        if (!s.active(i) && a != Action::Stay) {
            throw ValidationError("agent " + std::to_string(i) + " is timed out and must Stay");
        }
        if (a == Action::Zap && cfg.env != EnvKind::Harvest) {
            throw ValidationError("Zap is only available in Harvest");
        }
    }

    StepResult out;
    out.rewards.assign(static_cast<std::size_t>(n), 0.0);
    const int t = s.t;
    std::vector<bool> was_out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        was_out[static_cast<std::size_t>(i)] = !s.active(i);
    }

    // 1. zaps
    std::vector<bool> zapped(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        if (was_out[static_cast<std::size_t>(i)] || joint_action[static_cast<std::size_t>(i)] != Action::Zap) {
            continue;
        }
        const AgentState& shooter = s.agents[static_cast<std::size_t>(i)];
        auto cells = beam_cells(shooter.pos, shooter.facing, cfg.agents[static_cast<std::size_t>(i)].zap_width,
                                cfg.beam_length, [&](Position p) { return L.is_wall(p); });
        for (int j = 0; j < n; ++j) {
            if (j == i || was_out[static_cast<std::size_t>(j)]) {
                continue;
            }
            if (std::find(cells.begin(), cells.end(), s.agents[static_cast<std::size_t>(j)].pos) != cells.end()) {
                out.events.push_back({t, i, EventKind::Zap, 1.0, j});
                zapped[static_cast<std::size_t>(j)] = true;
            }
        }
    }
    for (int j = 0; j < n; ++j) {
        if (zapped[static_cast<std::size_t>(j)]) {
            s.agents[static_cast<std::size_t>(j)].timeout = cfg.zap_timeout;
        }
    }

    // 2. turns
    for (int i = 0; i < n; ++i) {
        if (!s.active(i)) {
            continue;
        }
        auto& a = s.agents[static_cast<std::size_t>(i)];
        Action act = joint_action[static_cast<std::size_t>(i)];
        if (act == Action::TurnLeft) {
            a.facing = turn_left(a.facing);
        } else if (act == Action::TurnRight) {
            a.facing = turn_right(a.facing);
        }
    }

    // 3. simultaneous moves
    std::vector<bool> moving(static_cast<std::size_t>(n), false);
    std::vector<Position> target(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& a = s.agents[static_cast<std::size_t>(i)];
        target[static_cast<std::size_t>(i)] = a.pos;
        if (!s.active(i) || joint_action[static_cast<std::size_t>(i)] != Action::Forward) {
            continue;
        }
        Position f = forward_offset(a.facing);
        Position p{a.pos.x + f.x, a.pos.y + f.y};
        if (!L.is_wall(p)) {
            moving[static_cast<std::size_t>(i)] = true;
            target[static_cast<std::size_t>(i)] = p;
        }
    }
    // conflicts are decided on the intended targets of all movers at once
    std::vector<bool> blocked(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i || !moving[static_cast<std::size_t>(i)] || !moving[static_cast<std::size_t>(j)]) {
                continue;
            }
            bool contested = target[static_cast<std::size_t>(i)] == target[static_cast<std::size_t>(j)];
            bool swap = target[static_cast<std::size_t>(i)] == s.agents[static_cast<std::size_t>(j)].pos &&
                        target[static_cast<std::size_t>(j)] == s.agents[static_cast<std::size_t>(i)].pos;
            if (contested || swap) {
                blocked[static_cast<std::size_t>(i)] = true;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (blocked[static_cast<std::size_t>(i)]) {
            moving[static_cast<std::size_t>(i)] = false;
            target[static_cast<std::size_t>(i)] = s.agents[static_cast<std::size_t>(i)].pos;
        }
    }
    // an agent moving into a cell whose occupant stays put is blocked too
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (!moving[static_cast<std::size_t>(i)]) {
                continue;
            }
            for (int j = 0; j < n; ++j) {
                if (j == i || !s.active(j) || moving[static_cast<std::size_t>(j)]) {
                    continue;
                }
                if (s.agents[static_cast<std::size_t>(j)].pos == target[static_cast<std::size_t>(i)]) {
                    moving[static_cast<std::size_t>(i)] = false;
                    target[static_cast<std::size_t>(i)] = s.agents[static_cast<std::size_t>(i)].pos;
                    changed = true;
                    break;
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (moving[static_cast<std::size_t>(i)]) {
            s.agents[static_cast<std::size_t>(i)].pos = target[static_cast<std::size_t>(i)];
        }
    }

    // 4. collection
    for (int i = 0; i < n; ++i) {
        if (!s.active(i)) {
            continue;
        }
        const AgentSpec& spec = cfg.agents[static_cast<std::size_t>(i)];
        Position p = s.agents[static_cast<std::size_t>(i)].pos;
        auto coin = std::find_if(s.coins.begin(), s.coins.end(), [&](const Coin& c) { return c.pos == p; });
        if (coin != s.coins.end()) {
            const int owner = coin->owner;
            out.rewards[static_cast<std::size_t>(i)] += spec.reward_multiplier;
            if (owner == i) {
                out.events.push_back({t, i, EventKind::CoinOwn, spec.reward_multiplier, i});
            } else {
                out.events.push_back({t, i, EventKind::CoinMismatch, spec.reward_multiplier, owner});
                out.rewards[static_cast<std::size_t>(owner)] -= spec.mismatch_penalty;
                out.events.push_back({t, owner, EventKind::Penalty, -spec.mismatch_penalty, i});
                const AgentSpec& owner_spec = cfg.agents[static_cast<std::size_t>(owner)];
                if (cfg.spawn_bias_trigger == SpawnBiasTrigger::BiasedAgentCollects && spec.spawn_bias_steps > 0) {
                    s.bias_remaining = spec.spawn_bias_steps;
                    s.bias_owner = i;
                } else if (cfg.spawn_bias_trigger == SpawnBiasTrigger::OtherAgentCollects &&
                           owner_spec.spawn_bias_steps > 0) {
                    s.bias_remaining = owner_spec.spawn_bias_steps;
                    s.bias_owner = owner;
                }
            }
            s.coins.erase(coin);
        }
        auto& apple = s.apples[static_cast<std::size_t>(L.index(p))];
        if (apple != 0) {
            apple = 0;
            out.rewards[static_cast<std::size_t>(i)] += spec.reward_multiplier;
            out.events.push_back({t, i, EventKind::Apple, spec.reward_multiplier, -1});
        }
    }

    // 5. timeouts
    for (int i = 0; i < n; ++i) {
        if (!was_out[static_cast<std::size_t>(i)]) {
            continue;
        }
        out.events.push_back({t, i, EventKind::Timeout, 1.0, -1});
        auto& a = s.agents[static_cast<std::size_t>(i)];
        if (a.timeout > 1) {
            --a.timeout;
            continue;
        }
        auto spots = spawn_candidates(s);
        if (spots.empty()) {
            continue; // stays off the grid until a cell frees up
        }
        a.timeout = 0;
        a.pos = spots[s.rng.below(spots.size())];
        a.facing = static_cast<Orientation>(s.rng.below(4));
    }

    // 6. item dynamics
    if (cfg.env == EnvKind::Coins) {
        for (auto& c : s.coins) {
            ++c.age;
        }
        std::erase_if(s.coins, [&](const Coin& c) { return c.age >= cfg.coin_lifetime; });
        if (static_cast<int>(s.coins.size()) < cfg.max_coins && s.rng.bernoulli(cfg.coin_spawn_prob)) {
            std::vector<Position> free;
            for (int y = 0; y < cfg.height; ++y) {
                for (int x = 0; x < cfg.width; ++x) {
                    Position p{x, y};
                    if (!L.is_wall(p) && !occupied_by_agent(s, p) && !has_coin(s, p)) {
                        free.push_back(p);
                    }
                }
            }
            if (!free.empty()) {
                Position p = free[s.rng.below(free.size())];
                int colour = static_cast<int>(s.rng.below(static_cast<std::size_t>(n)));
                if (s.bias_remaining > 0) {
                    colour = s.bias_owner;
                }
                s.coins.push_back({colour, p, 0});
            }
        }
        if (s.bias_remaining > 0) {
            --s.bias_remaining;
        }
    } else {
        const std::vector<std::uint8_t> before = s.apples;
        for (int y = 0; y < cfg.height; ++y) {
            for (int x = 0; x < cfg.width; ++x) {
                Position p{x, y};
                auto idx = static_cast<std::size_t>(L.index(p));
                if (!L.apple_sites[idx] || before[idx] != 0 || occupied_by_agent(s, p)) {
                    continue;
                }
                int k = neighbour_apples(s, before, p, cfg.regrowth_radius);
                double prob = cfg.regrowth_probs[std::min<std::size_t>(static_cast<std::size_t>(k),
                                                                       cfg.regrowth_probs.size() - 1)];
                if (prob > 0.0 && s.rng.bernoulli(prob)) {
                    s.apples[idx] = 1;
                }
            }
        }
    }

    ++s.t;
    return out;
}

// ---------------------------------------------------------------------------

const ObsCell& Observation::at(int dx, int dy) const
{
    static const ObsCell wall{CellKind::Wall, AgentType::Standard};
    if (dx < -radius || dx > radius || dy < -radius || dy > radius) {
        return wall;
    }
    return cells[static_cast<std::size_t>((dy + radius) * side() + (dx + radius))];
}

Observation observe(const EnvState& s, int agent)
{
    const EnvConfig& cfg = s.config();
    if (agent < 0 || agent >= cfg.num_agents()) {
        throw ValidationError("unknown agent id " + std::to_string(agent));
    }
    const Layout& L = *s.layout;
    Observation obs;
    obs.env = cfg.env;
    obs.agent = agent;
    obs.radius = cfg.effective_view_radius();
    const int side = obs.side();
    obs.cells.assign(static_cast<std::size_t>(side * side), ObsCell{});
    const AgentState& me = s.agents[static_cast<std::size_t>(agent)];
    obs.facing = me.facing;
    obs.timed_out = !s.active(agent);
    if (obs.timed_out) {
        return obs;
    }
    auto cell = [&](int dx, int dy) -> ObsCell& {
        return obs.cells[static_cast<std::size_t>((dy + obs.radius) * side + (dx + obs.radius))];
    };
    for (int dy = -obs.radius; dy <= obs.radius; ++dy) {
        for (int dx = -obs.radius; dx <= obs.radius; ++dx) {
            Position p{me.pos.x + dx, me.pos.y + dy};
            if (L.is_wall(p)) {
                cell(dx, dy).kind = CellKind::Wall;
            } else if (s.apples[static_cast<std::size_t>(L.index(p))] != 0) {
                cell(dx, dy).kind = CellKind::Apple;
            }
        }
    }
    for (const auto& c : s.coins) {
        int dx = c.pos.x - me.pos.x;
        int dy = c.pos.y - me.pos.y;
        if (std::abs(dx) <= obs.radius && std::abs(dy) <= obs.radius) {
            cell(dx, dy).kind = c.owner == agent ? CellKind::CoinOwn : CellKind::CoinOther;
        }
    }
    for (int j = 0; j < cfg.num_agents(); ++j) {
        if (!s.active(j)) {
            continue;
        }
        const Position& p = s.agents[static_cast<std::size_t>(j)].pos;
        int dx = p.x - me.pos.x;
        int dy = p.y - me.pos.y;
        if (std::abs(dx) > obs.radius || std::abs(dy) > obs.radius) {
            continue;
        }
        if (j == agent) {
            cell(dx, dy) = {CellKind::Self, cfg.agents[static_cast<std::size_t>(j)].type};
        } else {
            cell(dx, dy) = {CellKind::Other, cfg.agents[static_cast<std::size_t>(j)].type};
            obs.visible.push_back(j);
        }
    }
    return obs;
}

std::vector<int> visible_agents(const EnvState& s, int agent)
{
    return observe(s, agent).visible;
}

} // namespace ssd::grid
