#pragma once

// Text formats for environment configs, event logs and replays.

#include "ssd/gridworld.hpp"
#include "ssd/ini.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ssd::grid {

// Reads [env] and the optional [agent.<id>] override sections. Unknown keys
// are rejected. Section names are not consumed from `doc` so callers can
// validate the rest of the document themselves.
EnvConfig read_env_config(const IniDocument& doc);

// Writes every field explicitly so that read(write(c)) == c.
void write_env_config(const EnvConfig& config, IniDocument& doc);

std::string events_to_csv(const EventLog& events);
EventLog events_from_csv(std::string_view text);

char action_code(Action a);
Action parse_action_code(char c);

struct Replay {
    EnvConfig config;
    std::uint64_t seed = 0;
    std::vector<std::vector<Action>> actions; // one joint action per step

    bool operator==(const Replay&) const = default;
};

std::string format_replay(const Replay& replay);
Replay parse_replay(std::string_view text);

struct ReplayOutcome {
    EnvState final_state;
    EventLog events;
    std::vector<double> returns;
};

ReplayOutcome run_replay(const Replay& replay);

} // namespace ssd::grid
