#include "ssd/env_io.hpp"

#include "ssd/error.hpp"

#include <algorithm>
#include <sstream>

namespace ssd::grid {

namespace {

std::string join_numbers(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_number(values[i]);
    }
    return out;
}

int to_int(long long v, std::string_view key)
{
    if (v < -1'000'000'000LL || v > 1'000'000'000LL) {
        throw ValidationError("value of '" + std::string(key) + "' is out of range");
    }
    return static_cast<int>(v);
}

} // namespace

EnvConfig read_env_config(const IniDocument& doc)
{
    SectionReader env(doc.find("env"), "[env]");
    const EnvKind kind = parse_env_kind(env.text("env", "Coins"));
    const Variant variant = parse_variant(env.text("variant", "Symmetric"));
    EnvConfig c;
    if (kind == EnvKind::Coins) {
        c = EnvConfig::coins(variant);
        if (env.has("num_agents") && env.integer("num_agents", 2) != 2) {
            throw ValidationError("[env]: Coins needs exactly 2 agents");
        }
    } else {
        c = EnvConfig::harvest(variant, to_int(env.integer("num_agents", 10), "num_agents"));
    }
    if (auto map = env.text("map")) {
        c.map.clear();
        if (!map->empty()) {
            c.map = split(*map, '/');
        }
        if (!c.map.empty()) {
            c.height = static_cast<int>(c.map.size());
            c.width = static_cast<int>(c.map.front().size());
        }
    }
    c.width = to_int(env.integer("width", c.width), "width");
    c.height = to_int(env.integer("height", c.height), "height");
    c.episode_length = to_int(env.integer("episode_length", c.episode_length), "episode_length");
    c.view_radius = to_int(env.integer("view_radius", c.view_radius), "view_radius");
    c.coin_lifetime = to_int(env.integer("coin_lifetime", c.coin_lifetime), "coin_lifetime");
    c.coin_spawn_prob = env.number("coin_spawn_prob", c.coin_spawn_prob);
    c.max_coins = to_int(env.integer("max_coins", c.max_coins), "max_coins");
    if (auto trig = env.text("spawn_bias_trigger")) {
        c.spawn_bias_trigger = parse_spawn_bias_trigger(*trig);
    }
    c.regrowth_probs = env.numbers("regrowth_probs", c.regrowth_probs);
    c.regrowth_radius = to_int(env.integer("regrowth_radius", c.regrowth_radius), "regrowth_radius");
    c.zap_timeout = to_int(env.integer("zap_timeout", c.zap_timeout), "zap_timeout");
    c.beam_length = to_int(env.integer("beam_length", c.beam_length), "beam_length");
    env.finish();

    for (const auto& section : doc.sections()) {
        if (section.name.rfind("agent.", 0) != 0) {
            continue;
        }
        const std::string id_text = section.name.substr(6);
        long long id = -1;
        try {
            id = parse_integer(id_text);
        } catch (const ValidationError&) {
            throw ValidationError("[" + section.name + "]: agent id must be an integer");
        }
        if (id < 0 || id >= c.num_agents()) {
            throw ValidationError("[" + section.name + "]: no agent with id " + id_text);
        }
        SectionReader r(&section, "[" + section.name + "]");
        AgentSpec& a = c.agents[static_cast<std::size_t>(id)];
        if (auto type = r.text("type")) {
            a = AgentSpec::defaults(static_cast<int>(id), parse_agent_type(*type));
        }
        a.reward_multiplier = r.number("reward_multiplier", a.reward_multiplier);
        a.mismatch_penalty = r.number("mismatch_penalty", a.mismatch_penalty);
        a.zap_width = to_int(r.integer("zap_width", a.zap_width), "zap_width");
        a.spawn_bias_steps = to_int(r.integer("spawn_bias_steps", a.spawn_bias_steps), "spawn_bias_steps");
        a.phi = r.number("phi", a.phi);
        r.finish();
    }
    c.validate();
    return c;
}

void write_env_config(const EnvConfig& c, IniDocument& doc)
{
    IniSection& env = doc.section("env");
    env.set("env", std::string(to_string(c.env)));
    env.set("variant", std::string(to_string(c.variant)));
    env.set("num_agents", std::to_string(c.num_agents()));
    std::string map;
    for (std::size_t i = 0; i < c.map.size(); ++i) {
        map += (i > 0 ? "/" : "") + c.map[i];
    }
    env.set("map", map);
    env.set("width", std::to_string(c.width));
    env.set("height", std::to_string(c.height));
    env.set("episode_length", std::to_string(c.episode_length));
    env.set("view_radius", std::to_string(c.view_radius));
    env.set("coin_lifetime", std::to_string(c.coin_lifetime));
    env.set("coin_spawn_prob", format_number(c.coin_spawn_prob));
    env.set("max_coins", std::to_string(c.max_coins));
    env.set("spawn_bias_trigger", std::string(to_string(c.spawn_bias_trigger)));
    env.set("regrowth_probs", join_numbers(c.regrowth_probs));
    env.set("regrowth_radius", std::to_string(c.regrowth_radius));
    env.set("zap_timeout", std::to_string(c.zap_timeout));
    env.set("beam_length", std::to_string(c.beam_length));
    for (const auto& a : c.agents) {
        IniSection& s = doc.section("agent." + std::to_string(a.id));
        s.set("type", std::string(to_string(a.type)));
        s.set("reward_multiplier", format_number(a.reward_multiplier));
        s.set("mismatch_penalty", format_number(a.mismatch_penalty));
        s.set("zap_width", std::to_string(a.zap_width));
        s.set("spawn_bias_steps", std::to_string(a.spawn_bias_steps));
        s.set("phi", format_number(a.phi));
    }
}

// ---------------------------------------------------------------------------

std::string events_to_csv(const EventLog& events)
{
    std::ostringstream out;
    out << "t,agent,event_kind,value,counterparty\n";
    for (const auto& e : events) {
        out << e.t << ',' << e.agent << ',' << to_string(e.kind) << ',' << format_number(e.value) << ','
            << e.counterparty << '\n';
    }
    return out.str();
}

EventLog events_from_csv(std::string_view text)
{
    EventLog events;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (trim(line) != "t,agent,event_kind,value,counterparty") {
                throw ValidationError("event log: unexpected header '" + line + "'");
            }
            continue;
        }
        if (trim(line).empty()) {
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 5) {
            throw ValidationError("event log line " + std::to_string(line_no) + ": expected 5 fields");
        }
        try {
            Event e;
            e.t = to_int(parse_integer(f[0]), "t");
            e.agent = to_int(parse_integer(f[1]), "agent");
            e.kind = parse_event_kind(f[2]);
            e.value = parse_number(f[3]);
            e.counterparty = to_int(parse_integer(f[4]), "counterparty");
            events.push_back(e);
        } catch (const ValidationError& err) {
            throw ValidationError("event log line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    return events;
}

// ---------------------------------------------------------------------------

char action_code(Action a)
{
    switch (a) {
    case Action::Stay: return 'S';
    case Action::Forward: return 'F';
    case Action::TurnLeft: return 'L';
    case Action::TurnRight: return 'R';
    case Action::Zap: return 'Z';
    }
    return '?';
}

Action parse_action_code(char c)
{
    switch (c) {
    case 'S': return Action::Stay;
    case 'F': return Action::Forward;
    case 'L': return Action::TurnLeft;
    case 'R': return Action::TurnRight;
    case 'Z': return Action::Zap;
    default: throw ValidationError(std::string("unknown action code '") + c + "'");
    }
}

std::string format_replay(const Replay& replay)
{
    IniDocument doc;
    write_env_config(replay.config, doc);
    IniSection& r = doc.section("replay");
    r.set("seed", std::to_string(replay.seed));
    r.set("steps", std::to_string(replay.actions.size()));
    IniSection& acts = doc.section("actions");
    for (std::size_t t = 0; t < replay.actions.size(); ++t) {
        std::string codes;
        for (Action a : replay.actions[t]) {
            codes += action_code(a);
        }
        acts.set(std::to_string(t), codes);
    }
    return doc.serialize();
}

Replay parse_replay(std::string_view text)
{
    IniDocument doc = IniDocument::parse(text);
    Replay replay;
    replay.config = read_env_config(doc);
    SectionReader r(doc.find("replay"), "[replay]");
    if (!r.has("seed") || !r.has("steps")) {
        throw ValidationError("[replay]: seed and steps are required");
    }
    const std::string seed_text = *r.text("seed");
    try {
        std::size_t used = 0;
        replay.seed = std::stoull(seed_text, &used);
        if (used != seed_text.size()) {
            throw std::invalid_argument("trailing");
        }
    } catch (const std::exception&) {
        throw ValidationError("[replay]: bad seed '" + seed_text + "'");
    }
    const long long steps = r.integer("steps", 0);
    r.finish();
    if (steps < 0 || steps > replay.config.episode_length) {
        throw ValidationError("[replay]: steps must lie in [0, episode_length]");
    }
    SectionReader acts(doc.find("actions"), "[actions]");
    for (long long t = 0; t < steps; ++t) {
        auto codes = acts.text(std::to_string(t));
        if (!codes) {
            throw ValidationError("[actions]: missing step " + std::to_string(t));
        }
        if (static_cast<int>(codes->size()) != replay.config.num_agents()) {
            throw ValidationError("[actions]: step " + std::to_string(t) + " has the wrong number of actions");
        }
        std::vector<Action> joint;
        for (char c : *codes) {
            joint.push_back(parse_action_code(c));
        }
        replay.actions.push_back(std::move(joint));
    }
    acts.finish();
    return replay;
}

ReplayOutcome run_replay(const Replay& replay)
{
    ReplayOutcome out{reset(replay.config, replay.seed), {}, {}};
    out.returns.assign(static_cast<std::size_t>(replay.config.num_agents()), 0.0);
    for (const auto& joint : replay.actions) {
        StepResult r = step(out.final_state, joint);
        for (std::size_t i = 0; i < r.rewards.size(); ++i) {
            out.returns[i] += r.rewards[i];
        }
        out.events.insert(out.events.end(), r.events.begin(), r.events.end());
    }
    return out;
}

} // namespace ssd::grid
