#include "ssd/env_io.hpp"
#include "ssd/error.hpp"

#include "doctest.h"

using namespace ssd;
using namespace ssd::grid;

namespace {

EnvConfig round_trip(const EnvConfig& c)
{
    IniDocument doc;
    write_env_config(c, doc);
    return read_env_config(IniDocument::parse(doc.serialize()));
}

} // namespace

TEST_CASE("environment configs survive a write/read cycle")
{
    for (auto v : {Variant::Symmetric, Variant::AsymRewards, Variant::AsymActions}) {
        CHECK(round_trip(EnvConfig::coins(v)) == EnvConfig::coins(v));
        CHECK(round_trip(EnvConfig::harvest(v, 4)) == EnvConfig::harvest(v, 4));
    }
    auto c = EnvConfig::harvest(Variant::AsymActions, 6);
    c.regrowth_probs = {0.0, 0.1, 0.3};
    c.agents[2].phi = 2.5;
    c.spawn_bias_trigger = SpawnBiasTrigger::OtherAgentCollects;
    c.view_radius = 3;
    CHECK(round_trip(c) == c);
}

TEST_CASE("environment config keys and agent overrides")
{
    const auto doc = IniDocument::parse("[env]\nenv = Harvest\nvariant = AsymRewards\nnum_agents = 4\n"
                                        "episode_length = 200\n\n[agent.3]\ntype = Standard\nphi = 0.5\n");
    const auto c = read_env_config(doc);
    CHECK(c.env == EnvKind::Harvest);
    CHECK(c.num_agents() == 4);
    CHECK(c.episode_length == 200);
    CHECK(c.agents[0].type == AgentType::HighReward);
    CHECK(c.agents[3].type == AgentType::Standard);
    CHECK(c.agents[3].reward_multiplier == 1.0);
    CHECK(c.agents[3].phi == 0.5);
    CHECK(c.width == 16);

    const auto m = read_env_config(IniDocument::parse("[env]\nenv = Coins\nmap = P.../..../..../...P\n"));
    CHECK(m.width == 4);
    CHECK(m.height == 4);
    CHECK(m.map.size() == 4);
}

TEST_CASE("environment config errors")
{
    CHECK_THROWS_WITH_AS(read_env_config(IniDocument::parse("[env]\nenv = Coins\ncolour = red\n")),
                         doctest::Contains("colour"), ValidationError);
    CHECK_THROWS_AS(read_env_config(IniDocument::parse("[env]\nenv = Maze\n")), ValidationError);
    CHECK_THROWS_AS(read_env_config(IniDocument::parse("[env]\nenv = Coins\nnum_agents = 3\n")), ValidationError);
    CHECK_THROWS_AS(read_env_config(IniDocument::parse("[env]\nenv = Coins\n[agent.2]\nphi = 1\n")),
                    ValidationError);
    CHECK_THROWS_AS(read_env_config(IniDocument::parse("[env]\nenv = Coins\n[agent.0]\nphi = -1\n")),
                    ValidationError);
    CHECK_THROWS_AS(read_env_config(IniDocument::parse("[env]\nenv = Coins\nepisode_length = 0\n")),
                    ValidationError);
    CHECK_THROWS_AS(read_env_config(IniDocument::parse("[env]\nenv = Harvest\nnum_agents = 1\n")),
                    ValidationError);
}

TEST_CASE("event logs serialize to CSV and back")
{
    const EventLog log = {{0, 1, EventKind::CoinMismatch, 0.5, 0},
                          {0, 0, EventKind::Penalty, -3.0, 1},
                          {4, 2, EventKind::Zap, 1.0, 3},
                          {5, 3, EventKind::Timeout, 1.0, -1},
                          {9, 0, EventKind::Apple, 1.5, -1}};
    const auto csv = events_to_csv(log);
    CHECK(csv.rfind("t,agent,event_kind,value,counterparty\n0,1,coin_mismatch,0.5,0\n", 0) == 0);
    CHECK(events_from_csv(csv) == log);
    CHECK_THROWS_AS(events_from_csv("t,agent\n"), ValidationError);
    CHECK_THROWS_WITH_AS(events_from_csv("t,agent,event_kind,value,counterparty\n0,1,bogus,1,0\n"),
                         doctest::Contains("line 2"), ValidationError);
}

TEST_CASE("replays re-simulate bit-exactly")
{
    Replay r;
    r.config = EnvConfig::harvest(Variant::AsymActions, 4);
    r.config.episode_length = 300;
    r.seed = 123456789012345ULL;
    Rng rng(2);
    auto s = reset(r.config, r.seed);
    EventLog live;
    while (!s.done()) {
        std::vector<Action> joint;
        for (int i = 0; i < 4; ++i) {
            joint.push_back(s.active(i) ? static_cast<Action>(rng.below(5)) : Action::Stay);
        }
        auto res = step(s, joint);
        live.insert(live.end(), res.events.begin(), res.events.end());
        r.actions.push_back(joint);
    }
    const auto text = format_replay(r);
    const auto parsed = parse_replay(text);
    CHECK(parsed == r);
    const auto out = run_replay(parsed);
    CHECK(out.final_state == s);
    CHECK(out.events == live);
    CHECK(format_replay(parsed) == text);

    CHECK_THROWS_AS(parse_action_code('X'), ValidationError);
    CHECK_THROWS_AS(parse_replay(text.substr(0, text.find("[actions]"))), ValidationError);
}
