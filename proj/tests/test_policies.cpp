#include "ssd/policies.hpp"

#include "doctest.h"

#include <map>

using namespace ssd::grid;
using ssd::dilemma::Strategy;

namespace {

EnvState small_coins(std::vector<Coin> coins)
{
    auto c = EnvConfig::coins();
    c.width = 3;
    c.height = 3;
    auto s = reset(c, 0);
    s.agents[0] = {{1, 1}, Orientation::North, 0};
    s.agents[1] = {{2, 2}, Orientation::West, 0};
    s.coins = std::move(coins);
    return s;
}

std::vector<Action> draws(Strategy role, const EnvState& s, int agent, int n)
{
    ssd::Rng rng(17);
    const auto obs = observe(s, agent);
    const auto ctx = policy_context(s.config(), agent);
    std::vector<Action> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(scripted_policy(role, obs, ctx, rng));
    }
    return out;
}

EnvState harvest_with(std::vector<std::string> map)
{
    auto c = EnvConfig::harvest(Variant::Symmetric, 2);
    c.map = std::move(map);
    c.width = static_cast<int>(c.map[0].size());
    c.height = static_cast<int>(c.map.size());
    auto s = reset(c, 0);
    s.agents[0] = {{3, 4}, Orientation::North, 0};
    s.agents[1] = {{0, 0}, Orientation::South, 0};
    return s;
}

} // namespace

TEST_CASE("Coins defector steps onto a mismatch coin ahead")
{
    const auto s = small_coins({{1, {1, 0}, 0}});
    for (Action a : draws(Strategy::Defect, s, 0, 200)) {
        CHECK(a == Action::Forward);
    }
}

TEST_CASE("Coins cooperator ignores a mismatch coin")
{
    const auto with = small_coins({{1, {0, 2}, 0}});
    const auto without = small_coins({});
    CHECK(draws(Strategy::Cooperate, with, 0, 1000) == draws(Strategy::Cooperate, without, 0, 1000));

    const auto ahead = small_coins({{1, {1, 0}, 0}});
    for (Action a : draws(Strategy::Cooperate, ahead, 0, 500)) {
        CHECK(a != Action::Forward);
    }
}

TEST_CASE("Coins cooperator heads for its own coin")
{
    // own coin to the east: turn right, then walk
    auto s = small_coins({{0, {2, 1}, 0}});
    for (Action a : draws(Strategy::Cooperate, s, 0, 100)) {
        CHECK(a == Action::TurnRight);
    }
    s.agents[0].facing = Orientation::East;
    for (Action a : draws(Strategy::Cooperate, s, 0, 100)) {
        CHECK(a == Action::Forward);
    }
}

TEST_CASE("wandering prefers forward moves")
{
    std::map<Action, int> counts;
    for (Action a : draws(Strategy::Cooperate, small_coins({}), 0, 10000)) {
        ++counts[a];
    }
    CHECK(counts[Action::Forward] == doctest::Approx(5000).epsilon(0.05));
    CHECK(counts[Action::TurnLeft] == doctest::Approx(2500).epsilon(0.08));
    CHECK(counts[Action::Stay] == 0);
}

TEST_CASE("Harvest cooperator leaves a lone apple alone")
{
    const auto s = harvest_with({".......", ".......", ".......", "...A...", ".......", ".......", "P.....P"});
    for (Action a : draws(Strategy::Cooperate, s, 0, 500)) {
        CHECK(a != Action::Forward);
        CHECK(a != Action::Zap);
    }
    for (Action a : draws(Strategy::Defect, s, 0, 100)) {
        CHECK(a == Action::Forward);
    }
}

TEST_CASE("Harvest cooperator collects from a dense patch")
{
    const auto s = harvest_with({".......", ".......", "...A...", "..AAA..", ".......", ".......", "P.....P"});
    for (Action a : draws(Strategy::Cooperate, s, 0, 100)) {
        CHECK(a == Action::Forward);
    }
}

TEST_CASE("Harvest defector zaps an agent in its beam")
{
    auto s = harvest_with({".......", ".......", ".......", ".......", ".......", ".......", "P.....P"});
    s.agents[1] = {{3, 1}, Orientation::South, 0};
    for (Action a : draws(Strategy::Defect, s, 0, 50)) {
        CHECK(a == Action::Zap);
    }
    for (Action a : draws(Strategy::Cooperate, s, 0, 200)) {
        CHECK(a != Action::Zap);
    }
    s.agents[1] = {{4, 1}, Orientation::South, 0};
    for (Action a : draws(Strategy::Defect, s, 0, 50)) {
        CHECK(a != Action::Zap);
    }
}

TEST_CASE("timed-out agents stay")
{
    auto s = small_coins({{0, {1, 0}, 0}});
    s.agents[0].timeout = 3;
    for (Action a : draws(Strategy::Defect, s, 0, 20)) {
        CHECK(a == Action::Stay);
    }
}
