#pragma once

// Helpers shared by the unit tests: games from the literature, random
// generators for property checks, and scratch directories.

#include "ssd/dilemma.hpp"
#include "ssd/rng.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace test {

inline ssd::dilemma::PayoffMatrix game(double ri, double ti, double si, double pi, double rj, double tj, double sj,
                                       double pj)
{
    ssd::dilemma::PayoffMatrix g;
    g.agents = {"i", "j"};
    g.payoffs = {{ri, ti, si, pi}, {rj, tj, sj, pj}};
    return g;
}

// Five asymmetric prisoner's dilemmas: four from experimental studies and an
// all-negative game used for the normalization example.
inline std::vector<std::pair<std::string, ssd::dilemma::PayoffMatrix>> literature_games()
{
    return {
        {"sheposh", game(4, 5, -3, -2, 12, 15, -9, -6)},
        {"beckenkamp", game(12, 18, 0, 6, 8, 12, 0, 4)},
        {"charness", game(10, 13, 2, 7, 13, 15, 2, 6)},
        {"andreoni", game(6, 9, 0, 3, 7, 11, 0, 4)},
        {"all_negative", game(-1, 0, -3, -2, -6, -5, -8, -7)},
    };
}

inline double uniform(ssd::Rng& rng, double lo, double hi)
{
    return lo + (hi - lo) * rng.uniform();
}

inline int integer(ssd::Rng& rng, int lo, int hi)
{
    return lo + static_cast<int>(rng.below(static_cast<std::size_t>(hi - lo + 1)));
}

inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("ssdlab_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace test
