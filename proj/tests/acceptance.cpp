// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "ssd/dilemma.hpp"
#include "ssd/estimates.hpp"
#include "ssd/experiment.hpp"
#include "ssd/learning.hpp"
#include "ssd/metrics.hpp"
#include "ssd/rng.hpp"
#include "ssd/shaping.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ssd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double uniform(Rng& rng, double lo, double hi)
{
    return lo + (hi - lo) * rng.uniform();
}

dilemma::PayoffMatrix game(double ri, double ti, double si, double pi, double rj, double tj, double sj, double pj)
{
    dilemma::PayoffMatrix g;
    g.agents = {"i", "j"};
    g.payoffs = {{ri, ti, si, pi}, {rj, tj, sj, pj}};
    return g;
}

std::vector<grid::AgentSpec> standard_agents(int n)
{
    std::vector<grid::AgentSpec> agents;
    for (int i = 0; i < n; ++i) {
        agents.push_back(grid::AgentSpec::defaults(i, grid::AgentType::Standard));
    }
    return agents;
}

std::vector<std::vector<int>> full_visibility(int n)
{
    std::vector<std::vector<int>> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                v[static_cast<std::size_t>(i)].push_back(j);
            }
        }
    }
    return v;
}

Outcome matrix_goldens()
{
    const std::vector<std::pair<std::string, dilemma::PayoffMatrix>> games = {
        {"sheposh", game(4, 5, -3, -2, 12, 15, -9, -6)},     {"beckenkamp", game(12, 18, 0, 6, 8, 12, 0, 4)},
        {"charness", game(10, 13, 2, 7, 13, 15, 2, 6)},      {"andreoni", game(6, 9, 0, 3, 7, 11, 0, 4)},
        {"all_negative", game(-1, 0, -3, -2, -6, -5, -8, -7)},
    };
    for (const auto& [name, g] : games) {
        const auto r = dilemma::check_social_dilemma(g);
        if (r.kind != dilemma::DilemmaKind::PrisonersDilemma || !r.asymmetric) {
            return {false, name + " classified as " + std::string(dilemma::to_string(r.kind))};
        }
    }
    return {true, "5 games"};
}

Outcome normalization_golden()
{
    const auto n = dilemma::normalize_game(game(-1, 0, -3, -2, -6, -5, -8, -7));
    // R, T, S, P for each agent
    const double expected[2][4] = {{0.67, 1.0, 0.0, 0.33}, {0.67, 1.0, 0.0, 0.33}};
    double worst = 0.0;
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t k = 0; k < 4; ++k) {
            worst = std::max(worst, std::abs(n.payoffs[a].get(dilemma::kOutcomes[k]) - expected[a][k]));
        }
    }
    return {worst <= 0.005, "max cell error " + std::to_string(worst)};
}

Outcome smoothing_oracle()
{
    Rng rng(11);
    double worst = 0.0;
    for (double gl : {0.5, 0.891, 0.99}) {
        for (int s = 0; s < 1000; ++s) {
            std::vector<double> r(200);
            for (auto& v : r) {
                v = uniform(rng, -5.0, 5.0);
            }
            shaping::SmoothedTracker tr;
            for (std::size_t t = 0; t < r.size(); ++t) {
                tr = shaping::update_smoothed(tr, r[t], 1.0, gl);
                double direct = 0.0;
                for (std::size_t k = 0; k <= t; ++k) {
                    direct += std::pow(gl, static_cast<double>(t - k)) * r[k];
                }
                worst = std::max(worst, std::abs(tr.e - direct));
            }
        }
    }
    return {worst <= 1e-9, "max error " + std::to_string(worst)};
}

Outcome shaping_neutrality()
{
    Rng rng(12);
    int cases = 0;
    for (int n : {2, 5, 10}) {
        const auto agents = standard_agents(n);
        for (int c = 0; c < 100; ++c) {
            shaping::SmoothedTracker tr;
            const int len = 1 + static_cast<int>(rng.below(20));
            for (int k = 0; k < len; ++k) {
                tr = shaping::update_smoothed(tr, uniform(rng, -3.0, 3.0), 0.99, 0.9);
            }
            const std::vector<shaping::SmoothedTracker> trackers(static_cast<std::size_t>(n), tr);
            std::vector<double> extrinsic(static_cast<std::size_t>(n));
            for (auto& r : extrinsic) {
                r = uniform(rng, -5.0, 5.0);
            }
            for (auto method : {shaping::Method::IA, shaping::Method::SVO}) {
                for (bool normalized : {false, true}) {
                    shaping::ShapingConfig cfg;
                    cfg.method = method;
                    cfg.alpha = uniform(rng, 0.0, 5.0);
                    cfg.beta = uniform(rng, 0.0, 1.0);
                    cfg.w = uniform(rng, 0.0, 1.0);
                    cfg.theta_svo = 45.0;
                    cfg.normalized = normalized;
                    const auto out = shaping::shape_rewards(cfg, agents, extrinsic, trackers);
                    if (out.shaped != extrinsic) {
                        return {false, "N=" + std::to_string(n) + " case " + std::to_string(c)};
                    }
                    ++cases;
                }
            }
        }
    }
    return {true, std::to_string(cases) + " shaped steps"};
}

Outcome phi_linearity()
{
    Rng rng(13);
    for (int c = 0; c < 100; ++c) {
        const int n = 2 + static_cast<int>(rng.below(9));
        auto agents = standard_agents(n);
        std::vector<shaping::SmoothedTracker> trackers(static_cast<std::size_t>(n));
        std::vector<double> extrinsic(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < trackers.size(); ++i) {
            for (int k = 0; k < 5; ++k) {
                trackers[i] = shaping::update_smoothed(trackers[i], uniform(rng, -2.0, 4.0), 0.99, 0.9);
            }
            extrinsic[i] = uniform(rng, -2.0, 2.0);
        }
        shaping::ShapingConfig cfg;
        cfg.method = c % 2 == 0 ? shaping::Method::IA : shaping::Method::SVO;
        cfg.alpha = uniform(rng, 0.0, 1.0);
        cfg.beta = uniform(rng, 0.0, 1.0);
        cfg.w = uniform(rng, 0.0, 1.0);
        cfg.theta_svo = uniform(rng, 0.0, 90.0);
        cfg.normalized = rng.bernoulli(0.5);
        const std::size_t i = rng.below(static_cast<std::size_t>(n));
        const double phi = uniform(rng, 0.1, 10.0);
        agents[i].phi = phi;
        const auto once = shaping::shape_rewards(cfg, agents, extrinsic, trackers);
        agents[i].phi = 2.0 * phi;
        const auto twice = shaping::shape_rewards(cfg, agents, extrinsic, trackers);
        if (twice.penalty[i] != 2.0 * once.penalty[i]) {
            return {false, "case " + std::to_string(c)};
        }
    }
    return {true, "100 cases"};
}

Outcome full_visibility_equivalence()
{
    Rng rng(14);
    const int n = 10;
    const auto agents = standard_agents(n);
    const auto vis = full_visibility(n);
    for (int trace = 0; trace < 50; ++trace) {
        for (auto [local_m, global_m] : {std::pair{shaping::Method::FairLocalIA, shaping::Method::IA},
                                         std::pair{shaping::Method::FairLocalSVO, shaping::Method::SVO}}) {
            shaping::ShapingConfig local;
            local.method = local_m;
            local.alpha = 0.05;
            local.beta = 0.1;
            local.w = 0.004;
            local = local.resolved();
            auto global = local;
            global.method = global_m;
            global.local = false;

            std::vector<shaping::SmoothedTracker> trackers(n);
            auto tables = estimates::initial_tables(n);
            estimates::AgeAccumulator ages;
            ages.add(tables, 0);
            for (int t = 1; t <= 200; ++t) {
                std::vector<double> extrinsic(n), own(n);
                for (std::size_t i = 0; i < n; ++i) {
                    extrinsic[i] = static_cast<double>(rng.below(5)) - 2.0;
                    trackers[i] = shaping::update_smoothed(trackers[i], extrinsic[i], local.gamma, local.lambda);
                    own[i] = trackers[i].normalized;
                }
                tables = estimates::propagate(tables, vis, own, t);
                ages.add(tables, t);
                for (const auto& tab : tables) {
                    for (std::size_t j = 0; j < n; ++j) {
                        if (static_cast<int>(j) != tab.owner && (tab.estimate[j] != own[j] || tab.tau[j] != t)) {
                            return {false, "stale estimate in trace " + std::to_string(trace)};
                        }
                    }
                }
                const auto a = shaping::shape_rewards(local, agents, extrinsic, trackers, &tables);
                const auto b = shaping::shape_rewards(global, agents, extrinsic, trackers);
                if (a.shaped != b.shaped) {
                    return {false, "shaped rewards differ in trace " + std::to_string(trace)};
                }
            }
            if (ages.average() != 0.0) {
                return {false, "nonzero average age"};
            }
        }
    }
    return {true, "50 traces x 200 steps, IA and SVO"};
}

Outcome hand_trace()
{
    const auto trace = experiment::parse_trace(experiment::read_file(fs::path(SSD_CONFIG_DIR) / "three_agent_trace.txt"));
    const auto result = experiment::run_trace(trace);
    // t, owner, subject, estimate, tau
    const std::vector<estimates::DumpRow> expected = {
        {0, 0, 1, 0.5, 0}, {0, 0, 2, 0.5, 0}, {0, 1, 0, 0.5, 0}, {0, 1, 2, 0.5, 0}, {0, 2, 0, 0.5, 0},
        {0, 2, 1, 0.5, 0}, {1, 0, 1, 0.5, 1}, {1, 0, 2, 0.5, 0}, {1, 1, 0, 0.5, 1}, {1, 1, 2, 0.5, 1},
        {1, 2, 0, 0.5, 0}, {1, 2, 1, 0.5, 1}, {2, 0, 1, 1.0, 2}, {2, 0, 2, 0.5, 1}, {2, 1, 0, 0.0, 2},
        {2, 1, 2, 0.5, 1}, {2, 2, 0, 0.5, 0}, {2, 2, 1, 0.5, 1},
    };
    if (result.rows != expected) {
        return {false, "dump differs"};
    }
    if (!result.average_age || *result.average_age != 7.0 / 6.0) {
        return {false, "average age"};
    }
    return {true, "18 rows, agent 0 sees agent 2 at age 1, average age 7/6"};
}

Outcome schelling_sweeps()
{
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    experiment::SchellingOptions options;
    options.episodes = 10;
    std::vector<std::pair<std::string, grid::EnvConfig>> envs;
    for (auto v : {grid::Variant::Symmetric, grid::Variant::AsymRewards, grid::Variant::AsymActions}) {
        envs.emplace_back("Coins/" + std::string(grid::to_string(v)), grid::EnvConfig::coins(v));
    }
    for (auto v : {grid::Variant::Symmetric, grid::Variant::AsymRewards, grid::Variant::AsymActions}) {
        envs.emplace_back("Harvest/" + std::string(grid::to_string(v)), grid::EnvConfig::harvest(v, 4));
    }
    std::string detail;
    for (const auto& [name, env] : envs) {
        const auto r = experiment::run_schelling(env, options, seeds);
        if (r.report.verdict != dilemma::Verdict::Pass) {
            std::string cells;
            for (const auto& [type, k] : r.report.offending) {
                cells += " " + type + "@" + std::to_string(k);
            }
            for (const auto& [type, k] : r.report.missing) {
                cells += " missing " + type + "@" + std::to_string(k);
            }
            return {false, name + ":" + cells};
        }
    }
    return {true, std::to_string(envs.size()) + " environments"};
}

Outcome tragedy_of_the_commons()
{
    auto env = grid::EnvConfig::harvest(grid::Variant::Symmetric, 4);
    env.regrowth_probs[0] = 0.0;
    std::string detail;
    bool pass = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        int totals[2] = {0, 0};
        for (int c = 0; c < 2; ++c) {
            const auto role = c == 0 ? dilemma::Strategy::Defect : dilemma::Strategy::Cooperate;
            const std::vector<dilemma::Strategy> roles(4, role);
            for (const auto& e : experiment::play_scripted(env, roles, seed).events) {
                totals[c] += e.kind == grid::EventKind::Apple ? 1 : 0;
            }
        }
        pass = pass && totals[0] < totals[1];
        detail += " " + std::to_string(totals[0]) + "<" + std::to_string(totals[1]);
    }
    return {pass, "defect<cooperate apples:" + detail};
}

// Mean global own-coin proportion over the final tenth of the evaluations.
double final_own_coins(const shaping::ShapingConfig& shaping, const learning::LearnerConfig& learner,
                       const std::vector<std::uint64_t>& seeds)
{
    const long long num_evals = learner.training_steps / learner.eval_period + 1;
    const long long tail = std::max(1LL, std::llround(0.1 * static_cast<double>(num_evals)));
    const long long first = (num_evals - tail) * learner.eval_period;
    double sum = 0.0;
    int count = 0;
    for (auto seed : seeds) {
        const auto r = learning::train(grid::EnvConfig::coins(), shaping, learner, seed);
        for (const auto& row : r.log.rows) {
            if (row.eval_step >= first && row.metric.scope == "global" && row.metric.name == "own_coins") {
                sum += row.metric.value;
                ++count;
            }
        }
    }
    return count == 0 ? 0.0 : sum / count;
}

Outcome learning_trend()
{
    learning::LearnerConfig learner;
    learner.training_steps = 1000000;
    learner.eval_period = 50000;
    learner.eval_episodes = 10;
    shaping::ShapingConfig iql;
    shaping::ShapingConfig fair;
    fair.method = shaping::Method::FairLocalIA;
    fair.alpha = 0.05;
    fair.beta = 0.1;
    fair = fair.resolved();

    std::string detail;
    for (const std::vector<std::uint64_t>& seeds :
         {std::vector<std::uint64_t>{1, 2, 3, 4, 5}, std::vector<std::uint64_t>{6, 7, 8, 9, 10}}) {
        const double base = final_own_coins(iql, learner, seeds);
        const double shaped = final_own_coins(fair, learner, seeds);
        char buf[96];
        std::snprintf(buf, sizeof(buf), " seeds %llu-%llu: IQL %.4f FairLocalIA %.4f;",
                      static_cast<unsigned long long>(seeds.front()), static_cast<unsigned long long>(seeds.back()),
                      base, shaped);
        detail += buf;
        if (shaped - base >= 0.10) {
            return {true, detail};
        }
    }
    return {false, detail + " margin below 0.10"};
}

Outcome metric_formulas()
{
    using grid::AgentType;
    using grid::EventKind;
    std::vector<std::string> failed;

    metrics::EpisodeLog peace_log{grid::EnvKind::Harvest, 10, 1000, std::vector<AgentType>(10, AgentType::Standard), {}};
    for (int t = 100; t < 125; ++t) {
        peace_log.events.push_back({t, 3, EventKind::Timeout, 1.0, -1});
    }
    if (metrics::peace(peace_log) != 9.975) {
        failed.push_back("peace");
    }

    // agent 0 gains at t=0 and t=2, agent 1 is zapped at t=0 and never gains
    metrics::EpisodeLog log{grid::EnvKind::Harvest, 2, 3, {AgentType::Standard, AgentType::Standard},
                            {{0, 0, EventKind::Apple, 1.0, -1},
                             {0, 0, EventKind::Zap, 1.0, 1},
                             {1, 1, EventKind::Timeout, 1.0, -1},
                             {2, 0, EventKind::Apple, 1.0, -1},
                             {2, 1, EventKind::Timeout, 1.0, -1}}};
    const auto s = metrics::sustainability(log);
    if (s.per_agent != std::vector<double>{1.0, 3.0} || s.mean != 2.0) {
        failed.push_back("sustainability");
    }
    if (metrics::peace(log) != 2.0 - 2.0 / 3.0) {
        failed.push_back("peace (3-step)");
    }

    auto tables = estimates::initial_tables(3);
    std::vector<std::vector<estimates::EstimateTable>> history = {tables};
    tables = estimates::propagate(tables, {{1}, {0, 2}, {1}}, std::vector<double>{0.2, 0.4, 0.6}, 1);
    history.push_back(tables);
    tables = estimates::propagate(tables, {{1}, {0}, {}}, std::vector<double>{0.1, 0.3, 0.9}, 2);
    history.push_back(tables);
    if (estimates::average_age(history) != 7.0 / 6.0) {
        failed.push_back("average age");
    }

    // gamma*lambda = 0.5: rewards 1, 0, 2 give e = 1, 0.5, 2.25; the second agent never moves
    std::vector<shaping::SmoothedTracker> trackers(2);
    for (double r : {1.0, 0.0, 2.0}) {
        trackers[0] = shaping::update_smoothed(trackers[0], r, 1.0, 0.5);
        trackers[1] = shaping::update_smoothed(trackers[1], 0.0, 1.0, 0.5);
    }
    if (estimates::average_range(trackers) != 0.875) {
        failed.push_back("average range");
    }

    std::string detail = failed.empty() ? "peace 9.975, sustainability, age 7/6, range 0.875" : "failed:";
    for (const auto& f : failed) {
        detail += " " + f;
    }
    return {failed.empty(), detail};
}

Outcome train_determinism()
{
    const auto root = fs::temp_directory_path() / "ssdlab_acceptance_determinism";
    fs::remove_all(root);
    auto config = experiment::load_experiment(fs::path(SSD_CONFIG_DIR) / "coins_fairlocal_ia.ini");
    config.learner.training_steps = 50000;
    config.learner.eval_period = 10000;
    config.write_checkpoints = true;
    config.write_audit = true;

    std::vector<fs::path> dirs;
    for (const char* run : {"a", "b"}) {
        config.output_dir = (root / run).string();
        const auto path = root / (std::string(run) + ".ini");
        experiment::write_file(path, experiment::serialize_experiment(config));
        std::ostringstream out;
        if (experiment::cmd_train(path, out) != 0) {
            return {false, "cmd_train failed"};
        }
        dirs.push_back(root / run / config.name);
    }
    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
        if (!entry.is_regular_file() || entry.path().filename() == "config.ini") {
            continue;
        }
        const auto rel = fs::relative(entry.path(), dirs[0]);
        if (!fs::exists(dirs[1] / rel) ||
            experiment::read_file(entry.path()) != experiment::read_file(dirs[1] / rel)) {
            return {false, rel.string() + " differs"};
        }
        ++compared;
    }
    fs::remove_all(root);
    return {compared > 0, std::to_string(compared) + " files byte-identical"};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"matrix golden suite", matrix_goldens},
        {"normalization golden", normalization_golden},
        {"smoothed reward oracle", smoothing_oracle},
        {"shaping neutrality", shaping_neutrality},
        {"phi linearity", phi_linearity},
        {"full-visibility estimate equivalence", full_visibility_equivalence},
        {"three-agent estimate hand trace", hand_trace},
        {"empirical Schelling verification", schelling_sweeps},
        {"tragedy of the commons", tragedy_of_the_commons},
        {"learning trend (soft)", learning_trend},
        {"metric formulas", metric_formulas},
        {"end-to-end determinism", train_determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %2zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
