#include "ssd/experiment.hpp"

#include "ssd/env_io.hpp"
#include "ssd/error.hpp"
#include "ssd/ini.hpp"
#include "ssd/policies.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ssd::experiment {

namespace fs = std::filesystem;

namespace {

std::uint64_t to_seed(long long v)
{
    if (v < 0) {
        throw ValidationError("[experiment]: seeds must be >= 0");
    }
    return static_cast<std::uint64_t>(v);
}

} // namespace

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& what) { throw ValidationError("invalid experiment config: " + what); };
    if (name.empty() || name.find_first_of("/\\") != std::string::npos || name == "." || name == "..") {
        fail("name must be a plain directory name");
    }
    if (seeds.empty()) {
        fail("at least one seed is required");
    }
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        fail("seeds must be distinct");
    }
    env.validate();
    shaping.validate();
    learner.validate();
    for (int t = 0; t < grid::kNumAgentTypes; ++t) {
        if (!shaping.phi[static_cast<std::size_t>(t)]) {
            continue;
        }
        const auto type = static_cast<grid::AgentType>(t);
        if (std::none_of(env.agents.begin(), env.agents.end(), [&](const auto& a) { return a.type == type; })) {
            fail("phi." + std::string(grid::to_string(type)) + " refers to a type with no agents");
        }
    }
    if (schelling.episodes < 1 || schelling.density_threshold < 0) {
        fail("[schelling] episodes >= 1 and density_threshold >= 0 required");
    }
}

ExperimentConfig parse_experiment(std::string_view text)
{
    const IniDocument doc = IniDocument::parse(text);
    for (const auto& s : doc.sections()) {
        static const std::set<std::string, std::less<>> known = {"env", "shaping", "learner", "experiment",
                                                                 "schelling"};
        if (known.count(s.name) == 0 && s.name.rfind("agent.", 0) != 0) {
            throw ValidationError("line " + std::to_string(s.line) + ": unknown section [" + s.name + "]");
        }
    }
    ExperimentConfig c;
    c.env = grid::read_env_config(doc);
    c.shaping = shaping::read_shaping_config(doc.find("shaping"));
    c.learner = learning::read_learner_config(doc.find("learner"));

    SectionReader ex(doc.find("experiment"), "[experiment]");
    c.name = ex.text("name", c.name);
    c.seeds.clear();
    for (long long s : ex.integers("seeds", {0})) {
        c.seeds.push_back(to_seed(s));
    }
    c.output_dir = ex.text("output_dir", c.output_dir);
    c.write_checkpoints = ex.boolean("checkpoints", c.write_checkpoints);
    c.write_audit = ex.boolean("audit", c.write_audit);
    ex.finish();

    SectionReader sch(doc.find("schelling"), "[schelling]");
    c.schelling.episodes = static_cast<int>(sch.integer("episodes", c.schelling.episodes));
    c.schelling.density_threshold = static_cast<int>(sch.integer("density_threshold", c.schelling.density_threshold));
    sch.finish();

    c.validate();
    return c;
}

std::string serialize_experiment(const ExperimentConfig& c)
{
    IniDocument doc;
    IniSection& ex = doc.section("experiment");
    ex.set("name", c.name);
    std::string seeds;
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
        seeds += (i > 0 ? ", " : "") + std::to_string(c.seeds[i]);
    }
    ex.set("seeds", seeds);
    ex.set("output_dir", c.output_dir);
    ex.set("checkpoints", c.write_checkpoints ? "true" : "false");
    ex.set("audit", c.write_audit ? "true" : "false");
    grid::write_env_config(c.env, doc);
    shaping::write_shaping_config(c.shaping, doc.section("shaping"));
    learning::write_learner_config(c.learner, doc.section("learner"));
    IniSection& sch = doc.section("schelling");
    sch.set("episodes", std::to_string(c.schelling.episodes));
    sch.set("density_threshold", std::to_string(c.schelling.density_threshold));
    return doc.serialize();
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

ExperimentConfig load_experiment(const fs::path& path)
{
    const std::string text = read_file(path);
    try {
        return parse_experiment(text);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string config_hash(const ExperimentConfig& config)
{
    // where the outputs go is not part of the experiment's identity
    ExperimentConfig identity = config;
    identity.output_dir.clear();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_experiment(identity)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

fs::path output_directory(const ExperimentConfig& config)
{
    const char* root = std::getenv(kOutputRootEnv);
    fs::path base = (root != nullptr && *root != '\0') ? fs::path(root) : fs::path(config.output_dir);
    return base / config.name;
}

// ---------------------------------------------------------------------------

ScriptedEpisode play_scripted(const grid::EnvConfig& env, const std::vector<dilemma::Strategy>& roles,
                              std::uint64_t seed, int density_threshold)
{
    const int n = env.num_agents();
    if (static_cast<int>(roles.size()) != n) {
        throw ValidationError("one role per agent required");
    }
    grid::EnvState state = grid::reset(env, seed);
    std::vector<Rng> rngs;
    std::vector<grid::PolicyContext> ctx;
    for (int i = 0; i < n; ++i) {
        rngs.emplace_back(derive_seed(seed, 0x300 + static_cast<std::uint64_t>(i)));
        ctx.push_back(grid::policy_context(env, i));
        ctx.back().density_threshold = density_threshold;
    }
    ScriptedEpisode out;
    out.returns.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<grid::Action> joint(static_cast<std::size_t>(n));
    while (!state.done()) {
        for (int i = 0; i < n; ++i) {
            auto idx = static_cast<std::size_t>(i);
            joint[idx] = grid::scripted_policy(roles[idx], grid::observe(state, i), ctx[idx], rngs[idx]);
        }
        auto r = grid::step(state, joint);
        for (int i = 0; i < n; ++i) {
            out.returns[static_cast<std::size_t>(i)] += r.rewards[static_cast<std::size_t>(i)];
        }
        out.events.insert(out.events.end(), r.events.begin(), r.events.end());
    }
    return out;
}

SchellingResult run_schelling(const grid::EnvConfig& env, const SchellingOptions& options,
                              const std::vector<std::uint64_t>& seeds)
{
    env.validate();
    const int n = env.num_agents();
    std::vector<grid::AgentType> types;
    std::vector<std::vector<int>> members;
    for (const auto& a : env.agents) {
        auto it = std::find(types.begin(), types.end(), a.type);
        if (it == types.end()) {
            types.push_back(a.type);
            members.emplace_back();
            it = types.end() - 1;
        }
        members[static_cast<std::size_t>(it - types.begin())].push_back(a.id);
    }

    SchellingResult result;
    std::vector<int> counts(types.size(), 0);
    while (true) {
        std::vector<dilemma::Strategy> roles(static_cast<std::size_t>(n), dilemma::Strategy::Defect);
        int cooperators = 0;
        for (std::size_t g = 0; g < types.size(); ++g) {
            for (int m = 0; m < counts[g]; ++m) {
                roles[static_cast<std::size_t>(members[g][static_cast<std::size_t>(m)])] = dilemma::Strategy::Cooperate;
                ++cooperators;
            }
        }
        for (std::uint64_t seed : seeds) {
            for (int ep = 0; ep < options.episodes; ++ep) {
                auto episode = play_scripted(env, roles, derive_seed(seed, static_cast<std::uint64_t>(ep)),
                                             options.density_threshold);
                for (int i = 0; i < n; ++i) {
                    auto idx = static_cast<std::size_t>(i);
                    const bool coop = roles[idx] == dilemma::Strategy::Cooperate;
                    result.samples.push_back({std::string(grid::to_string(env.agents[idx].type)), roles[idx],
                                              cooperators - (coop ? 1 : 0), episode.returns[idx]});
                }
            }
        }
        // odometer over per-type cooperator counts
        std::size_t g = 0;
        while (g < types.size() && counts[g] == static_cast<int>(members[g].size())) {
            counts[g] = 0;
            ++g;
        }
        if (g == types.size()) {
            break;
        }
        ++counts[g];
    }
    result.diagram = dilemma::build_schelling_diagram(result.samples, n);
    result.report = dilemma::verify_empirical_dilemma(result.diagram);
    return result;
}

// ---------------------------------------------------------------------------

Trace parse_trace(std::string_view text)
{
    Trace trace;
    bool have_agents = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) {
            continue;
        }
        auto fail = [&](const std::string& what) {
            throw ValidationError("trace line " + std::to_string(line_no) + ": " + what);
        };
        std::istringstream words(body);
        std::string head;
        words >> head;
        std::vector<std::string> rest;
        for (std::string w; words >> w;) {
            rest.push_back(w);
        }
        try {
            if (head == "agents") {
                if (have_agents || rest.size() != 1) {
                    fail("expected a single 'agents N' line");
                }
                const long long n = parse_integer(rest[0]);
                if (n < 2 || n > 10000) {
                    fail("agent count must lie in [2, 10000]");
                }
                trace.num_agents = static_cast<int>(n);
                have_agents = true;
            } else if (head == "gamma" || head == "lambda") {
                if (rest.size() != 1 || !trace.steps.empty()) {
                    fail("'" + head + " <value>' must precede the steps");
                }
                (head == "gamma" ? trace.gamma : trace.lambda) = parse_number(rest[0]);
            } else if (head == "step") {
                if (!have_agents) {
                    fail("'agents N' must come first");
                }
                TraceStep st;
                if (rest.empty()) {
                    fail("missing step index");
                }
                st.t = static_cast<int>(parse_integer(rest[0]));
                if (st.t != static_cast<int>(trace.steps.size()) + 1) {
                    fail("steps must be numbered 1, 2, ... in order");
                }
                std::size_t i = 1;
                if (i >= rest.size() || rest[i] != "rewards") {
                    fail("expected 'rewards'");
                }
                ++i;
                for (int a = 0; a < trace.num_agents; ++a, ++i) {
                    if (i >= rest.size()) {
                        fail("expected " + std::to_string(trace.num_agents) + " rewards");
                    }
                    st.rewards.push_back(parse_number(rest[i]));
                }
                st.visibility.assign(static_cast<std::size_t>(trace.num_agents), {});
                if (i < rest.size()) {
                    if (rest[i] != "visible") {
                        fail("expected 'visible', got '" + rest[i] + "'");
                    }
                    ++i;
                }
                auto add = [&](int a, int b) {
                    if (a < 0 || b < 0 || a >= trace.num_agents || b >= trace.num_agents || a == b) {
                        fail("bad visibility pair " + std::to_string(a) + "," + std::to_string(b));
                    }
                    auto& v = st.visibility[static_cast<std::size_t>(a)];
                    if (std::find(v.begin(), v.end(), b) == v.end()) {
                        v.push_back(b);
                    }
                };
                for (; i < rest.size(); ++i) {
                    const std::string& tok = rest[i];
                    const auto sep = tok.find_first_of("->");
                    if (sep == std::string::npos || sep == 0) {
                        fail("bad visibility token '" + tok + "'");
                    }
                    const int a = static_cast<int>(parse_integer(tok.substr(0, sep)));
                    const int b = static_cast<int>(parse_integer(tok.substr(sep + 1)));
                    add(a, b);
                    if (tok[sep] == '-') {
                        add(b, a);
                    }
                }
                for (auto& v : st.visibility) {
                    std::sort(v.begin(), v.end());
                }
                trace.steps.push_back(std::move(st));
            } else {
                fail("unknown directive '" + head + "'");
            }
        } catch (const ValidationError& e) {
            const std::string what = e.what();
            if (what.rfind("trace line", 0) == 0) {
                throw;
            }
            fail(what);
        }
    }
    return trace;
}

TraceResult run_trace(const Trace& trace)
{
    TraceResult result;
    if (trace.num_agents == 0 || trace.steps.empty()) {
        return result;
    }
    const int n = trace.num_agents;
    std::vector<shaping::SmoothedTracker> trackers(static_cast<std::size_t>(n));
    auto tables = estimates::initial_tables(n);
    estimates::AgeAccumulator age;
    age.add(tables, 0);
    result.rows = estimates::dump_rows(tables, 0);
    for (const auto& st : trace.steps) {
        std::vector<double> own;
        for (int i = 0; i < n; ++i) {
            auto idx = static_cast<std::size_t>(i);
            trackers[idx] = shaping::update_smoothed(trackers[idx], st.rewards[idx], trace.gamma, trace.lambda);
            own.push_back(trackers[idx].normalized);
        }
        tables = estimates::propagate(tables, st.visibility, own, st.t);
        age.add(tables, st.t);
        auto rows = estimates::dump_rows(tables, st.t);
        result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    }
    result.average_age = age.average();
    return result;
}

// ---------------------------------------------------------------------------

int cmd_classify(const fs::path& game_path, std::ostream& out)
{
    const auto game = dilemma::parse_matrix_game(read_file(game_path));
    const auto report = dilemma::check_social_dilemma(game);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    for (std::size_t i = 0; i < game.agents.size(); ++i) {
        const auto& c = report.agents[i];
        out << "agent " << game.agents[i] << ": C1 " << yn(c.c1) << ", C2 " << yn(c.c2) << ", C3 " << yn(c.c3)
            << ", greed " << yn(c.greed) << ", fear " << yn(c.fear) << '\n';
    }
    out << dilemma::to_string(report.kind) << ", " << (report.asymmetric ? "asymmetric" : "symmetric") << '\n';
    out << "kind,asymmetric\n"
        << dilemma::to_string(report.kind) << ',' << (report.asymmetric ? "true" : "false") << '\n';
    return report.is_social_dilemma() ? 0 : kExitNotADilemma;
}

int cmd_normalize(const fs::path& game_path, std::ostream& out)
{
    out << dilemma::format_matrix_game(dilemma::normalize_game(dilemma::parse_matrix_game(read_file(game_path))));
    return 0;
}

int cmd_schelling(const fs::path& config_path, std::ostream& out)
{
    const auto config = load_experiment(config_path);
    const auto result = run_schelling(config.env, config.schelling, config.seeds);
    const fs::path dir = output_directory(config);
    write_file(dir / "schelling.csv", result.diagram.to_csv());
    std::ostringstream verdict;
    verdict << "verdict," << dilemma::to_string(result.report.verdict) << '\n';
    for (const auto& [type, v] : result.report.per_type) {
        verdict << "type," << type << ',' << dilemma::to_string(v) << '\n';
    }
    for (const auto& [type, k] : result.report.offending) {
        verdict << "offending," << type << ',' << k << '\n';
    }
    for (const auto& [type, k] : result.report.missing) {
        verdict << "missing," << type << ',' << k << '\n';
    }
    write_file(dir / "schelling_verdict.csv", verdict.str());
    out << result.diagram.to_csv() << verdict.str();
    return 0;
}

TrainOutputs run_training(const ExperimentConfig& config, int max_threads)
{
    config.validate();
    TrainOutputs outputs;
    outputs.directory = output_directory(config);
    fs::create_directories(outputs.directory);

    const std::size_t jobs = config.seeds.size();
    std::vector<learning::TrainingLog> logs(jobs);
    std::vector<std::string> errors(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            try {
                const std::uint64_t seed = config.seeds[j];
                std::vector<shaping::AuditRow> audit;
                std::function<void(const learning::StepTrace&)> hook;
                if (config.write_audit) {
                    hook = [&](const learning::StepTrace& s) {
                        for (std::size_t i = 0; i < s.extrinsic.size(); ++i) {
                            audit.push_back({static_cast<int>(s.step), static_cast<int>(i), s.extrinsic[i],
                                             s.extrinsic[i] - s.shaped[i], s.shaped[i]});
                        }
                    };
                }
                auto result = learning::train(config.env, config.shaping, config.learner, seed, hook);
                const fs::path seed_dir = outputs.directory / ("seed_" + std::to_string(seed));
                write_file(seed_dir / "training_log.csv", result.log.to_csv());
                if (config.write_checkpoints) {
                    write_file(seed_dir / "checkpoint.txt", learning::checkpoint_to_text(result.tables));
                }
                if (config.write_audit) {
                    write_file(seed_dir / "shaping_audit.csv", shaping::audit_to_csv(audit));
                }
                logs[j] = std::move(result.log);
            } catch (const std::exception& e) {
                errors[j] = e.what();
            }
        }
    };
    unsigned threads = max_threads > 0 ? static_cast<unsigned>(max_threads) : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(jobs));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (std::size_t j = 0; j < jobs; ++j) {
        if (!errors[j].empty()) {
            throw std::runtime_error("seed " + std::to_string(config.seeds[j]) + ": " + errors[j]);
        }
    }

    std::ostringstream merged;
    merged << "eval_step,seed,scope,name,value\n";
    for (const auto& log : logs) {
        for (const auto& row : log.rows) {
            merged << row.eval_step << ',' << row.seed << ',' << row.metric.scope << ',' << row.metric.name << ','
                   << format_number(row.metric.value) << '\n';
        }
    }
    outputs.metrics = outputs.directory / "metrics.csv";
    write_file(outputs.metrics, merged.str());
    write_file(outputs.directory / "config.ini", serialize_experiment(config));

    nlohmann::ordered_json manifest;
    manifest["name"] = config.name;
    manifest["version"] = std::string(kVersion);
    manifest["config_hash"] = config_hash(config);
    manifest["config_file"] = "config.ini";
    manifest["environment"] = std::string(grid::to_string(config.env.env));
    manifest["variant"] = std::string(grid::to_string(config.env.variant));
    manifest["method"] = std::string(shaping::to_string(config.shaping.method));
    nlohmann::ordered_json phi = nlohmann::ordered_json::object();
    for (const auto& a : config.env.agents) {
        const std::string type(grid::to_string(a.type));
        if (!phi.contains(type)) {
            phi[type] = config.shaping.phi_for(a);
        }
    }
    manifest["phi"] = phi;
    manifest["metrics"] = "metrics.csv";
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (std::uint64_t seed : config.seeds) {
        const std::string dir = "seed_" + std::to_string(seed);
        nlohmann::ordered_json run;
        run["seed"] = seed;
        run["training_log"] = dir + "/training_log.csv";
        if (config.write_checkpoints) {
            run["checkpoint"] = dir + "/checkpoint.txt";
        }
        if (config.write_audit) {
            run["shaping_audit"] = dir + "/shaping_audit.csv";
        }
        runs.push_back(run);
        outputs.logs.push_back(outputs.directory / dir / "training_log.csv");
    }
    manifest["runs"] = runs;
    outputs.manifest = outputs.directory / "manifest.json";
    write_file(outputs.manifest, manifest.dump(2) + "\n");
    return outputs;
}

int cmd_train(const fs::path& config_path, std::ostream& out)
{
    const auto config = load_experiment(config_path);
    const auto outputs = run_training(config);
    out << "wrote " << outputs.logs.size() << " training logs, " << outputs.metrics.string() << " and "
        << outputs.manifest.string() << '\n';
    return 0;
}

int cmd_trace(const fs::path& trace_path, const std::optional<fs::path>& dump, std::ostream& out)
{
    const auto result = run_trace(parse_trace(read_file(trace_path)));
    const std::string csv = estimates::dump_to_csv(result.rows);
    if (dump) {
        write_file(*dump, csv);
        if (result.average_age) {
            out << "average_age," << format_number(*result.average_age) << '\n';
        }
    } else {
        out << csv;
        if (result.average_age) {
            std::clog << "average_age," << format_number(*result.average_age) << '\n';
        }
    }
    return 0;
}

namespace {

struct Series {
    std::vector<double> values;
};

} // namespace

int cmd_report(const fs::path& run_dir, std::ostream& out)
{
    if (!fs::is_directory(run_dir)) {
        throw ValidationError(run_dir.string() + " is not a directory");
    }
    std::vector<fs::path> experiments;
    if (fs::exists(run_dir / "manifest.json")) {
        experiments.push_back(run_dir);
    } else {
        for (const auto& entry : fs::directory_iterator(run_dir)) {
            if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
                experiments.push_back(entry.path());
            }
        }
        std::sort(experiments.begin(), experiments.end());
    }
    if (experiments.empty()) {
        throw ValidationError("no manifest.json found under " + run_dir.string());
    }

    struct Block {
        std::string method;
        std::string name;
        std::string text;
    };
    std::vector<Block> blocks;
    for (const auto& dir : experiments) {
        nlohmann::json manifest;
        try {
            manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError((dir / "manifest.json").string() + ": " + e.what());
        }
        const std::string method = manifest.value("method", "unknown");
        const std::string name = manifest.value("name", dir.filename().string());
        const std::string metrics_text = read_file(dir / manifest.value("metrics", "metrics.csv"));

        // (eval_step, scope, name) in first-appearance order
        std::vector<std::tuple<long long, std::string, std::string>> order;
        std::map<std::tuple<long long, std::string, std::string>, Series> series;
        std::istringstream in(metrics_text);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            auto f = split(line, ',');
            if (f.size() != 5) {
                throw ValidationError("malformed metrics row '" + line + "'");
            }
            auto key = std::make_tuple(parse_integer(f[0]), f[2], f[3]);
            auto [it, inserted] = series.try_emplace(key);
            if (inserted) {
                order.push_back(key);
            }
            it->second.values.push_back(parse_number(f[4]));
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
        std::ostringstream text;
        for (const auto& key : order) {
            const auto& v = series[key].values;
            double mean = 0.0;
            for (double x : v) {
                mean += x;
            }
            mean /= static_cast<double>(v.size());
            double var = 0.0;
            for (double x : v) {
                var += (x - mean) * (x - mean);
            }
            const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
            text << method << ',' << name << ',' << std::get<0>(key) << ',' << std::get<1>(key) << ','
                 << std::get<2>(key) << ',' << format_number(mean) << ',' << format_number(sd) << ',' << v.size()
                 << '\n';
        }
        blocks.push_back({method, name, text.str()});
        out << name << " (" << method << "): " << series.size() << " series\n";
    }
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
        return std::tie(a.method, a.name) < std::tie(b.method, b.name);
    });
    std::string csv = "method,experiment,eval_step,scope,name,mean,std,n\n";
    for (const auto& b : blocks) {
        csv += b.text;
    }
    write_file(run_dir / "plot_data.csv", csv);
    out << "wrote " << (run_dir / "plot_data.csv").string() << '\n';
    return 0;
}

} // namespace ssd::experiment
