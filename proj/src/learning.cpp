#include "ssd/learning.hpp"

#include "ssd/error.hpp"
#include "ssd/estimates.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace ssd::learning {

ObservationKey encode_observation(const grid::Observation& obs)
{
    ObservationKey key;
    key.reserve(obs.cells.size() + 2);
    for (const auto& c : obs.cells) {
        const int type = c.kind == grid::CellKind::Other ? static_cast<int>(c.other_type) : 0;
        key.push_back(static_cast<char>(static_cast<int>(c.kind) * 8 + type));
    }
    key.push_back(static_cast<char>(obs.facing));
    key.push_back(static_cast<char>(obs.timed_out ? 1 : 0));
    return key;
}

// ---------------------------------------------------------------------------

const QTable::Entry* QTable::find(const ObservationKey& key) const
{
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

QTable::Entry& QTable::entry(const ObservationKey& key)
{
    auto [it, inserted] = entries_.try_emplace(key);
    if (inserted) {
        it->second.q.assign(static_cast<std::size_t>(num_actions_), 0.0);
    }
    return it->second;
}

double QTable::value(const ObservationKey& key, int action) const
{
    const Entry* e = find(key);
    return e == nullptr ? 0.0 : e->q.at(static_cast<std::size_t>(action));
}

double QTable::max_value(const ObservationKey& key) const
{
    const Entry* e = find(key);
    if (e == nullptr) {
        return 0.0;
    }
    return *std::max_element(e->q.begin(), e->q.end());
}

namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string to_hex(std::string_view bytes)
{
    std::string out;
    for (unsigned char c : bytes) {
        out.push_back(kHex[c >> 4]);
        out.push_back(kHex[c & 15]);
    }
    return out;
}

std::string from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) {
        throw ValidationError("checkpoint: odd-length key");
    }
    auto nibble = [](char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw ValidationError(std::string("checkpoint: bad hex digit '") + c + "'");
    };
    std::string out;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    }
    return out;
}

std::string hexfloat(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hexfloat(const std::string& s)
{
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ValidationError("checkpoint: bad value '" + s + "'");
    }
    return v;
}

} // namespace

std::string QTable::to_text() const
{
    std::vector<const std::pair<const ObservationKey, Entry>*> sorted;
    for (const auto& kv : entries_) {
        sorted.push_back(&kv);
    }
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->first < b->first; });
    std::ostringstream out;
    out << "actions " << num_actions_ << "\nentries " << sorted.size() << '\n';
    for (const auto* kv : sorted) {
        out << to_hex(kv->first) << ' ' << kv->second.visits;
        for (double q : kv->second.q) {
            out << ' ' << hexfloat(q);
        }
        out << '\n';
    }
    return out.str();
}

QTable QTable::from_text(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string word;
    int actions = 0;
    std::size_t count = 0;
    if (!(in >> word) || word != "actions" || !(in >> actions) || actions < 1 || !(in >> word) ||
        word != "entries" || !(in >> count)) {
        throw ValidationError("checkpoint: malformed table header");
    }
    QTable q(actions);
    for (std::size_t i = 0; i < count; ++i) {
        std::string key;
        std::uint64_t visits = 0;
        if (!(in >> key >> visits)) {
            throw ValidationError("checkpoint: truncated table");
        }
        Entry& e = q.entry(from_hex(key));
        e.visits = visits;
        for (int a = 0; a < actions; ++a) {
            if (!(in >> word)) {
                throw ValidationError("checkpoint: truncated entry");
            }
            e.q[static_cast<std::size_t>(a)] = parse_hexfloat(word);
        }
    }
    return q;
}

int select_action(const QTable& q, const ObservationKey& key, double epsilon, Rng& rng)
{
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw ValidationError("epsilon must lie in [0, 1]");
    }
    const int n = q.num_actions();
    if (rng.bernoulli(epsilon)) {
        return static_cast<int>(rng.below(static_cast<std::size_t>(n)));
    }
    const QTable::Entry* e = q.find(key);
    if (e == nullptr) {
        return static_cast<int>(rng.below(static_cast<std::size_t>(n)));
    }
    const double best = *std::max_element(e->q.begin(), e->q.end());
    int ties[8];
    int count = 0;
    for (int a = 0; a < n; ++a) {
        if (e->q[static_cast<std::size_t>(a)] == best) {
            ties[count++] = a;
        }
    }
    return count == 1 ? ties[0] : ties[rng.below(static_cast<std::size_t>(count))];
}

void q_update(QTable& q, const ObservationKey& key, int action, double reward, const ObservationKey& next_key,
              bool terminal, double lr, double gamma)
{
    if (!std::isfinite(reward)) {
        throw ValidationError("q_update: reward must be finite");
    }
    if (!(lr > 0.0 && lr <= 1.0)) {
        throw ValidationError("q_update: learning rate must lie in (0, 1]");
    }
    if (action < 0 || action >= q.num_actions()) {
        throw ValidationError("q_update: action out of range");
    }
    const double bootstrap = terminal ? 0.0 : gamma * q.max_value(next_key);
    QTable::Entry& e = q.entry(key);
    double& v = e.q[static_cast<std::size_t>(action)];
    v += lr * (reward + bootstrap - v);
    ++e.visits;
}

// ---------------------------------------------------------------------------

long long LearnerConfig::decay_steps() const
{
    return epsilon_decay_steps >= 0 ? epsilon_decay_steps : training_steps / 5;
}

double LearnerConfig::epsilon_at(long long step) const
{
    const long long d = decay_steps();
    if (d <= 0 || step >= d) {
        return epsilon_end;
    }
    const double f = static_cast<double>(step) / static_cast<double>(d);
    return epsilon_start + (epsilon_end - epsilon_start) * f;
}

void LearnerConfig::validate() const
{
    auto fail = [](const std::string& what) { throw ValidationError("invalid learner config: " + what); };
    if (!(lr > 0.0 && lr <= 1.0)) {
        fail("lr must lie in (0, 1]");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        fail("gamma must lie in [0, 1]");
    }
    for (double e : {epsilon_start, epsilon_end, eval_epsilon}) {
        if (!(e >= 0.0 && e <= 1.0)) {
            fail("epsilon values must lie in [0, 1]");
        }
    }
    if (epsilon_end > epsilon_start) {
        fail("epsilon must not increase over the schedule");
    }
    if (training_steps < 0 || eval_period < 1 || eval_episodes < 1) {
        fail("training_steps >= 0, eval_period >= 1 and eval_episodes >= 1 required");
    }
    if (epsilon_decay_steps < -1) {
        fail("epsilon_decay_steps must be >= 0 (or -1 for the default)");
    }
}

LearnerConfig read_learner_config(const IniSection* section)
{
    SectionReader r(section, "[learner]");
    LearnerConfig c;
    c.lr = r.number("lr", c.lr);
    c.gamma = r.number("gamma", c.gamma);
    c.epsilon_start = r.number("epsilon_start", c.epsilon_start);
    c.epsilon_end = r.number("epsilon_end", c.epsilon_end);
    c.epsilon_decay_steps = r.integer("epsilon_decay_steps", c.epsilon_decay_steps);
    c.training_steps = r.integer("training_steps", c.training_steps);
    c.eval_period = r.integer("eval_period", c.eval_period);
    const long long episodes = r.integer("eval_episodes", c.eval_episodes);
    if (episodes < 1 || episodes > 1'000'000) {
        throw ValidationError("[learner]: eval_episodes out of range");
    }
    c.eval_episodes = static_cast<int>(episodes);
    c.eval_epsilon = r.number("eval_epsilon", c.eval_epsilon);
    r.finish();
    c.validate();
    return c;
}

void write_learner_config(const LearnerConfig& c, IniSection& s)
{
    s.set("lr", format_number(c.lr));
    s.set("gamma", format_number(c.gamma));
    s.set("epsilon_start", format_number(c.epsilon_start));
    s.set("epsilon_end", format_number(c.epsilon_end));
    s.set("epsilon_decay_steps", std::to_string(c.epsilon_decay_steps));
    s.set("training_steps", std::to_string(c.training_steps));
    s.set("eval_period", std::to_string(c.eval_period));
    s.set("eval_episodes", std::to_string(c.eval_episodes));
    s.set("eval_epsilon", format_number(c.eval_epsilon));
}

std::string TrainingLog::to_csv() const
{
    std::ostringstream out;
    out << "eval_step,seed,agent,agent_type,metric,value\n";
    for (const auto& row : rows) {
        const auto& m = row.metric;
        std::string agent = "*";
        std::string type = "*";
        std::string metric = m.name;
        const auto slash = m.name.find('/');
        if (m.scope == "agent") {
            agent = m.name.substr(0, slash);
            type = std::string(grid::to_string(types.at(static_cast<std::size_t>(std::stoi(agent)))));
            metric = m.name.substr(slash + 1);
        } else if (m.scope == "type") {
            type = m.name.substr(0, slash);
            metric = m.name.substr(slash + 1);
        }
        out << row.eval_step << ',' << row.seed << ',' << agent << ',' << type << ',' << metric << ','
            << format_number(m.value) << '\n';
    }
    return out.str();
}

std::string checkpoint_to_text(std::span<const QTable> tables)
{
    std::ostringstream out;
    out << "agents " << tables.size() << '\n';
    for (std::size_t i = 0; i < tables.size(); ++i) {
        out << "agent " << i << '\n' << tables[i].to_text();
    }
    return out.str();
}

std::vector<QTable> checkpoint_from_text(std::string_view text)
{
    std::vector<std::string> blocks;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t expected = 0;
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "agents %zu", &expected) != 1) {
        throw ValidationError("checkpoint: missing 'agents' header");
    }
    while (std::getline(in, line)) {
        if (line.rfind("agent ", 0) == 0) {
            if (line != "agent " + std::to_string(blocks.size())) {
                throw ValidationError("checkpoint: agents out of order");
            }
            blocks.emplace_back();
        } else if (!blocks.empty()) {
            blocks.back() += line + '\n';
        } else if (!line.empty()) {
            throw ValidationError("checkpoint: data before first agent");
        }
    }
    if (blocks.size() != expected) {
        throw ValidationError("checkpoint: expected " + std::to_string(expected) + " agents");
    }
    std::vector<QTable> tables;
    for (const auto& b : blocks) {
        tables.push_back(QTable::from_text(b));
    }
    return tables;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kAgentStream = 0x100;
constexpr std::uint64_t kEpisodeStream = 0x10000;
constexpr std::uint64_t kEvalStream = 0x20000;

// Shared per-step bookkeeping of one episode: environment, smoothed trackers,
// estimate tables and shaping.
class EpisodeRunner {
public:
    EpisodeRunner(const grid::EnvConfig& env, const shaping::ShapingConfig& shaping, bool track_estimates)
        : env_(env), shaping_(shaping), track_(track_estimates || shaping.local)
    {
    }

    void begin(std::uint64_t env_seed)
    {
        state = grid::reset(env_, env_seed);
        const int n = env_.num_agents();
        trackers.assign(static_cast<std::size_t>(n), shaping::SmoothedTracker{});
        tables = estimates::initial_tables(n);
        age = estimates::AgeAccumulator{};
        if (track_) {
            age.add(tables, 0);
        }
        events.clear();
        keys.clear();
        for (int i = 0; i < n; ++i) {
            keys.push_back(encode_observation(grid::observe(state, i)));
        }
    }

    // Advances one step; afterwards `keys` describe the new state.
    void advance(std::span<const grid::Action> joint)
    {
        auto result = grid::step(state, joint);
        const int n = env_.num_agents();
        extrinsic = std::move(result.rewards);
        events.insert(events.end(), result.events.begin(), result.events.end());
        for (int i = 0; i < n; ++i) {
            auto idx = static_cast<std::size_t>(i);
            trackers[idx] = shaping::update_smoothed(trackers[idx], extrinsic[idx], shaping_.gamma, shaping_.lambda);
        }
        std::vector<std::vector<int>> visibility(static_cast<std::size_t>(n));
        keys.clear();
        for (int i = 0; i < n; ++i) {
            auto obs = grid::observe(state, i);
            keys.push_back(encode_observation(obs));
            visibility[static_cast<std::size_t>(i)] = std::move(obs.visible);
        }
        if (track_) {
            std::vector<double> own;
            for (const auto& tr : trackers) {
                own.push_back(tr.normalized);
            }
            tables = estimates::propagate(tables, visibility, own, state.t);
            age.add(tables, state.t);
        }
        shaped = shaping::shape_rewards(shaping_, env_.agents, extrinsic, trackers,
                                        shaping_.local ? &tables : nullptr);
    }

    std::vector<metrics::MetricRow> metric_rows() const
    {
        auto log = metrics::EpisodeLog::from_config(env_, events);
        log.episode_length = state.t;
        std::optional<double> avg_age;
        if (track_ && state.t >= 1) {
            avg_age = age.average();
        }
        return metrics::metric_rows(metrics::compute_metrics(log, avg_age, estimates::average_range(trackers)));
    }

    grid::EnvState state;
    std::vector<shaping::SmoothedTracker> trackers;
    std::vector<estimates::EstimateTable> tables;
    estimates::AgeAccumulator age;
    grid::EventLog events;
    std::vector<ObservationKey> keys;
    std::vector<double> extrinsic;
    shaping::ShapedStep shaped;

private:
    const grid::EnvConfig& env_;
    shaping::ShapingConfig shaping_;
    bool track_;
};

void check_consistent(const grid::EnvConfig& env, const shaping::ShapingConfig& shaping, const LearnerConfig& learner)
{
    env.validate();
    shaping.validate();
    learner.validate();
}

} // namespace

std::vector<metrics::MetricRow> evaluate_episode(const grid::EnvConfig& env, const shaping::ShapingConfig& shaping_in,
                                                 std::span<const QTable> tables, double epsilon, std::uint64_t seed)
{
    const auto shaping = shaping_in.resolved();
    const int n = env.num_agents();
    if (static_cast<int>(tables.size()) != n) {
        throw ValidationError("evaluate: one Q-table per agent required");
    }
    EpisodeRunner runner(env, shaping, true);
    runner.begin(derive_seed(seed, 0));
    std::vector<Rng> rngs;
    for (int i = 0; i < n; ++i) {
        rngs.emplace_back(derive_seed(seed, kAgentStream + static_cast<std::uint64_t>(i)));
    }
    std::vector<grid::Action> joint(static_cast<std::size_t>(n));
    while (!runner.state.done()) {
        for (int i = 0; i < n; ++i) {
            auto idx = static_cast<std::size_t>(i);
            joint[idx] = runner.state.active(i)
                             ? static_cast<grid::Action>(select_action(tables[idx], runner.keys[idx], epsilon, rngs[idx]))
                             : grid::Action::Stay;
        }
        runner.advance(joint);
    }
    return runner.metric_rows();
}

TrainResult train(const grid::EnvConfig& env, const shaping::ShapingConfig& shaping_in, const LearnerConfig& learner,
                  std::uint64_t seed, const std::function<void(const StepTrace&)>& on_step)
{
    const auto shaping = shaping_in.resolved();
    check_consistent(env, shaping, learner);
    const int n = env.num_agents();

    TrainResult result;
    for (const auto& a : env.agents) {
        result.log.types.push_back(a.type);
    }
    result.tables.assign(static_cast<std::size_t>(n), QTable(env.num_actions()));

    auto evaluate = [&](long long at_step) {
        std::vector<std::vector<metrics::MetricRow>> episodes;
        for (int ep = 0; ep < learner.eval_episodes; ++ep) {
            episodes.push_back(evaluate_episode(env, shaping, result.tables, learner.eval_epsilon,
                                                derive_seed(seed, kEvalStream + static_cast<std::uint64_t>(ep))));
        }
        for (auto& row : metrics::average_rows(episodes)) {
            result.log.rows.push_back({at_step, seed, std::move(row)});
        }
    };

    std::vector<Rng> rngs;
    for (int i = 0; i < n; ++i) {
        rngs.emplace_back(derive_seed(seed, kAgentStream + static_cast<std::uint64_t>(i)));
    }

    evaluate(0);
    EpisodeRunner runner(env, shaping, false);
    std::vector<grid::Action> joint(static_cast<std::size_t>(n));
    std::vector<int> chosen(static_cast<std::size_t>(n));
    std::vector<ObservationKey> before;
    long long step = 0;
    for (int episode = 0; step < learner.training_steps; ++episode) {
        runner.begin(derive_seed(seed, kEpisodeStream + static_cast<std::uint64_t>(episode)));
        while (!runner.state.done() && step < learner.training_steps) {
            const double eps = learner.epsilon_at(step);
            for (int i = 0; i < n; ++i) {
                auto idx = static_cast<std::size_t>(i);
                chosen[idx] = runner.state.active(i) ? select_action(result.tables[idx], runner.keys[idx], eps, rngs[idx])
                                                     : static_cast<int>(grid::Action::Stay);
                joint[idx] = static_cast<grid::Action>(chosen[idx]);
            }
            before = runner.keys;
            runner.advance(joint);
            const bool terminal = runner.state.done();
            for (int i = 0; i < n; ++i) {
                auto idx = static_cast<std::size_t>(i);
                q_update(result.tables[idx], before[idx], chosen[idx], runner.shaped.shaped[idx], runner.keys[idx],
                         terminal, learner.lr, learner.gamma);
            }
            ++step;
            if (on_step) {
                on_step({step, episode, runner.state.t, runner.extrinsic, runner.shaped.shaped, runner.trackers});
            }
            if (step % learner.eval_period == 0) {
                evaluate(step);
            }
        }
    }
    return result;
}

} // namespace ssd::learning
