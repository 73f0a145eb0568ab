#include "ssd/dilemma.hpp"

#include "ssd/error.hpp"
#include "ssd/ini.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ssd::dilemma {

char outcome_letter(Outcome o)
{
    switch (o) {
    case Outcome::Reward: return 'R';
    case Outcome::Temptation: return 'T';
    case Outcome::Sucker: return 'S';
    case Outcome::Punishment: return 'P';
    }
    return '?';
}

double Payoffs::get(Outcome o) const
{
    switch (o) {
    case Outcome::Reward: return reward;
    case Outcome::Temptation: return temptation;
    case Outcome::Sucker: return sucker;
    case Outcome::Punishment: return punishment;
    }
    return kMissing;
}

double& Payoffs::get(Outcome o)
{
    switch (o) {
    case Outcome::Reward: return reward;
    case Outcome::Temptation: return temptation;
    case Outcome::Sucker: return sucker;
    case Outcome::Punishment: break;
    }
    return punishment;
}

void PayoffMatrix::validate() const
{
    if (agents.size() != 2) {
        throw ValidationError("a 2x2 game needs exactly two agents, got " + std::to_string(agents.size()));
    }
    if (payoffs.size() != agents.size()) {
        throw ValidationError("payoff rows do not match the agent list");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
        for (Outcome o : kOutcomes) {
            if (std::isnan(payoffs[i].get(o))) {
                throw ValidationError("missing cell agent." + agents[i] + "." + outcome_letter(o));
            }
            if (!std::isfinite(payoffs[i].get(o))) {
                throw ValidationError("non-finite cell agent." + agents[i] + "." + outcome_letter(o));
            }
        }
    }
}

std::string_view to_string(DilemmaKind kind)
{
    switch (kind) {
    case DilemmaKind::PrisonersDilemma: return "PrisonersDilemma";
    case DilemmaKind::Chicken: return "Chicken";
    case DilemmaKind::StagHunt: return "StagHunt";
    case DilemmaKind::NotASocialDilemma: return "NotASocialDilemma";
    }
    return "?";
}

DilemmaReport check_social_dilemma(const PayoffMatrix& game)
{
    game.validate();
    DilemmaReport report;
    bool base = true;
    bool greed = true;
    bool fear = true;
    for (const auto& p : game.payoffs) {
        AgentConditions c;
        c.c1 = p.reward > p.punishment;
        c.c2 = p.reward > p.sucker;
        c.c3 = 2.0 * p.reward > p.temptation + p.sucker;
        c.greed = p.temptation > p.reward;
        c.fear = p.punishment > p.sucker;
        base = base && c.c1 && c.c2 && c.c3;
        greed = greed && c.greed;
        fear = fear && c.fear;
        report.agents.push_back(c);
    }
    if (base && greed && fear) {
        report.kind = DilemmaKind::PrisonersDilemma;
    } else if (base && greed) {
        report.kind = DilemmaKind::Chicken;
    } else if (base && fear) {
        report.kind = DilemmaKind::StagHunt;
    } else {
        report.kind = DilemmaKind::NotASocialDilemma;
    }
    report.asymmetric = is_asymmetric(game);
    return report;
}

bool is_asymmetric(const PayoffMatrix& game)
{
    game.validate();
    for (std::size_t i = 0; i < game.payoffs.size(); ++i) {
        for (std::size_t j = i + 1; j < game.payoffs.size(); ++j) {
            for (Outcome o : kOutcomes) {
                if (game.payoffs[i].get(o) != game.payoffs[j].get(o)) {
                    return true;
                }
            }
        }
    }
    return false;
}

PayoffMatrix normalize_game(const PayoffMatrix& game)
{
    game.validate();
    PayoffMatrix out = game;
    for (std::size_t i = 0; i < game.payoffs.size(); ++i) {
        const Payoffs& p = game.payoffs[i];
        double lo = std::min({p.reward, p.temptation, p.sucker, p.punishment});
        double hi = std::max({p.reward, p.temptation, p.sucker, p.punishment});
        if (!(hi > lo)) {
            throw ValidationError("cannot normalize agent " + game.agents[i] +
                                  ": all four outcomes are equal");
        }
        for (Outcome o : kOutcomes) {
            out.payoffs[i].get(o) = (p.get(o) - lo) / (hi - lo);
        }
    }
    return out;
}

PayoffMatrix parse_matrix_game(std::string_view text)
{
    PayoffMatrix game;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string line = trim(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        start = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto fail = [&](const std::string& what) -> ValidationError {
            return ValidationError("line " + std::to_string(line_no) + ": " + what);
        };
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw fail("expected 'agent.<id>.<R|T|S|P> = <number>'");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        std::size_t last_dot = key.rfind('.');
        if (key.rfind("agent.", 0) != 0 || last_dot == std::string::npos || last_dot <= 6 ||
            last_dot + 2 != key.size()) {
            throw fail("malformed key '" + key + "'");
        }
        std::string id = key.substr(6, last_dot - 6);
        char letter = key.back();
        auto which = std::find_if(kOutcomes.begin(), kOutcomes.end(),
                                  [&](Outcome o) { return outcome_letter(o) == letter; });
        if (which == kOutcomes.end()) {
            throw fail("unknown outcome '" + std::string(1, letter) + "' (expected R, T, S or P)");
        }
        if (!seen.insert(key).second) {
            throw fail("duplicate cell " + key);
        }
        double number = 0.0;
        try {
            number = parse_number(value);
        } catch (const ValidationError& e) {
            throw fail(key + ": " + e.what());
        }
        auto it = std::find(game.agents.begin(), game.agents.end(), id);
        if (it == game.agents.end()) {
            game.agents.push_back(id);
            game.payoffs.emplace_back();
            it = game.agents.end() - 1;
        }
        game.payoffs[static_cast<std::size_t>(it - game.agents.begin())].get(*which) = number;
    }
    game.validate();
    return game;
}

std::string format_matrix_game(const PayoffMatrix& game)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < game.agents.size(); ++i) {
        for (Outcome o : kOutcomes) {
            out << "agent." << game.agents[i] << '.' << outcome_letter(o) << " = "
                << format_number(game.payoffs[i].get(o)) << '\n';
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------

std::string_view to_string(Strategy s)
{
    return s == Strategy::Cooperate ? "cooperate" : "defect";
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

SchellingDiagram::SchellingDiagram(std::map<Key, SchellingCell> cells, int max_k)
    : cells_(std::move(cells)), max_k_(max_k)
{
}

std::optional<SchellingCell> SchellingDiagram::cell(const std::string& agent_type, int k, Strategy s) const
{
    auto it = cells_.find({agent_type, k, s});
    if (it == cells_.end() || it->second.samples == 0) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> SchellingDiagram::agent_types() const
{
    std::vector<std::string> types;
    for (const auto& [key, cell] : cells_) {
        const std::string& t = std::get<0>(key);
        if (types.empty() || types.back() != t) {
            types.push_back(t);
        }
    }
    return types;
}

std::string SchellingDiagram::to_csv() const
{
    std::ostringstream out;
    out << "agent_type,k,strategy,mean_return,n_samples\n";
    for (const auto& type : agent_types()) {
        for (int k = 0; k <= max_k_; ++k) {
            for (Strategy s : {Strategy::Cooperate, Strategy::Defect}) {
                out << type << ',' << k << ',' << to_string(s) << ',';
                if (auto c = cell(type, k, s)) {
                    out << format_number(c->mean_return) << ',' << c->samples << '\n';
                } else {
                    out << ",0\n";
                }
            }
        }
    }
    return out.str();
}

SchellingDiagram build_schelling_diagram(std::span<const SchellingSample> samples, std::optional<int> num_agents)
{
    std::map<SchellingDiagram::Key, double> sums;
    std::map<SchellingDiagram::Key, std::size_t> counts;
    int max_k = 0;
    for (const auto& s : samples) {
        if (s.other_cooperators < 0) {
            throw ValidationError("negative cooperator count in Schelling sample");
        }
        SchellingDiagram::Key key{s.agent_type, s.other_cooperators, s.strategy};
        sums[key] += s.episode_return;
        counts[key] += 1;
        max_k = std::max(max_k, s.other_cooperators);
    }
    if (num_agents) {
        if (max_k > *num_agents - 1) {
            throw ValidationError("cooperator count exceeds num_agents - 1");
        }
        max_k = *num_agents - 1;
    }
    std::map<SchellingDiagram::Key, SchellingCell> cells;
    for (const auto& [key, sum] : sums) {
        std::size_t n = counts[key];
        cells[key] = {sum / static_cast<double>(n), n};
    }
    return SchellingDiagram(std::move(cells), max_k);
}

EmpiricalReport verify_empirical_dilemma(const SchellingDiagram& diagram)
{
    EmpiricalReport report;
    bool any_fail = false;
    bool any_missing = false;
    for (const auto& type : diagram.agent_types()) {
        bool type_fail = false;
        bool type_missing = false;
        for (int k = 0; k <= diagram.max_k(); ++k) {
            CellComparison cmp{type, k, std::nullopt, std::nullopt};
            if (auto c = diagram.cell(type, k, Strategy::Cooperate)) {
                cmp.cooperate_mean = c->mean_return;
            }
            if (auto d = diagram.cell(type, k, Strategy::Defect)) {
                cmp.defect_mean = d->mean_return;
            }
            if (!cmp.comparable()) {
                type_missing = true;
                report.missing.emplace_back(type, k);
            } else if (!cmp.defect_dominates()) {
                type_fail = true;
                report.offending.emplace_back(type, k);
            }
            report.comparisons.push_back(std::move(cmp));
        }
        report.per_type[type] = type_fail ? Verdict::Fail : type_missing ? Verdict::Inconclusive : Verdict::Pass;
        any_fail = any_fail || type_fail;
        any_missing = any_missing || type_missing;
    }
    report.verdict = any_fail ? Verdict::Fail : any_missing ? Verdict::Inconclusive : Verdict::Pass;
    if (diagram.cells().empty()) {
        report.verdict = Verdict::Inconclusive;
    }
    return report;
}

} // namespace ssd::dilemma
