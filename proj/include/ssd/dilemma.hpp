#pragma once

// Matrix-form social dilemmas: condition checks, classification, asymmetry,
// per-agent normalization, and empirical Schelling diagrams.

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ssd::dilemma {

enum class Outcome { Reward, Temptation, Sucker, Punishment };

inline constexpr std::array<Outcome, 4> kOutcomes = {Outcome::Reward, Outcome::Temptation,
                                                     Outcome::Sucker, Outcome::Punishment};

char outcome_letter(Outcome o);

// One agent's four outcome values. NaN marks a cell that was never provided.
struct Payoffs {
    static constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

    double reward = kMissing;     // R: mutual cooperation
    double temptation = kMissing; // T: defect against a cooperator
    double sucker = kMissing;     // S: cooperate against a defector
    double punishment = kMissing; // P: mutual defection

    double get(Outcome o) const;
    double& get(Outcome o);
};

// 2x2 game between two named agents.
struct PayoffMatrix {
    std::vector<std::string> agents;
    std::vector<Payoffs> payoffs;

    // Throws ValidationError naming the first missing cell (e.g. "agent.j.P").
    void validate() const;
};

enum class DilemmaKind { PrisonersDilemma, Chicken, StagHunt, NotASocialDilemma };

std::string_view to_string(DilemmaKind kind);

struct AgentConditions {
    bool c1 = false;    // R > P
    bool c2 = false;    // R > S
    bool c3 = false;    // 2R > T + S
    bool greed = false; // T > R
    bool fear = false;  // P > S
};

struct DilemmaReport {
    std::vector<AgentConditions> agents;
    DilemmaKind kind = DilemmaKind::NotASocialDilemma;
    bool asymmetric = false;

    bool is_social_dilemma() const { return kind != DilemmaKind::NotASocialDilemma; }
};

DilemmaReport check_social_dilemma(const PayoffMatrix& game);

// Exact comparison: any differing outcome value between any two agents.
bool is_asymmetric(const PayoffMatrix& game);

// Maps each agent's outcomes onto [0, 1] by its own min/max.
PayoffMatrix normalize_game(const PayoffMatrix& game);

// Text format: one `agent.<id>.<R|T|S|P> = <number>` per line, `#` comments.
PayoffMatrix parse_matrix_game(std::string_view text);
std::string format_matrix_game(const PayoffMatrix& game);

// ---------------------------------------------------------------------------
// Schelling diagrams

enum class Strategy { Cooperate, Defect };

std::string_view to_string(Strategy s);

struct SchellingSample {
    std::string agent_type;
    Strategy strategy = Strategy::Cooperate;
    int other_cooperators = 0;
    double episode_return = 0.0;
};

struct SchellingCell {
    double mean_return = 0.0;
    std::size_t samples = 0;
};

class SchellingDiagram {
public:
    using Key = std::tuple<std::string, int, Strategy>;

    SchellingDiagram() = default;
    SchellingDiagram(std::map<Key, SchellingCell> cells, int max_k);

    // Absent cells return nullopt.
    std::optional<SchellingCell> cell(const std::string& agent_type, int k, Strategy s) const;

    std::vector<std::string> agent_types() const;
    int max_k() const { return max_k_; }
    const std::map<Key, SchellingCell>& cells() const { return cells_; }

    // Columns: agent_type,k,strategy,mean_return,n_samples. Absent cells are
    // written with an empty mean and n_samples = 0.
    std::string to_csv() const;

private:
    std::map<Key, SchellingCell> cells_;
    int max_k_ = 0;
};

// Cooperator counts range over 0..num_agents-1 when num_agents is given,
// otherwise over 0..(largest observed count).
SchellingDiagram build_schelling_diagram(std::span<const SchellingSample> samples,
                                         std::optional<int> num_agents = std::nullopt);

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict v);

struct CellComparison {
    std::string agent_type;
    int k = 0;
    std::optional<double> cooperate_mean;
    std::optional<double> defect_mean;

    bool comparable() const { return cooperate_mean && defect_mean; }
    bool defect_dominates() const { return comparable() && *defect_mean > *cooperate_mean; }
};

struct EmpiricalReport {
    Verdict verdict = Verdict::Inconclusive;
    std::map<std::string, Verdict> per_type;
    std::vector<CellComparison> comparisons;
    std::vector<std::pair<std::string, int>> offending; // (type, k) where cooperation won or tied
    std::vector<std::pair<std::string, int>> missing;   // (type, k) lacking one strategy
};

// Fail if any comparable cell has defect <= cooperate; otherwise Inconclusive
// if any cell lacks a strategy; otherwise Pass.
EmpiricalReport verify_empirical_dilemma(const SchellingDiagram& diagram);

} // namespace ssd::dilemma
