#pragma once

// Temporally smoothed rewards and the IA / SVO fairness penalties.

#include "ssd/gridworld.hpp"
#include "ssd/ini.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssd::estimates {
struct EstimateTable;
}

namespace ssd::shaping {

inline constexpr double kRangeEpsilon = 1e-8;

struct SmoothedTracker {
    double e = 0.0;
    double e_min = 0.0;
    double e_max = 0.0;
    double normalized = 0.5;
    int updates = 0;

    double range() const { return updates == 0 ? 0.0 : e_max - e_min; }

    bool operator==(const SmoothedTracker&) const = default;
};

// e' = gamma * lambda * e + r; the extrema cover every value after an update.
SmoothedTracker update_smoothed(const SmoothedTracker& tracker, double r, double gamma, double lambda);

// (e - min) / (max - min), or 0.5 while the range is below kRangeEpsilon.
double normalize(const SmoothedTracker& tracker);

// Penalties are nonnegative; the shape functions return r - penalty.
double ia_penalty(double e_i, std::span<const double> others, double alpha, double beta);
double ia_shape(double r, double e_i, std::span<const double> others, double alpha, double beta);

// Degrees; atan2(mean(others), e_i) with the origin mapped to 45.
double svo_angle(double e_i, std::span<const double> others);
double svo_penalty(double theta, double theta_svo, double w);
double svo_shape(double r, double theta, double theta_svo, double w);

enum class Method { None, IA, SVO, FairLocalIA, FairLocalSVO };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

struct ShapingConfig {
    Method method = Method::None;
    double gamma = 0.99;
    double lambda = 0.9;
    double alpha = 0.0;
    double beta = 0.0;
    double w = 0.0;
    double theta_svo = 45.0;
    bool normalized = false;
    bool local = false;
    // Per-type social drive modifier; unset types fall back to AgentSpec::phi.
    std::array<std::optional<double>, grid::kNumAgentTypes> phi{};

    bool is_ia() const { return method == Method::IA || method == Method::FairLocalIA; }
    bool is_svo() const { return method == Method::SVO || method == Method::FairLocalSVO; }

    // FairLocal methods switch on normalization and local estimates.
    ShapingConfig resolved() const;
    void validate() const;
    double phi_for(const grid::AgentSpec& agent) const;

    bool operator==(const ShapingConfig&) const = default;
};

ShapingConfig read_shaping_config(const IniSection* section);
void write_shaping_config(const ShapingConfig& config, IniSection& section);

struct Weights {
    double alpha = 0.0;
    double beta = 0.0;
    double w = 0.0;
};

Weights effective_weights(const ShapingConfig& config, const grid::AgentSpec& agent);

struct ShapedStep {
    std::vector<double> shaped;
    std::vector<double> penalty; // extrinsic - shaped, always >= 0
};

// Comparison values are raw e unless the config is normalized, in which case
// ê is used. With `local`, agent i compares itself against its own estimate
// table instead of the true values of the others.
ShapedStep shape_rewards(const ShapingConfig& config, std::span<const grid::AgentSpec> agents,
                         std::span<const double> extrinsic, std::span<const SmoothedTracker> trackers,
                         const std::vector<estimates::EstimateTable>* tables = nullptr);

struct AuditRow {
    int t = 0;
    int agent = 0;
    double extrinsic = 0.0;
    double penalty = 0.0;
    double shaped = 0.0;
};

std::string audit_to_csv(std::span<const AuditRow> rows);

} // namespace ssd::shaping
