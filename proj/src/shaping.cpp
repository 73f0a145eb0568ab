#include "ssd/shaping.hpp"

#include "ssd/error.hpp"
#include "ssd/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ssd::shaping {

SmoothedTracker update_smoothed(const SmoothedTracker& tracker, double r, double gamma, double lambda)
{
    if (!std::isfinite(r)) {
        throw ValidationError("reward must be finite");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0) || !(lambda >= 0.0 && lambda <= 1.0)) {
        throw ValidationError("gamma and lambda must lie in [0, 1]");
    }
    SmoothedTracker next = tracker;
    next.e = gamma * lambda * tracker.e + r;
    if (tracker.updates == 0) {
        next.e_min = next.e;
        next.e_max = next.e;
    } else {
        next.e_min = std::min(tracker.e_min, next.e);
        next.e_max = std::max(tracker.e_max, next.e);
    }
    ++next.updates;
    next.normalized = normalize(next);
    return next;
}

double normalize(const SmoothedTracker& tracker)
{
    const double range = tracker.range();
    if (!(range >= kRangeEpsilon)) {
        return 0.5;
    }
    return std::clamp((tracker.e - tracker.e_min) / range, 0.0, 1.0);
}

double ia_penalty(double e_i, std::span<const double> others, double alpha, double beta)
{
    if (others.empty()) {
        throw ValidationError("inequity aversion needs at least two agents");
    }
    double behind = 0.0;
    double ahead = 0.0;
    for (double e_j : others) {
        behind += std::max(e_j - e_i, 0.0);
        ahead += std::max(e_i - e_j, 0.0);
    }
    const double n = static_cast<double>(others.size());
    return alpha / n * behind + beta / n * ahead;
}

double ia_shape(double r, double e_i, std::span<const double> others, double alpha, double beta)
{
    return r - ia_penalty(e_i, others, alpha, beta);
}

double svo_angle(double e_i, std::span<const double> others)
{
    if (others.empty()) {
        throw ValidationError("reward angle needs at least one other agent");
    }
    double mean = others.front();
    if (!std::all_of(others.begin(), others.end(), [&](double v) { return v == mean; })) {
        double sum = 0.0;
        for (double v : others) {
            sum += v;
        }
        mean = sum / static_cast<double>(others.size());
    }
    if (mean == e_i) {
        return 45.0;
    }
    return std::atan2(mean, e_i) * 180.0 / std::numbers::pi;
}

double svo_penalty(double theta, double theta_svo, double w)
{
    return w * std::abs(theta_svo - theta);
}

double svo_shape(double r, double theta, double theta_svo, double w)
{
    return r - svo_penalty(theta, theta_svo, w);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::None: return "None";
    case Method::IA: return "IA";
    case Method::SVO: return "SVO";
    case Method::FairLocalIA: return "FairLocalIA";
    case Method::FairLocalSVO: return "FairLocalSVO";
    }
    return "?";
}

Method parse_method(std::string_view text)
{
    for (Method m : {Method::None, Method::IA, Method::SVO, Method::FairLocalIA, Method::FairLocalSVO}) {
        if (to_string(m) == text) {
            return m;
        }
    }
    throw ValidationError("unknown shaping method '" + std::string(text) + "'");
}

ShapingConfig ShapingConfig::resolved() const
{
    ShapingConfig c = *this;
    if (method == Method::FairLocalIA || method == Method::FairLocalSVO) {
        c.normalized = true;
        c.local = true;
    }
    return c;
}

void ShapingConfig::validate() const
{
    auto fail = [](const std::string& what) { throw ValidationError("invalid shaping config: " + what); };
    if (!(gamma >= 0.0 && gamma <= 1.0) || !(lambda >= 0.0 && lambda <= 1.0)) {
        fail("gamma and lambda must lie in [0, 1]");
    }
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(w >= 0.0) || !std::isfinite(alpha + beta + w)) {
        fail("alpha, beta and w must be finite and >= 0");
    }
    if (!(theta_svo >= 0.0 && theta_svo <= 90.0)) {
        fail("theta_svo_deg must lie in [0, 90]");
    }
    if ((method == Method::FairLocalIA || method == Method::FairLocalSVO) && !(normalized && local)) {
        fail(std::string(to_string(method)) + " requires normalized and local");
    }
    if (local && !normalized) {
        fail("local estimates carry normalized values, so local requires normalized");
    }
    for (const auto& p : phi) {
        if (p && (!(*p >= 0.0) || !std::isfinite(*p))) {
            fail("phi must be finite and >= 0");
        }
    }
}

double ShapingConfig::phi_for(const grid::AgentSpec& agent) const
{
    const auto& p = phi[static_cast<std::size_t>(agent.type)];
    return p ? *p : agent.phi;
}

ShapingConfig read_shaping_config(const IniSection* section)
{
    SectionReader r(section, "[shaping]");
    ShapingConfig c;
    c.method = parse_method(r.text("method", "None"));
    const bool fair = c.method == Method::FairLocalIA || c.method == Method::FairLocalSVO;
    c.gamma = r.number("gamma", c.gamma);
    c.lambda = r.number("lambda", c.lambda);
    c.alpha = r.number("alpha", c.alpha);
    c.beta = r.number("beta", c.beta);
    c.w = r.number("w", c.w);
    c.theta_svo = r.number("theta_svo_deg", c.theta_svo);
    c.normalized = r.boolean("normalized", fair);
    c.local = r.boolean("local", fair);
    for (const auto& entry : r.take_prefixed("phi.")) {
        const auto type = grid::parse_agent_type(std::string_view(entry.key).substr(4));
        try {
            c.phi[static_cast<std::size_t>(type)] = parse_number(entry.value);
        } catch (const ValidationError& e) {
            throw ValidationError("[shaping] line " + std::to_string(entry.line) + ": " + e.what());
        }
    }
    r.finish();
    c.validate();
    return c;
}

void write_shaping_config(const ShapingConfig& c, IniSection& s)
{
    s.set("method", std::string(to_string(c.method)));
    s.set("gamma", format_number(c.gamma));
    s.set("lambda", format_number(c.lambda));
    s.set("alpha", format_number(c.alpha));
    s.set("beta", format_number(c.beta));
    s.set("w", format_number(c.w));
    s.set("theta_svo_deg", format_number(c.theta_svo));
    s.set("normalized", c.normalized ? "true" : "false");
    s.set("local", c.local ? "true" : "false");
    for (int t = 0; t < grid::kNumAgentTypes; ++t) {
        if (const auto& p = c.phi[static_cast<std::size_t>(t)]) {
            s.set("phi." + std::string(grid::to_string(static_cast<grid::AgentType>(t))), format_number(*p));
        }
    }
}

Weights effective_weights(const ShapingConfig& config, const grid::AgentSpec& agent)
{
    const double phi = config.phi_for(agent);
    if (!(phi >= 0.0)) {
        throw ValidationError("phi must be >= 0");
    }
    return {phi * config.alpha, phi * config.beta, phi * config.w};
}

ShapedStep shape_rewards(const ShapingConfig& config, std::span<const grid::AgentSpec> agents,
                         std::span<const double> extrinsic, std::span<const SmoothedTracker> trackers,
                         const std::vector<estimates::EstimateTable>* tables)
{
    const std::size_t n = extrinsic.size();
    if (agents.size() != n || trackers.size() != n) {
        throw ValidationError("shape_rewards: agents, rewards and trackers differ in length");
    }
    ShapedStep out;
    out.shaped.assign(extrinsic.begin(), extrinsic.end());
    out.penalty.assign(n, 0.0);
    if (config.method == Method::None) {
        return out;
    }
    if (config.local && (tables == nullptr || tables->size() != n)) {
        throw ValidationError("shape_rewards: local shaping needs one estimate table per agent");
    }
    auto value = [&](std::size_t j) { return config.normalized ? trackers[j].normalized : trackers[j].e; };

    std::vector<double> others;
    for (std::size_t i = 0; i < n; ++i) {
        others.clear();
        if (config.local) {
            others = (*tables)[i].others();
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    others.push_back(value(j));
                }
            }
        }
        const Weights wts = effective_weights(config, agents[i]);
        double p = 0.0;
        if (config.is_ia()) {
            p = ia_penalty(value(i), others, wts.alpha, wts.beta);
        } else {
            p = svo_penalty(svo_angle(value(i), others), config.theta_svo, wts.w);
        }
        out.penalty[i] = p;
        out.shaped[i] = extrinsic[i] - p;
    }
    return out;
}

std::string audit_to_csv(std::span<const AuditRow> rows)
{
    std::ostringstream out;
    out << "t,agent,extrinsic,penalty,shaped\n";
    for (const auto& r : rows) {
        out << r.t << ',' << r.agent << ',' << format_number(r.extrinsic) << ',' << format_number(r.penalty) << ','
            << format_number(r.shaped) << '\n';
    }
    return out.str();
}

} // namespace ssd::shaping
