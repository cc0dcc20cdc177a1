#pragma once

/**
 * @file report.hpp
 * @brief Randomized checking of bracket identities and the JSON report format.
 *
 * A residual is |lhs - rhs| / max(1, |rhs|, m) where m is the sum of the
 * absolute terms entering the bracket (or a value identity's own scale), so
 * the number measures cancellation error, not the size of the operands.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "curvkepler/observable.hpp"

namespace curvkepler {

/// Deterministic uniform generator; identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

using StateSampler = std::function<PhaseState(Rng&)>;

struct IdentityResult {
    std::string identity;
    std::size_t samples = 0;
    double max_residual = 0.0;
    PhasePoint worst_point{};
};

struct ReportGroup {
    std::string name;
    std::vector<IdentityResult> identities;

    double max_residual() const {
        double m = 0.0;
        for (const auto& r : identities) m = std::max(m, r.max_residual);
        return m;
    }
};

struct BracketReport {
    std::string suite;
    std::vector<ReportGroup> groups;

    double max_residual() const {
        double m = 0.0;
        for (const auto& g : groups) m = std::max(m, g.max_residual());
        return m;
    }
    bool passed(double threshold) const { return max_residual() < threshold; }

    void append(const BracketReport& other) {
        groups.insert(groups.end(), other.groups.begin(), other.groups.end());
    }
};

/// factor * {f, g} = rhs  (rhs invalid means zero).
struct BracketIdentity {
    std::string label;
    Observable f;
    Observable g;
    Observable rhs;
    double factor = 1.0;
};

/// lhs = rhs pointwise; `scale` (optional) sets the cancellation scale.
struct ValueIdentity {
    std::string label;
    Observable lhs;
    Observable rhs;
    Observable scale;
};

/// One group of identities checked on a shared set of sample points.
class IdentityGroup {
public:
    explicit IdentityGroup(std::string name) : name_(std::move(name)) {}

    IdentityGroup& bracket(std::string label, Observable f, Observable g, Observable rhs = {}, double factor = 1.0) {
        brackets_.push_back({std::move(label), std::move(f), std::move(g), std::move(rhs), factor});
        return *this;
    }
    IdentityGroup& value(std::string label, Observable lhs, Observable rhs, Observable scale = {}) {
        values_.push_back({std::move(label), std::move(lhs), std::move(rhs), std::move(scale)});
        return *this;
    }

    ReportGroup run(const StateSampler& sampler, std::size_t samples, std::uint64_t seed) const {
        ReportGroup out{name_, {}};
        for (const auto& b : brackets_) out.identities.push_back({b.label, samples, 0.0, {}});
        for (const auto& v : values_) out.identities.push_back({v.label, samples, 0.0, {}});
        Rng rng(seed);
        for (std::size_t n = 0; n < samples; ++n) {
            const PhaseState s = sampler(rng);
            std::size_t k = 0;
            for (const auto& b : brackets_) record(out.identities[k++], s, bracket_residual(b, s), n == 0);
            for (const auto& v : values_) record(out.identities[k++], s, value_residual(v, s), n == 0);
        }
        return out;
    }

    static double bracket_residual(const BracketIdentity& b, const PhaseState& s) {
        const Gradient df = grad(b.f, s);
        const Gradient dg = grad(b.g, s);
        const double lhs = b.factor * pbracket(df, dg);
        const double rhs = b.rhs.valid() ? b.rhs(s) : 0.0;
        const double scale = std::max({1.0, std::abs(rhs), std::abs(b.factor) * bracket_magnitude(df, dg)});
        return std::abs(lhs - rhs) / scale;
    }

    static double value_residual(const ValueIdentity& v, const PhaseState& s) {
        const double lhs = v.lhs(s), rhs = v.rhs(s);
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (v.scale.valid()) scale = std::max(scale, std::abs(v.scale(s)));
        return std::abs(lhs - rhs) / scale;
    }

private:
    static void record(IdentityResult& r, const PhaseState& s, double residual, bool first) {
        if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
        if (first || residual > r.max_residual) {
            r.max_residual = residual;
            r.worst_point = s.x;
        }
    }

    std::string name_;
    std::vector<BracketIdentity> brackets_;
    std::vector<ValueIdentity> values_;
};

/// Multiplies one named observable by `factor` when building a suite (negative controls).
struct Perturbation {
    std::string target;
    double factor = 1.01;

    Observable apply(const Observable& o, const std::string& name) const {
        return name == target ? (factor * o).renamed(o.name()) : o;
    }
};

inline Observable perturb(const std::optional<Perturbation>& p, const Observable& o, const std::string& name) {
    return p ? p->apply(o, name) : o;
}

using json = nlohmann::ordered_json;

inline json to_json(const IdentityResult& r) {
    json j;
    j["identity"] = r.identity;
    j["samples"] = r.samples;
    j["max_residual"] = std::isfinite(r.max_residual) ? json(r.max_residual) : json("inf");
    j["worst_point"] = r.worst_point;
    return j;
}

inline json to_json(const BracketReport& rep, double threshold) {
    json j;
    j["schema"] = 1;
    j["suite"] = rep.suite;
    j["threshold"] = threshold;
    j["max_residual"] = std::isfinite(rep.max_residual()) ? json(rep.max_residual()) : json("inf");
    j["passed"] = rep.passed(threshold);
    json groups = json::array();
    for (const auto& g : rep.groups) {
        json jg;
        jg["group"] = g.name;
        jg["max_residual"] = std::isfinite(g.max_residual()) ? json(g.max_residual()) : json("inf");
        json ids = json::array();
        for (const auto& r : g.identities) ids.push_back(to_json(r));
        jg["identities"] = std::move(ids);
        groups.push_back(std::move(jg));
    }
    j["groups"] = std::move(groups);
    return j;
}

}  // namespace curvkepler
