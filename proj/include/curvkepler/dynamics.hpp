#pragma once

/**
 * @file dynamics.hpp
 * @brief Hamilton's equations from exact gradients, trajectory integration and drift monitoring.
 *
 * Integrators:
 *  - Dopri5: Dormand-Prince 5(4), adaptive, Hairer-style error norm.
 *  - ImplicitMidpoint: fixed step, symplectic, solved by fixed-point iteration.
 * A run stops at t_end, on a chart degeneracy (margin below the guard epsilon
 * or a non-finite vector field), or when the adaptive step underflows.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvkepler/observable.hpp"
#include "curvkepler/phase.hpp"
#include "curvkepler/report.hpp"
#include "curvkepler/spaces.hpp"

namespace curvkepler {

using StateVector = std::array<double, 6>;

/// (dH/dp, -dH/dq).
inline StateVector rhs(const Observable& h, const PhaseState& s) {
    const Gradient g = grad(h, s);
    return {g[3], g[4], g[5], -g[0], -g[1], -g[2]};
}

enum class Method { Dopri5, ImplicitMidpoint };

inline std::string_view to_string(Method m) { return m == Method::Dopri5 ? "dopri5" : "implicit-midpoint"; }

inline Method parse_method(std::string_view s) {
    if (s == "dopri5") return Method::Dopri5;
    if (s == "implicit-midpoint") return Method::ImplicitMidpoint;
    throw std::invalid_argument("unknown integrator '" + std::string(s) + "'");
}

struct IntegratorConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double t_end = 1.0;
    int sample_stride = 1;
    Method method = Method::Dopri5;
    double fixed_step = 0.0;  // > 0: Dopri5 without error control, and the ImplicitMidpoint step
    double singularity_eps = 1e-6;
    std::size_t max_steps = 50'000'000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
        if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
        if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be finite and >= 0");
        if (sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
        if (fixed_step < 0.0) throw std::invalid_argument("fixed_step must be >= 0");
        if (method == Method::ImplicitMidpoint && !(fixed_step > 0.0))
            throw std::invalid_argument("implicit midpoint needs fixed_step > 0");
        if (!(singularity_eps >= 0.0)) throw std::invalid_argument("singularity_eps must be >= 0");
    }
};

enum class Termination { Completed, Singularity, StepUnderflow, StepLimit };

inline std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::Singularity: return "singularity";
        case Termination::StepUnderflow: return "step-underflow";
        case Termination::StepLimit: return "step-limit";
    }
    return "?";
}

struct Trajectory {
    Chart chart = Chart::PolarConstant;
    std::vector<double> times;
    std::vector<PhaseState> states;
    std::vector<std::string> monitor_names;
    std::vector<std::vector<double>> invariant_series;  // [monitor][sample]
    Termination status = Termination::Completed;
    std::string reason;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Distance of a state from the degeneracies of its chart; smaller than eps stops a run.
using SingularityGuard = std::function<double(const PhaseState&)>;

inline SingularityGuard chart_guard(const SpaceParams& p) {
    return [p](const PhaseState& s) { return chart_margin(s, p); };
}

namespace detail {

struct SingularEvent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline StateVector checked_rhs(const Observable& h, const PhaseState& s) {
    try {
        const StateVector f = rhs(h, s);
        for (double v : f)
            if (!std::isfinite(v)) throw SingularEvent("vector field is not finite");
        return f;
    } catch (const DomainError& e) {
        throw SingularEvent(e.what());
    } catch (const PoleError& e) {
        throw SingularEvent(e.what());
    }
}

inline StateVector axpy(const StateVector& y, double h, const StateVector& k) {
    StateVector r;
    for (std::size_t i = 0; i < 6; ++i) r[i] = y[i] + h * k[i];
    return r;
}

// Dormand-Prince 5(4) tableau.
struct Dopri5Tableau {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    // fifth-order weights minus fourth-order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/**
 * Integrates Hamilton's equations of `h` from s0 to cfg.t_end.
 * Samples are recorded at t = 0, every `sample_stride` accepted steps, and at
 * the final time; each sample carries every monitor's value.
 */
inline Trajectory integrate(const Observable& h, const PhaseState& s0, const IntegratorConfig& cfg,
                            const std::vector<Observable>& monitors, const SingularityGuard& guard = {}) {
    cfg.validate();
    h.check_chart(s0.chart);
    for (const auto& m : monitors) m.check_chart(s0.chart);

    Trajectory tr;
    tr.chart = s0.chart;
    for (const auto& m : monitors) tr.monitor_names.push_back(m.name());
    tr.invariant_series.resize(monitors.size());
    const auto record = [&](double t, const StateVector& y) {
        const PhaseState s{s0.chart, y};
        tr.times.push_back(t);
        tr.states.push_back(s);
        for (std::size_t i = 0; i < monitors.size(); ++i) tr.invariant_series[i].push_back(monitors[i](s));
    };
    const auto stop = [&](Termination why, std::string reason) {
        tr.status = why;
        tr.reason = std::move(reason);
    };
    const auto guarded = [&](const StateVector& y) {
        return !guard || guard(PhaseState{s0.chart, y}) > cfg.singularity_eps;
    };

    StateVector y = s0.x;
    if (!guarded(y)) {
        record(0.0, y);
        stop(Termination::Singularity, "initial state is within the singularity guard");
        return tr;
    }
    record(0.0, y);
    if (cfg.t_end == 0.0) return tr;

    const auto f = [&](const StateVector& v) { return detail::checked_rhs(h, PhaseState{s0.chart, v}); };
    double t = 0.0;
    const double t_end = cfg.t_end;
    const double h_min = 1e-14 * t_end;
    std::size_t since_sample = 0;

    const auto accept = [&](double t_new, const StateVector& y_new) {
        t = t_new;
        y = y_new;
        ++tr.accepted_steps;
        if (++since_sample >= static_cast<std::size_t>(cfg.sample_stride) || t >= t_end) {
            record(t, y);
            since_sample = 0;
        }
    };

    try {
        if (cfg.method == Method::ImplicitMidpoint) {
            while (t < t_end) {
                const double step = std::min(cfg.fixed_step, t_end - t);
                StateVector y1 = detail::axpy(y, step, f(y));
                for (int it = 0; it < 200; ++it) {
                    StateVector mid;
                    for (std::size_t i = 0; i < 6; ++i) mid[i] = 0.5 * (y[i] + y1[i]);
                    const StateVector next = detail::axpy(y, step, f(mid));
                    double diff = 0.0;
                    for (std::size_t i = 0; i < 6; ++i)
                        diff = std::max(diff, std::abs(next[i] - y1[i]) / (1.0 + std::abs(next[i])));
                    y1 = next;
                    if (diff < 1e-15) break;
                }
                if (!guarded(y1)) {
                    accept(t + step, y1);
                    stop(Termination::Singularity, "state entered the singularity guard");
                    break;
                }
                accept(t_end - t <= cfg.fixed_step ? t_end : t + step, y1);
                if (tr.accepted_steps >= cfg.max_steps && t < t_end) {
                    stop(Termination::StepLimit, "maximum number of steps reached");
                    break;
                }
            }
            if (tr.times.back() != t) record(t, y);
            return tr;
        }

        using B = detail::Dopri5Tableau;
        StateVector k1 = f(y);
        const bool adaptive = !(cfg.fixed_step > 0.0);
        double step;
        if (adaptive) {
            // Hairer's starting-step heuristic
            double d0 = 0.0, d1 = 0.0;
            for (std::size_t i = 0; i < 6; ++i) {
                const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
                d0 += (y[i] / sk) * (y[i] / sk);
                d1 += (k1[i] / sk) * (k1[i] / sk);
            }
            d0 = std::sqrt(d0 / 6.0);
            d1 = std::sqrt(d1 / 6.0);
            double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
            h0 = std::min({h0, cfg.max_step, t_end});
            const StateVector k2 = f(detail::axpy(y, h0, k1));
            double d2 = 0.0;
            for (std::size_t i = 0; i < 6; ++i) {
                const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
                d2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
            }
            d2 = std::sqrt(d2 / 6.0) / h0;
            const double dmax = std::max(d1, d2);
            const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
            step = std::min({100.0 * h0, h1, cfg.max_step, t_end});
        } else {
            step = std::min(cfg.fixed_step, t_end);
        }

        double err_prev = 1e-4;
        bool last_rejected = false;
        while (t < t_end) {
            if (tr.accepted_steps + tr.rejected_steps >= cfg.max_steps) {
                stop(Termination::StepLimit, "maximum number of steps reached");
                break;
            }
            bool finishing = false;
            if (t + step >= t_end) {
                step = t_end - t;
                finishing = true;
            }
            if (adaptive && step < h_min && !finishing) {
                stop(Termination::StepUnderflow, "step size underflow (likely approaching a singularity)");
                break;
            }
            StateVector yt;
            for (std::size_t i = 0; i < 6; ++i) yt[i] = y[i] + step * B::a21 * k1[i];
            const StateVector k2 = f(yt);
            for (std::size_t i = 0; i < 6; ++i) yt[i] = y[i] + step * (B::a31 * k1[i] + B::a32 * k2[i]);
            const StateVector k3 = f(yt);
            for (std::size_t i = 0; i < 6; ++i)
                yt[i] = y[i] + step * (B::a41 * k1[i] + B::a42 * k2[i] + B::a43 * k3[i]);
            const StateVector k4 = f(yt);
            for (std::size_t i = 0; i < 6; ++i)
                yt[i] = y[i] + step * (B::a51 * k1[i] + B::a52 * k2[i] + B::a53 * k3[i] + B::a54 * k4[i]);
            const StateVector k5 = f(yt);
            for (std::size_t i = 0; i < 6; ++i)
                yt[i] = y[i] + step * (B::a61 * k1[i] + B::a62 * k2[i] + B::a63 * k3[i] + B::a64 * k4[i] +
                                       B::a65 * k5[i]);
            const StateVector k6 = f(yt);
            StateVector y5;
            for (std::size_t i = 0; i < 6; ++i)
                y5[i] = y[i] + step * (B::a71 * k1[i] + B::a73 * k3[i] + B::a74 * k4[i] + B::a75 * k5[i] +
                                       B::a76 * k6[i]);
            const StateVector k7 = f(y5);

            if (!adaptive) {
                const double t_new = finishing ? t_end : t + step;
                accept(t_new, y5);
                k1 = k7;
                if (!guarded(y)) {
                    stop(Termination::Singularity, "state entered the singularity guard");
                    break;
                }
                continue;
            }

            double err = 0.0;
            for (std::size_t i = 0; i < 6; ++i) {
                const double e = step * (B::e1 * k1[i] + B::e3 * k3[i] + B::e4 * k4[i] + B::e5 * k5[i] +
                                         B::e6 * k6[i] + B::e7 * k7[i]);
                const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err += (e / sk) * (e / sk);
            }
            err = std::sqrt(err / 6.0);
            if (!std::isfinite(err)) err = 1e10;

            if (err <= 1.0) {
                // PI step control (Gustafsson), exponents as in Hairer's DOPRI5
                const double fac = std::clamp(0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04), 0.2, 10.0);
                err_prev = std::max(err, 1e-4);
                accept(finishing ? t_end : t + step, y5);
                k1 = k7;
                if (!guarded(y)) {
                    stop(Termination::Singularity, "state entered the singularity guard");
                    break;
                }
                double next = step * (last_rejected ? std::min(fac, 1.0) : fac);
                step = std::min(next, cfg.max_step);
                last_rejected = false;
            } else {
                ++tr.rejected_steps;
                step *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                last_rejected = true;
            }
        }
    } catch (const detail::SingularEvent& e) {
        stop(Termination::Singularity, std::string("vector field singular: ") + e.what());
    }
    if (tr.times.back() != t) record(t, y);
    return tr;
}

inline Trajectory integrate(const Observable& h, const PhaseState& s0, const IntegratorConfig& cfg,
                            const std::vector<Observable>& monitors, const SpaceParams& params) {
    return integrate(h, s0, cfg, monitors, chart_guard(params));
}

struct DriftEntry {
    double max_drift = 0.0;
    double time_of_worst = 0.0;
};

/// Per monitor: max over samples of |m(t) - m(0)| / max(|m(0)|, 1).
inline std::map<std::string, DriftEntry> drift_report(const Trajectory& tr) {
    if (tr.times.empty()) throw std::invalid_argument("drift_report: empty trajectory");
    std::map<std::string, DriftEntry> out;
    for (std::size_t m = 0; m < tr.monitor_names.size(); ++m) {
        const auto& series = tr.invariant_series[m];
        const double m0 = series.front();
        const double scale = std::max(std::abs(m0), 1.0);
        DriftEntry e;
        for (std::size_t i = 0; i < series.size(); ++i) {
            double d = std::abs(series[i] - m0) / scale;
            if (std::isnan(d)) d = std::numeric_limits<double>::infinity();
            if (d > e.max_drift) e = {d, tr.times[i]};
        }
        out[tr.monitor_names[m]] = e;
    }
    return out;
}

inline double max_drift(const Trajectory& tr) {
    double worst = 0.0;
    for (const auto& [name, e] : drift_report(tr)) worst = std::max(worst, e.max_drift);
    return worst;
}

// ---------------------------------------------------------------------------
// Bounded Kepler orbits

/// Infimum of the energies that escape to infinity for the constant-curvature
/// Kepler Hamiltonian: lim_{r->inf} of -k C_z(r)/S_z(r); +inf on compact spaces.
inline double escape_energy(const SpaceParams& p) {
    if (p.z > 0.0) return std::numeric_limits<double>::infinity();
    return -p.k * std::sqrt(-p.z);
}

struct OrbitSearch {
    std::vector<PhaseState> orbits;
    std::size_t candidates = 0;
};

/**
 * Seeded rejection sampling of KeplerCC initial states on the PolarConstant chart.
 * A candidate is kept when its energy is below escape_energy (so r stays bounded
 * for all time), the run over [0, cfg.t_end] completes without reaching a
 * singularity, and |theta| stays below theta_box (rapidities are unbounded when
 * kappa2 < 0).  Candidates use the default polar box with momentum scale 1, 2, 3
 * in turn.  Selection never looks at conservation quality.
 */
inline OrbitSearch find_bounded_orbits(const SpaceParams& p, std::size_t count, std::uint64_t seed,
                                       const IntegratorConfig& cfg, std::size_t max_candidates = 3000,
                                       double theta_box = 5.0) {
    const Observable h = hamiltonian(HamiltonianSpec::named(Family::KeplerCC, p), Chart::PolarConstant);
    const double e_escape = escape_energy(p);
    Rng rng(seed);
    PolarBox box = default_box(p, Chart::PolarConstant);
    OrbitSearch out;
    while (out.orbits.size() < count && out.candidates < max_candidates) {
        box.momentum = 1.0 + static_cast<double>(out.candidates % 3);
        ++out.candidates;
        const PhaseState s = sample_polar(rng, Chart::PolarConstant, box);
        if (!(h(s) < e_escape)) continue;
        const Trajectory tr = integrate(h, s, cfg, {}, p);
        if (tr.status != Termination::Completed) continue;
        const bool confined = std::all_of(tr.states.begin(), tr.states.end(),
                                          [&](const PhaseState& x) { return std::abs(x.x[1]) < theta_box; });
        if (confined) out.orbits.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV export

inline std::array<std::string_view, 6> coordinate_names(Chart c) {
    if (c == Chart::Beltrami) return {"q1", "q2", "q3", "p1", "p2", "p3"};
    return {"r", "theta", "phi", "p_r", "p_theta", "p_phi"};
}

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Trajectory& tr) {
    os << "t";
    for (auto n : coordinate_names(tr.chart)) os << ',' << n;
    for (const auto& n : tr.monitor_names) os << ',' << csv_field(n);
    os << "\r\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << format_real(tr.times[i]);
        for (double v : tr.states[i].x) os << ',' << format_real(v);
        for (const auto& series : tr.invariant_series) os << ',' << format_real(series[i]);
        os << "\r\n";
    }
}

}  // namespace curvkepler
