// Command-line front end: verify, simulate, curvature, rank, export-presets.
//
// Exit codes: 0 success, 1 residual or rank failure, 2 invalid input,
// 3 trajectory stopped at a singularity (the partial CSV is still written).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvkepler/coalgebra.hpp"
#include "curvkepler/dynamics.hpp"
#include "curvkepler/geometry.hpp"
#include "curvkepler/spaces.hpp"
#include "curvkepler/symmetry.hpp"

namespace {

using namespace curvkepler;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSingular = 3;

/// Bad user input detected after parsing; maps to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamOptions {
    std::string preset;
    std::optional<double> z, kappa2, gamma, k;

    void attach(CLI::App* cmd) {
        cmd->add_option("--preset", preset, "constant-curvature space: spherical, euclidean, hyperbolic, "
                                            "antidesitter, minkowski, desitter");
        cmd->add_option("--z", z, "deformation z = kappa1 (default 0)");
        cmd->add_option("--kappa2", kappa2, "signature label kappa2 (default 1, nonzero)");
        cmd->add_option("--gamma", gamma, "coupling gamma (k = 2 sqrt(2) gamma)");
        cmd->add_option("--k", k, "coupling k (default 1)");
    }

    SpaceParams resolve() const {
        double kk = 1.0;
        if (k && gamma) {
            SpaceParams{0.0, 1.0, *gamma, *k}.validate();  // throws unless k = 2 sqrt(2) gamma
            kk = *k;
        } else if (k) {
            kk = *k;
        } else if (gamma) {
            kk = 2.0 * std::numbers::sqrt2 * *gamma;
        }
        if (!preset.empty()) {
            if (z || kappa2) throw InputError("give either --preset or --z/--kappa2, not both");
            return curvkepler::preset(preset, kk);
        }
        return SpaceParams::from_k(z.value_or(0.0), kappa2.value_or(1.0), kk);
    }
};

json to_json(const SpaceParams& p) {
    return json{{"z", p.z}, {"kappa2", p.kappa2}, {"gamma", p.gamma}, {"k", p.k}};
}

json finite_or_string(double v) { return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "nan"); }

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file '" + path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Seed from the flag or config file, else CURVKEPLER_SEED, else 1.
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("CURVKEPLER_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used != std::string_view(env).size()) throw std::invalid_argument(env);
            return v;
        } catch (const std::exception&) {
            throw InputError("CURVKEPLER_SEED must be a nonnegative integer");
        }
    }
    return 1;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
    std::string suite = "all";
    ParamOptions params;
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    CLI::Option* seed_opt = nullptr;
    double threshold = 1e-8;
    std::string perturb;
    double perturb_factor = 1.01;
    std::string output;
};

int run_verify(const VerifyOptions& o) {
    const SpaceParams p = o.params.resolve();
    if (o.samples < 1) throw InputError("--samples must be >= 1");
    if (!(o.threshold > 0.0)) throw InputError("--threshold must be positive");
    const std::uint64_t seed = resolve_seed(o.seed_opt, o.seed);
    std::optional<Perturbation> pert;
    if (!o.perturb.empty()) pert = Perturbation{o.perturb, o.perturb_factor};

    std::vector<BracketReport> reports;
    const bool all = o.suite == "all";
    if (all || o.suite == "sl2z") {
        BracketReport rep{"sl2z", {}};
        for (int sites = 1; sites <= 3; ++sites)
            rep.append(coalgebra::verify_sl2z(coalgebra::sites_realization(p.z, 0, sites), o.samples,
                                              seed + static_cast<std::uint64_t>(sites), pert));
        reports.push_back(rep);
    }
    if (all || o.suite == "casimirs") reports.push_back(coalgebra::verify_casimirs(p.z, o.samples, seed + 10, pert));
    if (all || o.suite == "so4") reports.push_back(verify_so4(p, o.samples, seed + 20, pert));
    if (all || o.suite == "lrl") reports.push_back(verify_lrl_algebra(p, o.samples, seed + 30, pert));

    double worst = 0.0;
    json suites = json::array();
    for (const auto& r : reports) {
        worst = std::max(worst, r.max_residual());
        suites.push_back(to_json(r, o.threshold));
    }
    const bool passed = worst < o.threshold;
    json j;
    j["schema"] = 1;
    j["command"] = "verify";
    j["suite"] = o.suite;
    j["params"] = to_json(p);
    j["samples"] = o.samples;
    j["seed"] = seed;
    j["threshold"] = o.threshold;
    if (pert) j["perturbation"] = json{{"target", pert->target}, {"factor", pert->factor}};
    j["max_residual"] = finite_or_string(worst);
    j["passed"] = passed;
    j["suites"] = std::move(suites);
    emit(o.output, dump(j));
    return passed ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::string family = "kepler-cc";
    ParamOptions params;
    std::string chart;
    std::vector<double> state;
    bool stay_in_chart = false;
    double t_end = 20.0;
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    int stride = 1;
    std::string method = "dopri5";
    double dt = 0.0;
    std::vector<std::string> monitors;
    std::string output;
    std::string summary;
};

Observable coordinate_monitor(Chart chart, std::string_view name) {
    const auto names = coordinate_names(chart);
    for (int i = 0; i < 6; ++i)
        if (names[static_cast<std::size_t>(i)] == name) return Observable::coordinate(i, chart, std::string(name));
    throw InputError("unknown monitor '" + std::string(name) + "'");
}

int run_simulate(const SimulateOptions& o) {
    const SpaceParams p = o.params.resolve();
    const Family fam = parse_family(o.family);
    if (fam == Family::Custom) throw InputError("custom Hamiltonians are only available through the library");
    const HamiltonianSpec spec = HamiltonianSpec::named(fam, p);
    if (o.state.size() != 6) throw InputError("--state needs six comma-separated numbers");

    const Chart given = o.chart.empty() ? native_polar_chart(fam) : parse_chart(o.chart);
    PhaseState s0{given, {}};
    std::copy(o.state.begin(), o.state.end(), s0.x.begin());
    if (given == Chart::Beltrami && !o.stay_in_chart) s0 = to_polar(s0, p, native_polar_chart(fam));
    if (!chart_allowed(fam, s0.chart))
        throw InputError("family " + o.family + " is not defined on chart " + std::string(to_string(s0.chart)));

    IntegratorConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = o.abs_tol;
    cfg.max_step = o.max_step;
    cfg.t_end = o.t_end;
    cfg.sample_stride = o.stride;
    cfg.method = parse_method(o.method);
    cfg.fixed_step = o.dt;
    cfg.validate();

    const Observable h = hamiltonian(spec, s0.chart).renamed("H");
    std::vector<Observable> all = constants(spec, s0.chart);
    all.insert(all.begin(), h);
    std::vector<Observable> monitors;
    if (o.monitors.empty()) {
        monitors = all;
    } else if (!(o.monitors.size() == 1 && o.monitors[0] == "none")) {
        for (const auto& name : o.monitors) {
            const auto it = std::find_if(all.begin(), all.end(), [&](const Observable& m) { return m.name() == name; });
            monitors.push_back(it != all.end() ? *it : coordinate_monitor(s0.chart, name));
        }
    }

    const SingularityGuard guard = s0.chart == Chart::Beltrami ? SingularityGuard{} : chart_guard(p);
    if (s0.chart != Chart::Beltrami && !(chart_margin(s0, p) > cfg.singularity_eps))
        throw InputError("initial state lies on a chart degeneracy");
    const Trajectory tr = integrate(h, s0, cfg, monitors, guard);

    std::ostringstream csv;
    write_csv(csv, tr);
    emit(o.output, csv.str());

    json drift = json::object();
    if (!tr.times.empty())
        for (const auto& [name, e] : drift_report(tr))
            drift[name] = json{{"max_drift", finite_or_string(e.max_drift)}, {"time", e.time_of_worst}};
    json j;
    j["schema"] = 1;
    j["command"] = "simulate";
    j["family"] = o.family;
    j["params"] = to_json(p);
    j["chart"] = std::string(to_string(tr.chart));
    j["initial_state"] = s0.x;
    j["method"] = std::string(to_string(cfg.method));
    j["t_end"] = cfg.t_end;
    j["status"] = std::string(to_string(tr.status));
    if (!tr.reason.empty()) j["reason"] = tr.reason;
    j["t_final"] = tr.times.back();
    j["samples"] = tr.times.size();
    j["accepted_steps"] = tr.accepted_steps;
    j["rejected_steps"] = tr.rejected_steps;
    j["drift"] = std::move(drift);
    // the summary shares stdout only when the CSV went to a file
    if (!o.summary.empty())
        emit(o.summary, dump(j));
    else if (!o.output.empty() && o.output != "-")
        emit("", dump(j));
    else
        std::cerr << "status: " << to_string(tr.status) << (tr.reason.empty() ? "" : " (" + tr.reason + ")") << "\n";

    switch (tr.status) {
        case Termination::Completed: return kExitOk;
        case Termination::Singularity:
        case Termination::StepUnderflow: return kExitSingular;
        case Termination::StepLimit: return kExitFailure;
    }
    return kExitFailure;
}

// ---------------------------------------------------------------------------
// curvature

struct CurvatureOptions {
    std::string kind = "cc";
    std::string chart = "beltrami";
    ParamOptions params;
    std::vector<double> lo, hi;
    int n = 5;
    double step = kCurvatureStep;
    std::string output;
};

Vec3 default_corner(Chart chart, bool upper) {
    if (chart == Chart::Beltrami) return upper ? Vec3{0.9, 0.9, 0.9} : Vec3{0.3, 0.3, 0.3};
    return upper ? Vec3{1.0, 1.2, 1.0} : Vec3{0.3, 0.4, 0.1};
}

int run_curvature(const CurvatureOptions& o) {
    const SpaceParams p = o.params.resolve();
    const Geometry kind = parse_geometry(o.kind);
    const Chart chart = parse_chart(o.chart);
    if (o.n < 1) throw InputError("--n must be >= 1");
    if (!(o.step > 0.0)) throw InputError("--step must be positive");
    const auto corner = [&](const std::vector<double>& v, bool upper) {
        if (v.empty()) return default_corner(chart, upper);
        if (v.size() != 3) throw InputError("grid corners need three comma-separated numbers");
        return Vec3{v[0], v[1], v[2]};
    };
    const Vec3 lo = corner(o.lo, false), hi = corner(o.hi, true);

    std::ostringstream csv;
    csv << "point,x1,x2,x3,K12,K13,K23,K,K12_closed,K13_closed,K23_closed,K_closed\r\n";
    std::array<double, 4> worst{};
    bool any_closed = false;
    int index = 0;
    for (int i = 0; i < o.n; ++i)
        for (int j = 0; j < o.n; ++j)
            for (int l = 0; l < o.n; ++l) {
                const auto at = [&](int a, int m) {
                    const auto ua = static_cast<std::size_t>(a);
                    return o.n == 1 ? lo[ua] : lo[ua] + (hi[ua] - lo[ua]) * m / (o.n - 1);
                };
                const Vec3 x{at(0, i), at(1, j), at(2, l)};
                CurvatureResult res;
                try {
                    res = curvature(chart, kind, x, p, o.step);
                } catch (const DomainError& e) {
                    throw InputError(std::string("grid touches a singularity: ") + e.what());
                }
                const std::array<double, 4> num{res.numeric.k12, res.numeric.k13, res.numeric.k23,
                                                res.numeric.scalar};
                csv << index++ << ',' << format_real(x[0]) << ',' << format_real(x[1]) << ',' << format_real(x[2]);
                for (double v : num) csv << ',' << format_real(v);
                if (res.closed_form) {
                    any_closed = true;
                    const std::array<double, 4> cf{res.closed_form->k12, res.closed_form->k13,
                                                   res.closed_form->k23, res.closed_form->scalar};
                    for (std::size_t c = 0; c < 4; ++c) {
                        csv << ',' << format_real(cf[c]);
                        worst[c] = std::max(worst[c], std::abs(num[c] - cf[c]));
                    }
                } else {
                    csv << ",,,,";
                }
                csv << "\r\n";
            }
    csv << "max_abs_diff,,,";
    for (double w : worst) csv << ',' << (any_closed ? format_real(w) : "");
    csv << ",,,,\r\n";
    emit(o.output, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// rank

struct RankOptions {
    std::string family = "kepler-cc";
    ParamOptions params;
    std::string chart;
    std::vector<std::string> append;
    std::vector<std::string> observables;
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    CLI::Option* seed_opt = nullptr;
    double threshold = 1e-8;
    std::string output;
};

int run_rank(const RankOptions& o) {
    const SpaceParams p = o.params.resolve();
    const Family fam = parse_family(o.family);
    if (fam == Family::Custom) throw InputError("custom Hamiltonians are only available through the library");
    if (o.samples < 1) throw InputError("--samples must be >= 1");
    const HamiltonianSpec spec = HamiltonianSpec::named(fam, p);
    const Chart chart = o.chart.empty() ? native_polar_chart(fam) : parse_chart(o.chart);
    if (chart == Chart::Beltrami && !(p.kappa2 > 0.0)) throw InputError("the Beltrami chart needs kappa2 > 0");
    const std::uint64_t seed = resolve_seed(o.seed_opt, o.seed);

    std::vector<Observable> pool = constants(spec, chart);
    pool.insert(pool.begin(), hamiltonian(spec, chart).renamed("H"));
    const auto lookup = [&](const std::string& name) {
        try {
            return find(pool, name);
        } catch (const std::invalid_argument&) {
            throw InputError("observable '" + name + "' is not available for family " + o.family);
        }
    };
    std::vector<std::string> names = o.observables;
    int expected = 0;
    if (names.empty()) {
        names = {"C2", "C2mid", "C3", "H"};
        names.insert(names.end(), o.append.begin(), o.append.end());
        expected = o.append.empty() ? 4 : 5;
    } else {
        if (!o.append.empty()) throw InputError("--append and --observables are exclusive");
        expected = static_cast<int>(names.size());
    }
    std::vector<Observable> obs;
    for (const auto& n : names) obs.push_back(lookup(n));

    const StateSampler sampler = chart == Chart::Beltrami ? beltrami_sampler() : polar_sampler(p, chart);
    Rng rng(seed);
    std::map<int, std::size_t> histogram;
    for (std::size_t i = 0; i < o.samples; ++i) ++histogram[independence_rank(obs, sampler(rng), o.threshold)];
    int modal = 0;
    std::size_t best = 0;
    for (const auto& [rank, count] : histogram)
        if (count > best) modal = rank, best = count;

    json hist = json::object();
    for (const auto& [rank, count] : histogram) hist[std::to_string(rank)] = count;
    json j;
    j["schema"] = 1;
    j["command"] = "rank";
    j["family"] = o.family;
    j["params"] = to_json(p);
    j["chart"] = std::string(to_string(chart));
    j["observables"] = names;
    j["samples"] = o.samples;
    j["seed"] = seed;
    j["threshold"] = o.threshold;
    j["expected_rank"] = expected;
    j["observed_ranks"] = std::move(hist);
    j["modal_rank"] = modal;
    j["rank_deficient"] = modal < static_cast<int>(names.size());
    j["passed"] = modal == expected;
    emit(o.output, dump(j));
    return modal == expected ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// export-presets

int run_export(double k, const std::string& output) {
    json list = json::array();
    for (const auto& pr : kPresets) {
        const SpaceParams p = preset(pr.name, k);
        json e;
        e["name"] = std::string(pr.name);
        e["kappa1"] = pr.kappa1;
        e["kappa2"] = pr.kappa2;
        e["params"] = to_json(p);
        list.push_back(std::move(e));
    }
    json j;
    j["schema"] = 1;
    j["command"] = "export-presets";
    j["presets"] = std::move(list);
    emit(output, dump(j));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superintegrable free and Kepler systems on curved 3D spaces"};
    app.set_config("--config", "", "flat key = value file; [subcommand] sections, flags override it");
    app.require_subcommand(1);

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "randomized check of a bracket-identity suite");
    verify->add_option("--suite", vo.suite)->check(CLI::IsMember({"sl2z", "casimirs", "so4", "lrl", "all"}));
    vo.params.attach(verify);
    verify->add_option("--samples", vo.samples);
    vo.seed_opt = verify->add_option("--seed", vo.seed, "falls back to CURVKEPLER_SEED, then 1");
    verify->add_option("--threshold", vo.threshold);
    verify->add_option("--perturb", vo.perturb, "scale the named generator (negative control)");
    verify->add_option("--perturb-factor", vo.perturb_factor);
    verify->add_option("--output,-o", vo.output, "JSON report path (default stdout)");

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "integrate a trajectory and export it as CSV");
    simulate->add_option("--family", so.family);
    so.params.attach(simulate);
    simulate->add_option("--chart", so.chart, "chart of --state: beltrami, polar-variable, polar-constant");
    simulate->add_option("--state", so.state, "six comma-separated coordinates")->delimiter(',')->required();
    simulate->add_flag("--stay-in-chart", so.stay_in_chart, "integrate a Beltrami state without converting it");
    simulate->add_option("--t-end", so.t_end);
    simulate->add_option("--rtol", so.rel_tol);
    simulate->add_option("--atol", so.abs_tol);
    simulate->add_option("--max-step", so.max_step);
    simulate->add_option("--stride", so.stride, "record every n-th accepted step");
    simulate->add_option("--method", so.method)->check(CLI::IsMember({"dopri5", "implicit-midpoint"}));
    simulate->add_option("--dt", so.dt, "fixed step (implicit midpoint, or unadapted dopri5)");
    simulate->add_option("--monitors", so.monitors, "comma-separated names, or none")->delimiter(',');
    simulate->add_option("--output,-o", so.output, "CSV path (default stdout)");
    simulate->add_option("--summary", so.summary, "JSON summary path");

    CurvatureOptions co;
    auto* curv = app.add_subcommand("curvature", "numerical sectional and scalar curvature on a grid");
    curv->add_option("--kind", co.kind)->check(CLI::IsMember({"nc", "cc"}));
    curv->add_option("--chart", co.chart)->check(CLI::IsMember({"beltrami", "polar-variable", "polar-constant"}));
    co.params.attach(curv);
    curv->add_option("--lo", co.lo, "lower grid corner x1,x2,x3")->delimiter(',');
    curv->add_option("--hi", co.hi, "upper grid corner x1,x2,x3")->delimiter(',');
    curv->add_option("--n", co.n, "points per axis");
    curv->add_option("--step", co.step, "finite-difference step");
    curv->add_option("--output,-o", co.output, "CSV path (default stdout)");

    RankOptions ro;
    auto* rank = app.add_subcommand("rank", "Jacobian rank histogram of a set of constants");
    rank->add_option("--family", ro.family);
    ro.params.attach(rank);
    rank->add_option("--chart", ro.chart);
    rank->add_option("--append", ro.append, "extra constants after C2,C2mid,C3,H (L1, L2, L3, I2)")->delimiter(',');
    rank->add_option("--observables", ro.observables, "explicit observable list")->delimiter(',');
    rank->add_option("--samples", ro.samples);
    ro.seed_opt = rank->add_option("--seed", ro.seed, "falls back to CURVKEPLER_SEED, then 1");
    rank->add_option("--threshold", ro.threshold, "relative singular-value threshold");
    rank->add_option("--output,-o", ro.output, "JSON path (default stdout)");

    double export_k = 1.0;
    std::string export_out;
    auto* exp = app.add_subcommand("export-presets", "write the six constant-curvature presets as JSON");
    exp->add_option("--k", export_k);
    exp->add_option("--output,-o", export_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*verify) return run_verify(vo);
        if (*simulate) return run_simulate(so);
        if (*curv) return run_curvature(co);
        if (*rank) return run_rank(ro);
        if (*exp) return run_export(export_k, export_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
