// pathsub command-line front end.
//
//   pathsub cantor | split-verify | increase | periodic | sgd
//           [--config file.json] [--out dir] [subcommand flags]
//
// Parameters come from built-in defaults, then the JSON config, then inline
// flags. Rationals are written "p/q". PATHSUB_DEPTH overrides the default
// resolution depth. Every run writes <command>_report.json (schema 1) and
// prints it; exit status is 0 when every check is Verified, 1 when any is
// Violated, 2 when some are Undecided and none Violated, 3 on a rejected
// configuration and 4 on I/O failure.
#pragma once

#include "pathsub/pathsub.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pathsub::cli {

enum ExitCode : int { kExitVerified = 0, kExitViolated = 1, kExitUndecided = 2, kExitConfig = 3, kExitIo = 4 };

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& field, const std::string& why)
        : std::runtime_error("field '" + field + "': " + why), field(field)
    {
    }
    std::string field;
};

enum class ParamKind { Rational, Decimal, Integer, Point4 };

struct ParamSpec {
    std::string name;
    ParamKind kind;
    std::string fallback; // textual default; empty means "no default"
    std::string help;
};

/// Resolved textual parameters of one invocation with typed accessors.
class RunConfig {
public:
    RunConfig(std::string command, std::vector<ParamSpec> specs) : command_(std::move(command)), specs_(std::move(specs))
    {
    }

    const std::string& command() const { return command_; }
    const std::vector<ParamSpec>& specs() const { return specs_; }
    std::map<std::string, std::string>& values() { return values_; }
    const std::map<std::string, std::string>& values() const { return values_; }

    const std::string& text(const std::string& name) const
    {
        auto it = values_.find(name);
        if (it == values_.end() || it->second.empty()) throw ConfigError(name, "missing value");
        return it->second;
    }

    ExactScalar rational(const std::string& name) const
    {
        try {
            return parse_rational(text(name));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(name, e.what());
        }
    }

    double decimal(const std::string& name) const
    {
        const std::string& s = text(name);
        try {
            if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(name, "expected a finite number, got \"" + s + "\"");
        }
    }

    std::uint64_t integer(const std::string& name) const
    {
        const std::string& s = text(name);
        try {
            std::size_t used = 0;
            if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
            const auto v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(name, "expected a nonnegative integer, got \"" + s + "\"");
        }
    }

    Point4 point4(const std::string& name) const
    {
        const std::string& s = text(name);
        Point4 p{};
        std::stringstream ss(s);
        std::string item;
        std::size_t i = 0;
        while (std::getline(ss, item, ',')) {
            if (i == 4) throw ConfigError(name, "expected four comma-separated numbers");
            try {
                std::size_t used = 0;
                p[i] = std::stod(item, &used);
                if (used != item.size() || !std::isfinite(p[i])) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ConfigError(name, "bad coordinate \"" + item + "\"");
            }
            ++i;
        }
        if (i != 4) throw ConfigError(name, "expected four comma-separated numbers");
        return p;
    }

    /// Echo of the resolved parameters for the report.
    nlohmann::json to_json() const
    {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : values_)
            if (k != "out" && k != "config") j[k] = v;
        return j;
    }

private:
    std::string command_;
    std::vector<ParamSpec> specs_;
    std::map<std::string, std::string> values_;
};

/// Overlays a JSON config onto `cfg`; unknown keys and bad types are rejected.
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& doc)
{
    if (!doc.is_object()) throw ConfigError("config", "top level must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "schema") {
            if (value != 1) throw ConfigError("schema", "unsupported config schema");
            continue;
        }
        if (key == "command") {
            if (value != cfg.command()) throw ConfigError("command", "config is for a different subcommand");
            continue;
        }
        auto spec = std::find_if(cfg.specs().begin(), cfg.specs().end(), [&](const ParamSpec& s) { return s.name == key; });
        if (spec == cfg.specs().end()) throw ConfigError(key, "unknown parameter for '" + cfg.command() + "'");
        if (value.is_string()) {
            cfg.values()[key] = value.get<std::string>();
        } else if (value.is_number_integer() || value.is_number_unsigned()) {
            cfg.values()[key] = value.dump();
        } else if (value.is_number_float()) {
            if (spec->kind == ParamKind::Rational || spec->kind == ParamKind::Integer)
                throw ConfigError(key, "write exact values as \"p/q\" strings or integers");
            cfg.values()[key] = format_double(value.get<double>());
        } else if (value.is_array() && spec->kind == ParamKind::Point4) {
            std::string joined;
            for (const auto& c : value) {
                if (!c.is_number()) throw ConfigError(key, "coordinates must be numbers");
                if (!joined.empty()) joined += ',';
                joined += format_double(c.get<double>());
            }
            cfg.values()[key] = joined;
        } else {
            throw ConfigError(key, "unsupported JSON type");
        }
    }
}

// ---------------------------------------------------------------------------
// Reports

class Report {
public:
    explicit Report(const RunConfig& cfg)
    {
        doc_["schema"] = 1;
        doc_["command"] = cfg.command();
        doc_["parameters"] = cfg.to_json();
        doc_["checks"] = nlohmann::json::array();
    }

    nlohmann::json& root() { return doc_; }

    void check(const std::string& name, const Verdict& v, nlohmann::json extra = nlohmann::json::object())
    {
        extra["name"] = name;
        extra["verdict"] = std::string(to_string(v.kind));
        if (v.index) extra["first_index"] = *v.index;
        if (!v.detail.empty()) extra["detail"] = v.detail;
        doc_["checks"].push_back(std::move(extra));
        if (v.kind == VerdictKind::Violated && worst_ != VerdictKind::Violated) {
            worst_ = VerdictKind::Violated;
            first_violation_ = name + (v.detail.empty() ? "" : ": " + v.detail) +
                               (v.index ? " (index " + std::to_string(*v.index) + ")" : "");
        } else if (v.kind == VerdictKind::Undecided && worst_ == VerdictKind::Verified) {
            worst_ = VerdictKind::Undecided;
        }
    }

    VerdictKind status() const { return worst_; }
    const std::string& first_violation() const { return first_violation_; }

    nlohmann::json finish()
    {
        doc_["status"] = std::string(to_string(worst_));
        return doc_;
    }

private:
    nlohmann::json doc_;
    VerdictKind worst_ = VerdictKind::Verified;
    std::string first_violation_;
};

/// Summary of a verdict sequence as one report entry.
inline std::pair<Verdict, nlohmann::json> summarize(const std::vector<Verdict>& vs)
{
    std::size_t verified = 0, violated = 0, undecided = 0;
    std::optional<std::size_t> first_bad;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        switch (vs[i].kind) {
        case VerdictKind::Verified: ++verified; break;
        case VerdictKind::Violated: ++violated; break;
        case VerdictKind::Undecided: ++undecided; break;
        }
        if (!vs[i].is_verified() && !first_bad) first_bad = i;
    }
    Verdict v = Verdict::verified();
    if (violated) v = Verdict::violated(first_bad);
    else if (undecided) v = Verdict::undecided(0, first_bad);
    return {v, {{"points", vs.size()}, {"verified", verified}, {"violated", violated}, {"undecided", undecided}}};
}

inline nlohmann::json bounds_json(const MeasureBounds& b)
{
    return {{"lower", to_string(b.lower)},
            {"upper", to_string(b.upper)},
            {"width", to_string(ExactScalar(b.width()))},
            {"lower_approx", b.lower.get_d()},
            {"upper_approx", b.upper.get_d()}};
}

inline std::vector<ExactScalar> dyadic_grid(std::uint64_t den, const ExactScalar& t_max)
{
    std::vector<ExactScalar> grid;
    const mpz_class count = floor_z(t_max * ExactScalar(static_cast<unsigned long>(den)));
    for (mpz_class k = 1; k <= count; ++k) grid.emplace_back(k, mpz_class(static_cast<unsigned long>(den)));
    for (auto& g : grid) g.canonicalize();
    return grid;
}

// ---------------------------------------------------------------------------
// Subcommands

struct Context {
    const RunConfig& cfg;
    std::filesystem::path out_dir;
    Report& report;
};

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw std::ios_base::failure("failed writing " + path.string());
}

inline unsigned depth_param(const RunConfig& cfg)
{
    const auto d = cfg.integer("depth");
    if (d > 60) throw ConfigError("depth", "must be at most 60");
    return static_cast<unsigned>(d);
}

inline std::shared_ptr<const SplittingSet> build_set_from(const RunConfig& cfg)
{
    const auto lambda = cfg.rational("lambda");
    const auto alpha = cfg.rational("alpha");
    const auto theta = cfg.rational("theta");
    try {
        validate_splitting_parameters(lambda, alpha, theta);
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const std::string field = msg.rfind("lambda", 0) == 0 ? "lambda" : msg.rfind("theta", 0) == 0 ? "theta" : "alpha";
        throw ConfigError(field, msg);
    }
    return std::make_shared<const SplittingSet>(
        build_splitting_set(lambda, alpha, theta, cfg.integer("placements"), depth_param(cfg)));
}

inline void cmd_cantor(Context& ctx)
{
    const auto& cfg = ctx.cfg;
    const auto alpha = cfg.rational("alpha");
    const auto lambda = cfg.rational("lambda");
    const unsigned depth = depth_param(cfg);
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha", "must lie in (0, 1)");
    if (!(lambda > rational(1, 2) && lambda < 1)) throw ConfigError("lambda", "must lie in (1/2, 1)");
    if (!(alpha > 3 * lambda / (2 + lambda)))
        throw ConfigError("alpha", "must exceed 3 lambda / (2 + lambda) = " +
                                       to_string(ExactScalar(3 * lambda / (2 + lambda))));
    const auto lo = cfg.rational("base-lo");
    const auto hi = cfg.rational("base-hi");
    if (!(lo < hi)) throw ConfigError("base-hi", "must exceed base-lo");
    const FatCantorSet F(Interval(lo, hi), alpha);

    nlohmann::json brackets = nlohmann::json::array();
    for (unsigned d = 0; d <= depth; ++d) {
        auto b = bounds_json(fat_cantor_measure(F, d));
        b["depth"] = d;
        brackets.push_back(std::move(b));
    }
    ctx.report.root()["measure_brackets"] = std::move(brackets);
    const MeasureBounds total = fat_cantor_measure(F, depth);
    ctx.report.check("measure_lower_exact", total.lower == alpha * F.base().length() ? Verdict::verified()
                                                                                    : Verdict::violated(),
                     {{"bracket", bounds_json(total)}});

    const auto den = cfg.integer("grid-den");
    if (den == 0) throw ConfigError("grid-den", "must be positive");
    std::vector<ExactScalar> grid;
    for (const auto& x : dyadic_grid(den, 1)) grid.push_back(lo + x * F.base().length());
    auto [v, extra] = summarize(check_fat_cantor_density(F, grid, depth, lambda));
    ctx.report.check("density_lower_bound", v, std::move(extra));
}

inline void cmd_split_verify(Context& ctx)
{
    const auto& cfg = ctx.cfg;
    const unsigned depth = depth_param(cfg);
    const auto A = build_set_from(cfg);
    const SplittingMeasure measure(A, depth);
    ctx.report.root()["placements"] = A->placements().size();
    ctx.report.root()["period_measure"] = bounds_json(measure.period_measure());

    ctx.report.check("cantor_sets_disjoint",
                     cantor_sets_disjoint(*A, A->depth()) ? Verdict::verified() : Verdict::violated());

    const auto den = cfg.integer("grid-den");
    if (den == 0) throw ConfigError("grid-den", "must be positive");
    const auto grid = dyadic_grid(den, cfg.rational("grid-max"));
    auto [cv, cextra] = summarize(check_controlled_split(*A, grid, depth));
    ctx.report.check("controlled_split", cv, std::move(cextra));

    const auto n_intervals = cfg.integer("intervals");
    const auto budget = cfg.integer("budget") == 0 ? A->placements().size() : cfg.integer("budget");
    std::vector<Verdict> verdicts;
    std::optional<ExactScalar> min_in, min_out;
    for (std::uint64_t n = 1; n <= n_intervals; ++n) {
        const auto r = check_splits_intervals(*A, rational_interval_enumeration(n), depth, budget);
        if (!min_in || r.inside_lower < *min_in) min_in = r.inside_lower;
        if (!min_out || r.outside_lower < *min_out) min_out = r.outside_lower;
        Verdict v = r.verdict;
        v.index = n;
        verdicts.push_back(v);
    }
    auto [sv, sextra] = summarize(verdicts);
    if (min_in) {
        sextra["min_inside_lower"] = min_in->get_d();
        sextra["min_outside_lower"] = min_out->get_d();
    }
    ctx.report.check("splits_intervals", sv, std::move(sextra));

    if (cfg.integer("emit-set") != 0) write_file(ctx.out_dir / "splitting_set.json", dump_splitting_set(*A));
}

inline void cmd_increase(Context& ctx)
{
    const auto& cfg = ctx.cfg;
    const unsigned depth = depth_param(cfg);
    const auto A = build_set_from(cfg);
    const double rate = cfg.decimal("rate-alpha");
    if (!(rate > 0)) throw ConfigError("rate-alpha", "must be positive");
    const IncreasingOrbitFn fn(std::make_shared<const SplittingMeasure>(A, depth), rate);
    ctx.report.root()["mu"] = fn.mu();
    ctx.report.root()["slope_bound"] = fn.slope_bound();

    const auto den = cfg.integer("grid-den");
    if (den == 0) throw ConfigError("grid-den", "must be positive");
    std::vector<double> grid;
    for (const auto& g : dyadic_grid(den, cfg.rational("grid-max"))) grid.push_back(g.get_d());

    const auto samples = verify_increase(fn, grid, depth);
    std::ostringstream csv;
    csv << "t,x,y,f_lower,f_upper,increase_lower,rate_bound\n";
    std::vector<Verdict> verdicts, members;
    double min_margin = HUGE_VAL;
    for (const auto& s : samples) {
        csv << format_double(s.t) << ',' << format_double(s.point[0]) << ',' << format_double(s.point[1]) << ','
            << format_double(s.value.lower) << ',' << format_double(s.value.upper) << ','
            << format_double(s.increase_lower) << ',' << format_double(rate * s.t) << '\n';
        verdicts.push_back(s.verdict);
        members.push_back(increasing_orbit_member(fn, s.t) ? Verdict::verified() : Verdict::violated());
        min_margin = std::min(min_margin, s.increase_lower - rate * s.t);
    }
    write_file(ctx.out_dir / "increase.csv", csv.str());

    ctx.report.check("slope_bound_covers_rate",
                     fn.slope_bound() >= rate - kFloatSlack ? Verdict::verified() : Verdict::violated());
    auto [mv, mextra] = summarize(members);
    ctx.report.check("orbit_membership", mv, std::move(mextra));
    auto [iv, iextra] = summarize(verdicts);
    if (!samples.empty()) iextra["min_margin"] = min_margin;
    ctx.report.check("linear_increase", iv, std::move(iextra));
    ctx.report.check("origin_noncritical", subdifferential(fn, {0, 0}).contains_zero()
                                               ? Verdict::violated(std::nullopt, "0 in subdifferential")
                                               : Verdict::verified());
}

inline void cmd_periodic(Context& ctx)
{
    const auto& cfg = ctx.cfg;
    const double M = cfg.decimal("M");
    const double b = cfg.decimal("b");
    if (!(M > 0)) throw ConfigError("M", "must be positive");
    if (!(b > 0 && b < M / 2)) throw ConfigError("b", "must lie in (0, M/2)");
    const auto n_samples = cfg.integer("samples");
    if (n_samples == 0) throw ConfigError("samples", "must be positive");
    const SaturatedPeriodicFn Phi(nullptr, M, b);
    const PeriodicPairFn f(Phi);

    const double r = cfg.values().count("r") && !cfg.values().at("r").empty() ? cfg.decimal("r") : b / 2;
    if (!(r >= 0 && r < b)) throw ConfigError("r", "must lie in [0, b)");
    const CircularOrbit orbit(Phi, r, cfg.decimal("phase"));

    const auto traj = sample_periodic_orbit(f, n_samples);
    std::vector<double> times;
    for (std::size_t k = 0; k < traj.size(); ++k) times.push_back(2 * std::numbers::pi * k / n_samples);

    double worst2 = 0, worst4 = 0;
    std::optional<std::size_t> bad2, bad4;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto res = residual_membership(Phi, orbit, times[k]);
        worst2 = std::max(worst2, res.first);
        if (!res.verdict.is_verified() && !bad2) bad2 = k;
        const double r4 = residual_membership_4d(f, times[k]);
        worst4 = std::max(worst4, r4);
        if (!(r4 <= kStepTolerance) && !bad4) bad4 = k;
    }
    ctx.report.check("planar_orbit_membership", bad2 ? Verdict::violated(bad2) : Verdict::verified(),
                     {{"max_residual", worst2}});
    ctx.report.check("orbit_membership", bad4 ? Verdict::violated(bad4) : Verdict::verified(),
                     {{"max_residual", worst4 == HUGE_VAL ? -1.0 : worst4}});
    const auto nc = certify_noncritical(f, times);
    ctx.report.check("avoids_critical_set", nc.verdict,
                     {{"min_dist", nc.min_dist}, {"max_deviation", nc.max_deviation}, {"target", b / 2}});
    const double rk = reference_orbit_deviation(orbit, 2 * std::numbers::pi, 1e-3);
    ctx.report.check("reference_integrator", rk <= 1e-9 ? Verdict::verified() : Verdict::violated(),
                     {{"max_deviation", rk}});

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_file(ctx.out_dir / "periodic.csv", csv.str());
    std::ostringstream svg;
    write_orbit_svg(svg, traj, b);
    write_file(ctx.out_dir / "periodic.svg", svg.str());
}

inline void cmd_sgd(Context& ctx)
{
    const auto& cfg = ctx.cfg;
    const double delta = cfg.decimal("delta");
    if (!(delta > 0)) throw ConfigError("delta", "must be positive");
    const double M = cfg.values().count("M") && !cfg.values().at("M").empty() ? cfg.decimal("M") : DampedFn::min_M(delta);
    if (!(M >= DampedFn::min_M(delta) * (1 - 1e-15))) throw ConfigError("M", "must be at least (delta/2)(sqrt(pi)+1)");
    const double c = cfg.decimal("c");
    if (!(c > 0)) throw ConfigError("c", "must be positive");
    const auto steps = cfg.integer("steps");
    if (steps < 2) throw ConfigError("steps", "must be at least 2");
    const auto stride = cfg.integer("stride");
    if (stride == 0) throw ConfigError("stride", "must be positive");
    auto window = cfg.integer("window");
    if (window == 0 || window > steps) throw ConfigError("window", "must lie in [1, steps]");
    const Point4 x0 = cfg.point4("x0");

    const DampedPairFn f(DampedFn(nullptr, delta, M));
    const auto schedule = StepSchedule::harmonic(c, steps);
    const auto traj = sgd_run(f, x0, schedule);
    const auto sums = step_sums(schedule, steps);

    ctx.report.check("radius_recursion", radius_recursion_check(traj, kRunTolerance));
    ctx.report.check("rotation_symmetry", rotation_symmetry_check(traj, kRunTolerance));
    const double r0 = traj.r1.front();
    ctx.report.check("radius_cap", radius_cap_check(traj, delta, sums.sum_sq, kRunTolerance),
                     {{"cap_squared", r0 * r0 + delta * delta / (2 * std::numbers::e) * sums.sum_sq},
                      {"final_r1", traj.r1.back()},
                      {"final_r2", traj.r2.back()}});
    ctx.report.check("distance_floor", distance_floor_check(traj, traj.r1.front(), kRunTolerance));

    const auto acc = accumulation_report(traj, window);
    ctx.report.root()["accumulation"] = {{"window", window},
                                         {"min_dist", acc.min_dist},
                                         {"max_dist", acc.max_dist},
                                         {"r_inf", acc.r_inf},
                                         {"dist_floor", acc.dist_floor}};

    std::ostringstream csv;
    write_trajectory_csv(csv, traj, stride);
    write_file(ctx.out_dir / "sgd.csv", csv.str());
}

// ---------------------------------------------------------------------------
// Dispatch

inline std::string default_depth()
{
    if (const char* env = std::getenv("PATHSUB_DEPTH"); env && *env) return env;
    return "20";
}

inline std::vector<ParamSpec> set_params()
{
    return {{"lambda", ParamKind::Rational, "3/5", "controlled-split rate lambda in (1/2,1)"},
            {"alpha", ParamKind::Rational, "3/4", "fat Cantor fraction of kept sets"},
            {"theta", ParamKind::Rational, "9/10", "kept share of each host interval"},
            {"placements", ParamKind::Integer, "200", "number of enumerated placements"},
            {"depth", ParamKind::Integer, default_depth(), "Cantor tree resolution depth"}};
}

struct Subcommand {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;
    std::function<void(Context&)> run;
};

inline std::vector<Subcommand> subcommands()
{
    auto with_set = [](std::vector<ParamSpec> extra) {
        auto p = set_params();
        p.insert(p.end(), extra.begin(), extra.end());
        return p;
    };
    return {
        {"cantor",
         "Fat Cantor set measure brackets and the density lower bound",
         {{"alpha", ParamKind::Rational, "3/4", "fat Cantor fraction"},
          {"lambda", ParamKind::Rational, "3/5", "density rate to certify"},
          {"depth", ParamKind::Integer, default_depth(), "tree resolution depth"},
          {"base-lo", ParamKind::Rational, "0", "left end of the base interval"},
          {"base-hi", ParamKind::Rational, "1", "right end of the base interval"},
          {"grid-den", ParamKind::Integer, "1024", "grid points a + k m(base)/den"}},
         cmd_cantor},
        {"split-verify",
         "Build the controlled splitting set and certify its properties",
         with_set({{"grid-den", ParamKind::Integer, "1024", "controlled-split grid k/den"},
                   {"grid-max", ParamKind::Rational, "10", "largest grid point"},
                   {"intervals", ParamKind::Integer, "200", "enumerated intervals to split"},
                   {"budget", ParamKind::Integer, "0", "placement budget (0: use the built set)"},
                   {"emit-set", ParamKind::Integer, "0", "1 writes splitting_set.json"}}),
         cmd_split_verify},
        {"increase",
         "Linear increase of f along the orbit (t, mu t)",
         with_set({{"rate-alpha", ParamKind::Decimal, "1", "increase rate"},
                   {"grid-den", ParamKind::Integer, "64", "time grid k/den"},
                   {"grid-max", ParamKind::Rational, "10", "horizon"}}),
         cmd_increase},
        {"periodic",
         "Periodic orbit of Phi + Phi avoiding the critical set; CSV and SVG",
         {{"M", ParamKind::Decimal, "2.5", "saturation level M"},
          {"b", ParamKind::Decimal, "1", "box radius b < M/2"},
          {"r", ParamKind::Decimal, "", "planar orbit radius (default b/2)"},
          {"phase", ParamKind::Decimal, "0", "planar orbit phase"},
          {"samples", ParamKind::Integer, "10000", "samples over one period"}},
         cmd_periodic},
        {"sgd",
         "Subgradient method on phi + phi from (1,0,0,1) with t_n = c/n",
         {{"delta", ParamKind::Decimal, "1", "damping amplitude delta"},
          {"M", ParamKind::Decimal, "", "saturation level (default (delta/2)(sqrt(pi)+1))"},
          {"c", ParamKind::Decimal, "1", "step scale"},
          {"steps", ParamKind::Integer, "1000000", "number of iterates"},
          {"x0", ParamKind::Point4, "1,0,0,1", "initial point"},
          {"stride", ParamKind::Integer, "1000", "CSV row stride"},
          {"window", ParamKind::Integer, "1000", "trailing window for the accumulation report"}},
         cmd_sgd},
    };
}

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Pathological subgradient dynamics: constructions and certificates", "pathsub"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory");

    const auto cmds = subcommands();
    std::map<std::string, std::map<std::string, std::string>> flags;
    std::map<std::string, CLI::App*> apps;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.description);
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory");
        for (const auto& p : c.params)
            sub->add_option("--" + p.name, flags[c.name][p.name], p.help);
        apps[c.name] = sub;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitVerified;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitVerified;
        }
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    const Subcommand* chosen = nullptr;
    for (const auto& c : cmds)
        if (apps[c.name]->parsed()) chosen = &c;
    if (!chosen) {
        err << "error: no subcommand\n";
        return kExitConfig;
    }

    RunConfig cfg(chosen->name, chosen->params);
    for (const auto& p : chosen->params) cfg.values()[p.name] = p.fallback;
    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("config", std::string("not valid JSON: ") + e.what());
            }
            apply_config_json(cfg, doc);
        }
        for (const auto& p : chosen->params)
            if (apps[chosen->name]->count("--" + p.name) > 0) cfg.values()[p.name] = flags[chosen->name][p.name];

        const std::filesystem::path dir(out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw std::ios_base::failure("cannot create " + dir.string());

        Report report(cfg);
        Context ctx{cfg, dir, report};
        chosen->run(ctx);
        const std::string text = report.finish().dump(2) + "\n";
        write_file(dir / (chosen->name + "_report.json"), text);
        out << text;
        switch (report.status()) {
        case VerdictKind::Verified: return kExitVerified;
        case VerdictKind::Undecided: return kExitUndecided;
        case VerdictKind::Violated: err << "violated: " << report.first_violation() << '\n'; return kExitViolated;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitVerified;
}

} // namespace pathsub::cli
