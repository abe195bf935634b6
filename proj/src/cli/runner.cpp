#include "varlp/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "varlp/compatibility.hpp"
#include "varlp/error.hpp"
#include "varlp/format.hpp"
#include "varlp/modular.hpp"
#include "varlp/operators.hpp"
#include "varlp/pushforward.hpp"
#include "varlp/random.hpp"
#include "varlp/report_io.hpp"

namespace varlp::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
    const Scenario& scenario;
    const ProbeSpec& probe;
    std::size_t level;
    GridSpace space;
    ExponentField p;
    PiecewiseMap phi;
    std::vector<Ball> family;
    std::uint64_t seed;
};

struct ProbeOutput {
    DiagnosticReport report;
    Json detail;
};

double pnum(const Json& params, const std::string& key, double fallback)
{
    const auto it = params.find(key);
    return it != params.end() && it->is_number() ? it->get<double>() : fallback;
}

std::optional<double> popt(const Json& params, const std::string& key)
{
    const auto it = params.find(key);
    if (it != params.end() && it->is_number()) return it->get<double>();
    return std::nullopt;
}

std::vector<double> plist(const Json& params, const std::string& key, std::vector<double> fallback)
{
    const auto it = params.find(key);
    if (it == params.end() || !it->is_array()) return fallback;
    std::vector<double> out;
    for (const Json& v : *it) out.push_back(v.get<double>());
    return out;
}

Ball pball(const Json& params, const std::string& key, Ball fallback)
{
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    return Ball{it->at("center").get<double>(), it->at("radius").get<double>()};
}

bool pflag(const Json& params, const std::string& key, bool fallback)
{
    const auto it = params.find(key);
    return it != params.end() && it->is_boolean() ? it->get<bool>() : fallback;
}

std::vector<Ball> probe_family(const Context& c)
{
    const Json& params = c.probe.params;
    std::vector<Ball> fam;
    if (const auto it = params.find("family"); it != params.end()) {
        fam = build_family(parse_family_spec(*it), c.space);
    } else if (params.find("balls") == params.end()) {
        fam = c.family;
    }
    if (const auto it = params.find("balls"); it != params.end()) {
        for (const Json& b : *it) fam.push_back(Ball{b.at("center").get<double>(), b.at("radius").get<double>()});
    }
    return fam;
}

ExponentField probe_exponent(const Context& c)
{
    const auto it = c.probe.params.find("exponent");
    if (it == c.probe.params.end()) return c.p;
    return build_exponent(parse_exponent_spec(*it), c.space);
}

// {"type": "constant", value} | {"type": "indicator", from, to, value} |
// {"type": "power", k} | {"type": "random", pieces, lo, hi, from, to}
GridFunction build_function(const Json& params, const GridSpace& s, SeededRng& rng)
{
    const auto it = params.find("function");
    if (it == params.end()) return GridFunction::constant(s, 1.0);
    const Json& f = *it;
    const std::string type = f.value("type", std::string("constant"));
    if (type == "constant") return GridFunction::constant(s, pnum(f, "value", 1.0));
    if (type == "indicator") {
        const double a = pnum(f, "from", s.lo());
        const double b = pnum(f, "to", s.hi());
        const double v = pnum(f, "value", 1.0);
        return GridFunction::from_function(s, [=](double x) { return x >= a && x < b ? v : 0.0; });
    }
    if (type == "power") {
        const double k = pnum(f, "k", 1.0);
        return GridFunction::from_function(s, [=](double x) { return std::pow(std::abs(x), k); });
    }
    if (type == "random") {
        GridFunction g = random_simple_function(s, rng, static_cast<std::size_t>(pnum(f, "pieces", 8.0)),
                                                pnum(f, "lo", -3.0), pnum(f, "hi", 3.0));
        const double a = pnum(f, "from", s.lo());
        const double b = pnum(f, "to", s.hi());
        std::vector<double> v(g.values().begin(), g.values().end());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(s.center(i) >= a && s.center(i) < b)) v[i] = 0.0;
        }
        return GridFunction(s, std::move(v));
    }
    throw DomainError("unknown function type '" + type + "'");
}

DiagnosticReport base_report(const Context& c, std::vector<std::string> columns, std::string key_name)
{
    DiagnosticReport r;
    r.probe_name = c.probe.name;
    r.columns = std::move(columns);
    r.key_name = std::move(key_name);
    r.parameters["n_cells"] = static_cast<double>(c.space.n_cells());
    r.parameters["width"] = c.space.width();
    return r;
}

void set_verdict(DiagnosticReport& r, bool ok, const std::string& pass_label, const std::string& fail_label)
{
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    r.verdict_label = ok ? pass_label : fail_label;
}

bool in_range(const Json& params, const std::string& key, double v)
{
    const auto it = params.find(key);
    if (it == params.end()) return true;
    return v >= it->at(0).get<double>() && v <= it->at(1).get<double>();
}

ProbeOutput probe_geometry(const Context& c)
{
    const std::vector<Ball> fam = probe_family(c);
    const GeometryReport g = geometry_report(c.space, fam);
    DiagnosticReport r = base_report(c, {"center", "radius", "measure", "diameter", "doubling_ratio"}, "ahlfors_Q");
    for (const Ball& b : fam) {
        const double mu = measure(c.space, ball_cells(c.space, b));
        const double mu2 = measure(c.space, ball_cells(c.space, Ball{b.center, 2.0 * b.radius}));
        r.series.push_back({b.center, b.radius, mu, clipped_diameter(c.space, b), mu2 / mu});
    }
    r.parameters["doubling_constant"] = g.doubling_constant;
    r.parameters["ahlfors_Q"] = g.ahlfors_Q;
    r.parameters["ahlfors_c_lower"] = g.ahlfors_c_lower;
    r.parameters["ahlfors_c_upper"] = g.ahlfors_c_upper;
    r.parameters["ball_family_size"] = static_cast<double>(g.ball_family_size);
    r.key_value = g.ahlfors_Q;
    const bool ok = g.doubling_constant >= 1.0 && g.ahlfors_c_lower <= g.ahlfors_c_upper &&
                    in_range(c.probe.params, "Q_range", g.ahlfors_Q) &&
                    in_range(c.probe.params, "doubling_range", g.doubling_constant);
    set_verdict(r, ok, "geometry consistent", "geometry out of range");
    return {r, to_json(g)};
}

ProbeOutput probe_regularity(const Context& c)
{
    const ExponentField p = probe_exponent(c);
    RegularityOptions opt;
    opt.base_point = pnum(c.probe.params, "base_point", c.space.lo());
    opt.p_inf = popt(c.probe.params, "p_inf");
    opt.cap = pnum(c.probe.params, "cap", opt.cap);
    const RegularityReport reg = regularity_report(p, opt);
    DiagnosticReport r = base_report(c, {"K0", "K_inf", "p_inf"}, "K0");
    r.series.push_back({reg.K0, reg.K_inf, reg.p_inf});
    r.parameters["K0"] = reg.K0;
    r.parameters["K_inf"] = reg.K_inf;
    r.parameters["p_inf"] = reg.p_inf;
    r.parameters["base_point"] = reg.base_point;
    r.key_value = reg.K0;
    bool ok = reg.in_LH0 && reg.in_LHinf;
    if (pflag(c.probe.params, "ex1_bound", false)) {
        // 0 <= p(x) - 1 <= ln(1 + e) / ln(x + e) for the piecewise example exponent
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double x = c.space.center(i) - opt.base_point;
            worst = std::max(worst, p[i] - 1.0 - std::log(1.0 + std::numbers::e) / std::log(x + std::numbers::e));
        }
        r.parameters["ex1_bound_excess"] = worst;
        ok = ok && worst <= 1e-12;
    }
    set_verdict(r, ok, "log-Hoelder", "not log-Hoelder");
    return {r, to_json(reg)};
}

ProbeOutput probe_compatibility(const Context& c)
{
    const ExponentField p = probe_exponent(c);
    RegularityOptions opt;
    opt.base_point = pnum(c.probe.params, "base_point", c.space.lo());
    const CompatibilityReport comp = compatibility_report(p, c.phi, probe_family(c), opt);
    DiagnosticReport r = base_report(
        c, {"center", "radius", "p_plus_ball", "p_plus_preimage", "p_minus_ball", "p_minus_preimage"}, "bracket_plus");
    for (const BallCompatibility& b : comp.per_ball) {
        r.series.push_back({b.ball.center, b.ball.radius, b.p_plus_ball, b.p_plus_pre, b.p_minus_ball, b.p_minus_pre});
    }
    r.parameters["bracket_plus"] = comp.bracket_plus;
    r.parameters["bracket_minus"] = comp.bracket_minus;
    r.parameters["skipped"] = static_cast<double>(comp.skipped);
    r.parameters["in_P_phi_plus"] = comp.in_P_phi_plus ? 1.0 : 0.0;
    r.parameters["in_P_phi_minus"] = comp.in_P_phi_minus ? 1.0 : 0.0;
    r.parameters["bracket_plus_le_one"] = comp.bracket_plus_le_one ? 1.0 : 0.0;
    r.key_value = comp.bracket_plus;
    const bool ok = comp.in_P_phi_plus || comp.in_P_phi_minus;
    const std::string label = comp.in_P_phi_plus && comp.in_P_phi_minus ? "P_phi_plus and P_phi_minus"
                              : comp.in_P_phi_plus                        ? "P_phi_plus"
                                                                          : "P_phi_minus";
    set_verdict(r, ok, label, "neither class");
    return {r, to_json(comp)};
}

ProbeOutput probe_luxemburg(const Context& c)
{
    SeededRng rng(c.seed);
    const ExponentField p = probe_exponent(c);
    const GridFunction f = build_function(c.probe.params, c.space, rng);
    const double tol = pnum(c.probe.params, "tol", kDefaultNormTolerance);
    const NormTrace t = luxemburg_norm_trace(f, p, tol);
    const NormModularCheck chk = norm_modular_check(f, p);
    DiagnosticReport r = base_report(c, {"eta", "modular"}, "norm");
    for (const auto& [eta, rho] : t.bracket) r.series.push_back({eta, rho});
    r.parameters["norm"] = t.norm;
    r.parameters["bisection_steps"] = t.bisection_steps;
    r.parameters["modular"] = chk.rho;
    r.parameters["lower"] = chk.lhs;
    r.parameters["upper"] = chk.rhs;
    r.key_value = t.norm;
    bool ok = chk.pass;
    if (const auto expect = popt(c.probe.params, "expect")) {
        const double rel = std::abs(t.norm - *expect) / std::max(1e-300, std::abs(*expect));
        r.parameters["expect_rel_error"] = rel;
        ok = ok && rel <= pnum(c.probe.params, "expect_tol", 1e-6);
    }
    if (r.series.empty()) r.series.push_back({0.0, 0.0});
    set_verdict(r, ok, "norm-modular relation holds", "norm-modular relation violated");
    return {r, Json{{"norm", json_number(t.norm)}, {"modular", json_number(chk.rho)}}};
}


ProbeOutput probe_modular_properties(const Context& c)
{
    SeededRng rng(c.seed);
    const ExponentField p = probe_exponent(c);
    const std::size_t draws = static_cast<std::size_t>(pnum(c.probe.params, "draws", 100.0));
    const std::size_t pieces = static_cast<std::size_t>(pnum(c.probe.params, "pieces", 8.0));
    const double unit_tol = pnum(c.probe.params, "unit_tol", 1e-7);
    const double tol = kDefaultNormTolerance;
    DiagnosticReport r = base_report(c, {"draw", "norm", "unit_deviation", "homogeneity_excess", "triangle_excess"},
                                     "max_unit_deviation");
    double worst_unit = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < draws; ++k) {
        GridFunction f = random_simple_function(c.space, rng, pieces, -3.0, 3.0);
        const GridFunction g = random_simple_function(c.space, rng, pieces, -3.0, 3.0);
        const double scale = rng.uniform(-3.0, 3.0);
        if (f.is_zero()) f = GridFunction::constant(c.space, 1.0);
        const double nf = luxemburg_norm(f, p, tol);
        const double unit = std::abs(modular_scaled(f, p, nf) - 1.0);
        const double hom = std::abs(luxemburg_norm(f.scaled(scale), p, tol) - std::abs(scale) * nf) -
                           2.0 * tol * std::abs(scale) * nf;
        const double ng = luxemburg_norm(g, p, tol);
        const double tri = luxemburg_norm(f + g, p, tol) - (nf + ng) - 4.0 * tol * std::max(1.0, nf + ng);
        worst_unit = std::max(worst_unit, unit);
        ok = ok && unit <= unit_tol && hom <= 0.0 && tri <= 0.0;
        r.series.push_back({static_cast<double>(k), nf, unit, hom, tri});
    }
    if (r.series.empty()) r.series.push_back({kNaN, kNaN, kNaN, kNaN, kNaN});
    r.parameters["draws"] = static_cast<double>(draws);
    r.key_value = worst_unit;
    set_verdict(r, ok, "unit ball, homogeneity and triangle hold", "modular property violated");
    return {r, Json::object()};
}

ProbeOutput probe_holder(const Context& c)
{
    SeededRng rng(c.seed);
    const ExponentField p = probe_exponent(c);
    DiagnosticReport r = base_report(c, {"draw", "integral", "bound"}, "max_ratio");
    if (!(p.p_minus() > 1.0)) {
        r.verdict_label = "conjugate infinite";
        r.notes = "p = 1 on some cell; the Hoelder pairing needs p > 1";
        r.series.push_back({kNaN, kNaN, kNaN});
        return {r, Json::object()};
    }
    const std::size_t draws = static_cast<std::size_t>(pnum(c.probe.params, "draws", 100.0));
    bool ok = true;
    double worst = 0.0;
    for (std::size_t k = 0; k < draws; ++k) {
        const GridFunction f = random_simple_function(c.space, rng, 8, -3.0, 3.0);
        const GridFunction g = random_simple_function(c.space, rng, 8, -3.0, 3.0);
        const HolderPairing h = holder_pairing(f, g, p);
        ok = ok && h.pass;
        if (h.bound > 0.0) worst = std::max(worst, h.integral / h.bound);
        r.series.push_back({static_cast<double>(k), h.integral, h.bound});
    }
    if (r.series.empty()) r.series.push_back({kNaN, kNaN, kNaN});
    r.key_value = worst;
    set_verdict(r, ok, "pairing bounded", "pairing exceeds bound");
    return {r, Json::object()};
}

ProbeOutput probe_nonsingularity(const Context& c)
{
    const NonsingularityResult ns = nonsingularity_check(c.phi);
    DiagnosticReport r = base_report(c, {"nonsingular", "witness_value", "witness_preimage_measure"}, "nonsingular");
    Json detail{{"nonsingular", ns.nonsingular}};
    if (ns.witness) {
        r.series.push_back({0.0, ns.witness->value, ns.witness->preimage_measure});
        r.notes = "flat branch " + std::to_string(ns.witness->branch) + " maps measure " +
                  format_number(ns.witness->preimage_measure) + " onto {" + format_number(ns.witness->value) + "}";
        detail["witness"] = Json{{"branch", ns.witness->branch},
                                 {"value", json_number(ns.witness->value)},
                                 {"preimage_measure", json_number(ns.witness->preimage_measure)}};
    } else {
        r.series.push_back({1.0, kNaN, kNaN});
    }
    r.key_value = ns.nonsingular ? 1.0 : 0.0;
    set_verdict(r, ns.nonsingular, "non-singular", "singular");
    return {r, detail};
}

ProbeOutput probe_pushforward(const Context& c)
{
    const PushforwardProfile prof = radon_nikodym_analytic(c.phi);
    const std::vector<Ball> fam = probe_family(c);
    DiagnosticReport r = base_report(c, {"center", "radius", "residual", "residual_over_width"}, "max_residual");
    double worst = 0.0;
    for (const Ball& b : fam) {
        const double res = pushforward_residual(c.phi, prof, b);
        worst = std::max(worst, res);
        r.series.push_back({b.center, b.radius, res, res / c.space.width()});
    }
    if (r.series.empty()) throw DomainError("pushforward probe needs a ball family");
    double mass = 0.0;
    for (double u : prof.u_values) mass += u * c.space.width();
    r.parameters["mass"] = mass;
    r.parameters["mass_error"] = std::abs(mass - c.space.total_measure());
    r.parameters["u_sup"] = prof.u_sup;
    r.parameters["max_residual_over_width"] = worst / c.space.width();
    r.key_value = worst;
    const double factor = pnum(c.probe.params, "residual_factor", 3.0);
    set_verdict(r, worst <= factor * c.space.width(), "identity reproduced", "residual above bound");
    Json detail = to_json(prof);
    detail.erase("u_values");
    return {r, detail};
}

ProbeOutput probe_empirical_rn(const Context& c)
{
    const double radius = pnum(c.probe.params, "radius", 0.02 * c.space.total_measure());
    const std::vector<double> window =
        plist(c.probe.params, "window",
              {c.space.lo() + 0.1 * c.space.total_measure(), c.space.hi() - 0.1 * c.space.total_measure()});
    const PushforwardProfile a = radon_nikodym_analytic(c.phi);
    const PushforwardProfile e = radon_nikodym_empirical(c.phi, radius);
    DiagnosticReport r = base_report(c, {"center", "analytic", "empirical", "relative_error"}, "max_relative_error");
    double worst = 0.0;
    for (std::size_t i = 0; i < c.space.n_cells(); ++i) {
        const double x = c.space.center(i);
        if (x < window.at(0) || x > window.at(1) || !(a.u_values[i] > 0.0)) continue;
        const double rel = std::abs(e.u_values[i] - a.u_values[i]) / a.u_values[i];
        worst = std::max(worst, rel);
        r.series.push_back({x, a.u_values[i], e.u_values[i], rel});
    }
    if (r.series.empty()) throw DomainError("empirical_rn window contains no cell with positive density");
    r.parameters["radius"] = radius;
    r.key_value = worst;
    set_verdict(r, worst < pnum(c.probe.params, "tol", 0.02), "estimator agrees", "estimator off");
    return {r, Json::object()};
}

ProbeOutput probe_cal_u(const Context& c)
{
    const std::vector<Ball> fam = probe_family(c);
    DiagnosticReport r = base_report(c, {"center", "radius", "ratio"}, "cal_U");
    for (const Ball& b : fam) {
        const double mu = measure(c.space, ball_cells(c.space, b));
        if (!(mu > 0.0)) throw DomainError("cal_U needs balls of positive measure");
        r.series.push_back({b.center, b.radius, preimage_measure(c.phi, b) / mu});
    }
    const double value = cal_U(c.phi, fam);
    r.parameters["cal_U"] = value;
    r.key_value = value;
    const double threshold = pnum(c.probe.params, "threshold", 10.0);
    if (nonsingularity_check(c.phi).nonsingular) {
        const double u_sup = radon_nikodym_analytic(c.phi).u_sup;
        r.parameters["u_sup"] = u_sup;
        const bool agree = (u_sup < threshold) == (value < threshold * 1.1);
        set_verdict(r, agree, "u_sup and cal_U agree", "u_sup and cal_U disagree");
    } else {
        r.verdict_label = "singular map";
        r.notes = "u_phi undefined for a singular map";
    }
    return {r, Json::object()};
}

ProbeOutput probe_operator_norm(const Context& c)
{
    const ExponentField p = probe_exponent(c);
    const PushforwardProfile prof = radon_nikodym_analytic(c.phi, p);
    const std::vector<Ball> fam = probe_family(c);
    const OperatorNormReport op = operator_norm_report(c.phi, p, prof, fam);
    DiagnosticReport r = base_report(c, {"upper_bound", "lower_bound", "family_size"}, "upper_bound");
    r.series.push_back({op.upper_bound, op.lower_bound, static_cast<double>(op.family_size)});
    r.parameters["upper_bound"] = op.upper_bound;
    r.parameters["lower_bound"] = op.lower_bound;
    r.key_value = op.upper_bound;
    r.notes = "witness " + op.witness;
    set_verdict(r, op.lower_bound <= op.upper_bound * (1.0 + 1e-6), "bounds consistent", "lower bound above formula");
    return {r, to_json(op)};
}

ProbeOutput probe_change_of_variables(const Context& c)
{
    SeededRng rng(c.seed);
    const ExponentField p = probe_exponent(c);
    const PushforwardProfile prof = radon_nikodym_analytic(c.phi);
    Json params = c.probe.params;
    if (params.find("function") == params.end()) {
        const double L = c.space.total_measure();
        params["function"] = Json{{"type", "random"}, {"from", c.space.lo() + 0.1 * L}, {"to", c.space.hi() - 0.1 * L}};
    }
    const GridFunction f = build_function(params, c.space, rng);
    const double res = change_of_variables_residual(f, c.phi, p, prof);
    DiagnosticReport r = base_report(c, {"residual", "residual_over_width"}, "residual");
    r.series.push_back({res, res / c.space.width()});
    r.key_value = res;
    const double C = pnum(c.probe.params, "residual_factor", 10.0);
    set_verdict(r, res <= C * c.space.width() + 1e-12, "substitution identity holds", "residual above bound");
    return {r, Json::object()};
}

ProbeOutput probe_m1(const Context& c)
{
    const double L = c.space.total_measure();
    const Ball b = pball(c.probe.params, "ball", Ball{c.space.lo() + 0.5 * L, 0.1 * L});
    const std::vector<double> n_list = plist(c.probe.params, "n_list", {10.0, 100.0, 1000.0, 10000.0});
    DichotomyOptions opt;
    opt.growth_threshold = pnum(c.probe.params, "growth_threshold", opt.growth_threshold);
    return {m1_dichotomy_probe(c.phi, probe_exponent(c), b, n_list, opt), Json::object()};
}

ProbeOutput probe_l1i(const Context& c)
{
    DiagnosticReport r = lemma_l1i_check(probe_exponent(c), c.phi, probe_family(c));
    r.parameters["width"] = c.space.width();
    return {r, Json::object()};
}

ProbeOutput probe_l2(const Context& c)
{
    const double L = c.space.total_measure();
    const Ball A = pball(c.probe.params, "A", Ball{c.space.lo() + 0.5 * L, L});
    DiagnosticReport r = lemma_l2_check(probe_exponent(c), c.phi, A, probe_family(c));
    r.parameters["width"] = c.space.width();
    return {r, Json::object()};
}

ProbeOutput probe_tail(const Context& c)
{
    const double x0 = pnum(c.probe.params, "x0", c.space.lo());
    const double rr = pnum(c.probe.params, "r", 1.0);
    DiagnosticReport r = tail_majorant_check(c.space, probe_exponent(c), x0, rr, popt(c.probe.params, "Q"));
    r.parameters["n_cells"] = static_cast<double>(c.space.n_cells());
    return {r, Json::object()};
}

ProbeOutput probe_noncompactness(const Context& c)
{
    const double L = c.space.total_measure();
    const ExponentField p = probe_exponent(c);
    const PushforwardProfile prof = radon_nikodym_analytic(c.phi);
    const std::vector<double> deltas = plist(c.probe.params, "deltas", {0.1 * L, 0.05 * L, 0.025 * L});
    DiagnosticReport r = noncompactness_witness(c.phi, p, prof, pnum(c.probe.params, "eps", 1.0), deltas);
    r.parameters["n_cells"] = static_cast<double>(c.space.n_cells());
    return {r, Json::object()};
}

WeakCompactnessOptions weak_options(const Context& c)
{
    WeakCompactnessOptions opt;
    opt.floor_factor = pnum(c.probe.params, "floor_factor", opt.floor_factor);
    opt.z0 = popt(c.probe.params, "z0");
    return opt;
}

ProbeOutput probe_weak(const Context& c)
{
    const ExponentField rexp = probe_exponent(c);
    const PushforwardProfile prof = radon_nikodym_analytic(c.phi);
    const std::vector<double> lambdas = plist(c.probe.params, "lambdas", {1e-1, 1e-2, 1e-3});
    DiagnosticReport r = weak_compactness_diagnostic(c.phi, rexp, prof, lambdas, probe_family(c), weak_options(c));
    r.parameters["n_cells"] = static_cast<double>(c.space.n_cells());
    return {r, Json::object()};
}

ProbeOutput probe_conjecture(const Context& c)
{
    std::vector<PiecewiseMap> maps;
    if (const auto it = c.probe.params.find("maps"); it != c.probe.params.end()) {
        for (const Json& m : *it) maps.push_back(build_map(parse_map_spec(m), c.space));
    } else {
        maps.push_back(c.phi);
    }
    const std::vector<double> lambdas = plist(c.probe.params, "lambdas", {1e-1, 1e-2, 1e-3});
    DiagnosticReport r = conjecture_explorer(maps, probe_exponent(c), lambdas, probe_family(c));
    r.parameters["n_cells"] = static_cast<double>(c.space.n_cells());
    Json names = Json::array();
    for (const PiecewiseMap& m : maps) names.push_back(m.description());
    return {r, Json{{"maps", names}}};
}

using ProbeFn = ProbeOutput (*)(const Context&);

const std::map<std::string, std::pair<ProbeFn, std::string>>& registry()
{
    static const std::map<std::string, std::pair<ProbeFn, std::string>> r{
        {"geometry", {probe_geometry, "doubling constant and Ahlfors fit over the ball family"}},
        {"regularity", {probe_regularity, "log-Hoelder constants K0, K_inf and fitted p_inf"}},
        {"compatibility", {probe_compatibility, "brackets [phi]_{p+}, [phi]_{p-} and class membership"}},
        {"luxemburg_norm", {probe_luxemburg, "Luxemburg norm with bracket trace and norm-modular check"}},
        {"modular_properties", {probe_modular_properties, "unit-ball, homogeneity and triangle checks on random draws"}},
        {"holder", {probe_holder, "Hoelder pairing bound on random draws"}},
        {"nonsingularity", {probe_nonsingularity, "flat-branch test with singularity witness"}},
        {"pushforward", {probe_pushforward, "analytic u_phi against preimage measures, with refinement"}},
        {"empirical_rn", {probe_empirical_rn, "ball-ratio u_phi estimate against the analytic one"}},
        {"cal_U", {probe_cal_u, "ball-ratio functional U(phi) and agreement with u_sup"}},
        {"operator_norm", {probe_operator_norm, "norm formula ess sup u^{1/p} against ball-indicator ratios"}},
        {"change_of_variables", {probe_change_of_variables, "substitution identity residual, with refinement"}},
        {"m1_dichotomy", {probe_m1, "modular-inequality dichotomy ratios R(n)"}},
        {"lemma_l1i", {probe_l1i, "local exponent bound mu(B)^{p_phi - p+_B}, with refinement"}},
        {"lemma_l2", {probe_l2, "lower bound mu(B)^{1 - p/p_phi}, with refinement"}},
        {"tail_majorant", {probe_tail, "dyadic-shell integral of the tail majorant"}},
        {"noncompactness", {probe_noncompactness, "equi-integrability failure witness f_N"}},
        {"weak_compactness", {probe_weak, "weak-compactness diagnostic D(lambda) or the Omega_1 construction"}},
        {"conjecture", {probe_conjecture, "inf u_phi against the weak-compactness diagnostic, evidence only"}},
    };
    return r;
}

bool declares_refinement(const std::string& name)
{
    return name == "pushforward" || name == "change_of_variables" || name == "lemma_l1i" || name == "lemma_l2";
}

// Residual probes: the key value must shrink from level to level.
SummaryRow residual_refinement_row(const std::string& id, std::span<const DiagnosticReport> levels)
{
    SummaryRow row{id, "all", "pass", 0.0, "residual decays"};
    std::vector<double> v;
    for (const DiagnosticReport& r : levels) v.push_back(r.key_value);
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k - 1] > 0.0 && !(v[k] < v[k - 1])) {
            row.verdict = "fail";
            row.notes = "non-decaying residual between levels " + std::to_string(k - 1) + " and " + std::to_string(k);
        }
    }
    row.key_value = v.front() > 0.0 ? v.back() / v.front() : 0.0;
    return row;
}

} // namespace

std::string probe_description(const std::string& name)
{
    const auto it = registry().find(name);
    return it == registry().end() ? std::string() : it->second.second;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options)
{
    namespace fs = std::filesystem;
    RunResult result;
    result.out_dir = options.out ? *options.out : fs::path(scenario.output);
    fs::create_directories(result.out_dir);
    const std::size_t levels = options.levels ? *options.levels : scenario.levels;
    const std::uint64_t seed = options.seed ? *options.seed : scenario.seed;
    std::ostream* log = options.quiet ? nullptr : options.log;

    bool any_error = false;
    bool any_unresolved = false;
    for (std::size_t pi = 0; pi < scenario.probes.size(); ++pi) {
        const ProbeSpec& probe = scenario.probes[pi];
        const ProbeFn fn = registry().at(probe.name).first;
        std::vector<DiagnosticReport> reports;
        Json jlevels = Json::array();
        std::string error;
        for (std::size_t level = 0; level < levels; ++level) {
            try {
                const GridSpace space = build_space(scenario, level);
                const Context ctx{scenario,
                                  probe,
                                  level,
                                  space,
                                  build_exponent(scenario.exponent, space),
                                  build_map(scenario.map, space),
                                  build_family(scenario.family, space),
                                  seed + 1000003ULL * pi + level};
                ProbeOutput out = fn(ctx);
                out.report.probe_name = probe.name;
                jlevels.push_back(Json{{"level", level},
                                       {"n_cells", space.n_cells()},
                                       {"report", to_json(out.report)},
                                       {"detail", out.detail}});
                result.summary.push_back(SummaryRow{probe.id, std::to_string(level), to_string(out.report.verdict),
                                                    out.report.key_value,
                                                    out.report.verdict_label +
                                                        (out.report.notes.empty() ? "" : "; " + out.report.notes)});
                any_unresolved = any_unresolved || out.report.verdict == Verdict::inconclusive;
                if (log) {
                    *log << probe.id << " level " << level << ": " << to_string(out.report.verdict) << " ("
                         << out.report.verdict_label << ") " << out.report.key_name << " = "
                         << format_number(out.report.key_value) << '\n';
                }
                reports.push_back(std::move(out.report));
            } catch (const std::exception& e) {
                error = e.what();
                result.summary.push_back(SummaryRow{probe.id, std::to_string(level), "error", kNaN, error});
                any_error = true;
                if (log) *log << probe.id << " level " << level << ": error: " << error << '\n';
                break;
            }
        }

        Json refinement = nullptr;
        if (error.empty() && reports.size() >= 2 && declares_refinement(probe.name)) {
            SummaryRow row;
            if (probe.name == "lemma_l1i" || probe.name == "lemma_l2") {
                const DiagnosticReport combined =
                    probe.name == "lemma_l1i" ? lemma_l1i_refinement(reports) : lemma_l2_refinement(reports);
                row = SummaryRow{probe.id, "all", to_string(combined.verdict), combined.key_value, combined.verdict_label};
                any_unresolved = any_unresolved || combined.verdict == Verdict::inconclusive;
                refinement = to_json(combined);
            } else {
                row = residual_refinement_row(probe.id, reports);
                refinement = Json{{"verdict", row.verdict}, {"ratio_last_first", json_number(row.key_value)},
                                  {"notes", row.notes}};
            }
            result.summary.push_back(row);
        }

        Json doc{{"probe", probe.name}, {"id", probe.id}, {"scenario", scenario.name}, {"levels", std::move(jlevels)},
                 {"refinement", std::move(refinement)}};
        if (!error.empty()) doc["error"] = error;
        std::ofstream(result.out_dir / (probe.id + ".json"), std::ios::binary) << doc.dump(2) << '\n';

        std::ofstream csv(result.out_dir / (probe.id + ".csv"), std::ios::binary);
        if (!reports.empty()) {
            std::vector<std::string> cols{"level"};
            cols.insert(cols.end(), reports.front().columns.begin(), reports.front().columns.end());
            std::vector<std::vector<double>> rows;
            for (std::size_t level = 0; level < reports.size(); ++level) {
                for (const auto& row : reports[level].series) {
                    std::vector<double> r{static_cast<double>(level)};
                    r.insert(r.end(), row.begin(), row.end());
                    rows.push_back(std::move(r));
                }
            }
            write_csv(csv, cols, rows);
        }
    }

    std::ofstream summary(result.out_dir / "summary.csv", std::ios::binary);
    const std::vector<std::string> header{"probe", "level", "verdict", "key_value", "notes"};
    write_csv_row(summary, header);
    for (const SummaryRow& r : result.summary) {
        const std::vector<std::string> fields{r.probe, r.level, r.verdict, format_number(r.key_value), r.notes};
        write_csv_row(summary, fields);
    }
    result.exit_code = any_error ? 1 : any_unresolved ? 2 : 0;
    return result;
}

} // namespace varlp::cli
