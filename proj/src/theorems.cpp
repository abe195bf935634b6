#include "varlp/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "varlp/compatibility.hpp"
#include "varlp/error.hpp"
#include "varlp/format.hpp"
#include "varlp/modular.hpp"
#include "varlp/operators.hpp"

namespace varlp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

DiagnosticReport make_report(std::string name, std::vector<std::string> columns, std::string key_name)
{
    DiagnosticReport r;
    r.probe_name = std::move(name);
    r.columns = std::move(columns);
    r.key_name = std::move(key_name);
    return r;
}

void append_note(DiagnosticReport& r, const std::string& note)
{
    if (!r.notes.empty()) r.notes += "; ";
    r.notes += note;
}

// Ball admissible for the local log-Hoelder estimates: mu(B) < 1 and every
// pair of points it relates closer than 1/2.
struct LocalBall {
    Ball ball;
    IndexRange cells;
    double mu = 0.0;
    double diam = 0.0;
    double geometry = 0.0;  ///< G_B
};

std::vector<LocalBall> local_balls(const GridSpace& s, std::span<const Ball> family, const GeometryReport& geo)
{
    std::vector<LocalBall> out;
    const double w = s.width();
    for (const Ball& b : family) {
        LocalBall lb{b, ball_cells(s, b)};
        if (lb.cells.empty()) continue;
        lb.mu = measure(s, lb.cells);
        lb.diam = clipped_diameter(s, b);
        if (!(lb.mu < 1.0) || !(lb.diam + 0.5 * w < 0.5)) continue;
        lb.geometry = (geo.ahlfors_Q * -std::log(lb.diam) - std::log(geo.ahlfors_c_lower)) / -std::log(lb.diam + 0.5 * w);
        out.push_back(lb);
    }
    return out;
}

double geometry_constant(std::span<const LocalBall> balls)
{
    double g = 0.0;
    for (const LocalBall& lb : balls) g = std::max(g, lb.geometry);
    return g;
}

bool strictly_increasing(std::span<const double> v)
{
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (!(v[k] > v[k - 1])) return false;
    }
    return v.size() >= 2;
}

bool strictly_decreasing(std::span<const double> v)
{
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (!(v[k] < v[k - 1])) return false;
    }
    return v.size() >= 2;
}

double max_adjacent_difference(const ExponentField& r)
{
    double m = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) m = std::max(m, std::abs(r[i] - r[i - 1]));
    return m;
}

} // namespace

const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

TailMajorant tail_majorant(const GridSpace& space, double base_point, double r)
{
    if (!(r > 0.0)) throw DomainError("tail majorant exponent must be positive");
    TailMajorant t{base_point, r, std::vector<double>(space.n_cells())};
    for (std::size_t i = 0; i < space.n_cells(); ++i) {
        t.values[i] = std::pow(std::numbers::e + std::abs(space.center(i) - base_point), -r);
    }
    return t;
}

DiagnosticReport m1_dichotomy_probe(const PiecewiseMap& phi, const ExponentField& p, const Ball& ball,
                                    std::span<const double> n_list, const DichotomyOptions& options)
{
    if (!(phi.space() == p.space())) throw DomainError("exponent and map live on different spaces");
    const GridSpace& s = p.space();
    DiagnosticReport rep = make_report("m1_dichotomy", {"n", "R"}, "R_growth");
    rep.parameters = {{"ball_center", ball.center}, {"ball_radius", ball.radius}};

    const IndexRange cells = ball_cells(s, ball);
    const double mu = measure(s, cells);
    if (!(mu > 0.0)) {
        rep.notes = "ball has zero measure";
        rep.verdict_label = "unresolved";
        rep.series.push_back({kNaN, kNaN});
        return rep;
    }
    std::vector<std::size_t> pre;
    for (std::size_t x = 0; x < s.n_cells(); ++x) {
        if (cells.contains(phi.image_cell(x))) pre.push_back(x);
    }
    if (pre.empty()) {
        rep.notes = "preimage of the ball is empty";
        rep.verdict_label = "unresolved";
        rep.series.push_back({kNaN, kNaN});
        return rep;
    }
    rep.parameters["ball_measure"] = mu;
    rep.parameters["preimage_measure"] = static_cast<double>(pre.size()) * s.width();

    std::vector<double> R;
    for (double n : n_list) {
        if (!(n > 0.0)) throw DomainError("dichotomy levels n must be positive");
        std::vector<double> fv(s.n_cells(), 0.0);
        for (std::size_t i = cells.first; i < cells.last; ++i) fv[i] = std::pow(n, 1.0 / p[i]);
        const GridFunction fn(s, std::move(fv));
        const double value = modular(compose(fn, phi), p) / (n * mu);
        R.push_back(value);
        rep.series.push_back({n, value});
    }
    if (R.empty()) throw DomainError("dichotomy probe needs at least one n");

    const auto [mn, mx] = std::minmax_element(R.begin(), R.end());
    const double growth = R.back() / R.front();
    rep.key_value = growth;
    rep.parameters["R_min"] = *mn;
    rep.parameters["R_max"] = *mx;
    if (strictly_increasing(R) && growth > options.growth_threshold) {
        rep.verdict = Verdict::fail;
        rep.verdict_label = "fail-of-(M1)";
    } else if (*mx <= options.bounded_factor * *mn) {
        rep.verdict = Verdict::pass;
        rep.verdict_label = "pass-of-(M1)";
    } else {
        rep.verdict = Verdict::inconclusive;
        rep.verdict_label = "unresolved";
        rep.notes = "R grows by " + format_number(growth) + ", below the " + format_number(options.growth_threshold) +
                    "x failure threshold";
    }
    return rep;
}

DiagnosticReport lemma_l1i_check(const ExponentField& p, const PiecewiseMap& phi, std::span<const Ball> family,
                                 const RegularityOptions& options)
{
    if (!(phi.space() == p.space())) throw DomainError("exponent and map live on different spaces");
    const GridSpace& s = p.space();
    DiagnosticReport rep =
        make_report("lemma_l1i", {"center", "radius", "measure", "max_value", "geometry"}, "max_value");

    const RegularityReport reg = regularity_report(p, options);
    rep.parameters["K0"] = reg.K0;
    rep.parameters["n_cells"] = static_cast<double>(s.n_cells());
    if (!reg.in_LH0) {
        rep.verdict_label = "outside LH0";
        rep.notes = "K0 exceeds the configured cap";
        rep.series.push_back({kNaN, kNaN, kNaN, kNaN, kNaN});
        return rep;
    }
    const GeometryReport geo = geometry_report(s, family);
    rep.parameters["Q"] = geo.ahlfors_Q;
    rep.parameters["c_lower"] = geo.ahlfors_c_lower;

    const ExponentField p_phi = pull_exponent(p, phi);
    std::vector<LocalBall> balls = local_balls(s, family, geo);
    double M = 0.0;
    std::vector<LocalBall> used;
    for (const LocalBall& lb : balls) {
        const CellSet pre = preimage_cells(phi, lb.ball);
        if (pre.empty()) continue;
        const double pp = p_plus(p, lb.cells);
        double m = 0.0;
        for (std::size_t x : pre) m = std::max(m, std::pow(lb.mu, p_phi[x] - pp));
        M = std::max(M, m);
        used.push_back(lb);
        rep.series.push_back({lb.ball.center, lb.ball.radius, lb.mu, m, lb.geometry});
    }
    if (used.empty()) {
        rep.verdict_label = "no qualifying balls";
        rep.notes = "no ball with mu(B) < 1, small diameter and non-empty preimage";
        rep.series.push_back({kNaN, kNaN, kNaN, kNaN, kNaN});
        return rep;
    }
    const double G = geometry_constant(used);
    const double bound = std::exp(reg.K0 * G);
    rep.parameters["G"] = G;
    rep.parameters["c_geom"] = geo.ahlfors_Q > 0.0 ? G / geo.ahlfors_Q : kNaN;
    rep.parameters["bound"] = bound;
    rep.key_value = M;
    if (M <= bound * (1.0 + 1e-9)) {
        rep.verdict = Verdict::pass;
        rep.verdict_label = "bounded";
    } else {
        rep.verdict = Verdict::fail;
        rep.verdict_label = "exceeds bound";
    }
    if (!(geo.ahlfors_Q > 0.0)) append_note(rep, "degenerate Ahlfors fit (Q = 0); c_geom undefined, G used directly");
    return rep;
}

DiagnosticReport lemma_l2_check(const ExponentField& p, const PiecewiseMap& phi, const Ball& A,
                                std::span<const Ball> family, const RegularityOptions& options)
{
    if (!(phi.space() == p.space())) throw DomainError("exponent and map live on different spaces");
    const GridSpace& s = p.space();
    DiagnosticReport rep = make_report("lemma_l2", {"center", "radius", "measure", "min_value", "geometry"}, "min_value");
    rep.parameters = {{"A_center", A.center}, {"A_radius", A.radius}, {"n_cells", static_cast<double>(s.n_cells())}};

    auto unresolved = [&](const std::string& label, const std::string& note) {
        rep.verdict = Verdict::inconclusive;
        rep.verdict_label = label;
        rep.notes = note;
        rep.series.push_back({kNaN, kNaN, kNaN, kNaN, kNaN});
        return rep;
    };

    const CompatibilityReport comp = compatibility_report(p, phi, family, options);
    rep.parameters["bracket_minus"] = comp.bracket_minus;
    rep.parameters["K0"] = comp.regularity.K0;
    if (std::abs(comp.bracket_minus - 1.0) > 1e-9) {
        return unresolved("hypothesis not met", "bracket_minus differs from 1");
    }
    const GeometryReport geo = geometry_report(s, family);
    rep.parameters["Q"] = geo.ahlfors_Q;
    rep.parameters["c_lower"] = geo.ahlfors_c_lower;

    const ExponentField p_phi = pull_exponent(p, phi);
    const double w = s.width();
    double mn = kInf;
    std::vector<LocalBall> used;
    for (const LocalBall& lb : local_balls(s, family, geo)) {
        if (intersect(lb.cells, ball_cells(s, A)).empty()) continue;
        double m = kInf;
        for (std::size_t x = 0; x < s.n_cells(); ++x) {
            const double y = phi.image(x);
            if (!inside_open(y, A, w) || !inside_open(y, lb.ball, w)) continue;
            m = std::min(m, std::pow(lb.mu, 1.0 - p[x] / p_phi[x]));
        }
        if (std::isinf(m)) continue;
        mn = std::min(mn, m);
        used.push_back(lb);
        rep.series.push_back({lb.ball.center, lb.ball.radius, lb.mu, m, lb.geometry});
    }
    if (used.empty()) return unresolved("no qualifying balls", "no ball meets A with a non-empty preimage");

    const double G = geometry_constant(used);
    const double floor = std::exp(-comp.regularity.K0 * G);
    rep.parameters["G"] = G;
    rep.parameters["floor"] = floor;
    rep.key_value = mn;
    if (mn >= floor * (1.0 - 1e-9)) {
        rep.verdict = Verdict::pass;
        rep.verdict_label = "bounded below";
    } else {
        rep.verdict = Verdict::fail;
        rep.verdict_label = "below floor";
    }
    return rep;
}

namespace {

DiagnosticReport combine_levels(std::span<const DiagnosticReport> levels, double factor, bool growth_is_harmful,
                                const std::string& name)
{
    DiagnosticReport rep = make_report(name, {"level", "n_cells", "key_value", "verdict_code"}, "level_ratio");
    if (levels.empty()) throw DomainError("refinement check needs at least one level");
    bool any_fail = false;
    bool any_unresolved = false;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const DiagnosticReport& l = levels[k];
        const auto it = l.parameters.find("n_cells");
        const double n = it == l.parameters.end() ? kNaN : it->second;
        rep.series.push_back({static_cast<double>(k), n, l.key_value, static_cast<double>(l.verdict)});
        any_fail = any_fail || l.verdict == Verdict::fail;
        any_unresolved = any_unresolved || l.verdict == Verdict::inconclusive;
    }
    const double first = levels.front().key_value;
    const double last = levels.back().key_value;
    const double ratio = growth_is_harmful ? last / first : first / last;
    rep.key_value = ratio;
    rep.parameters["factor"] = factor;
    if (any_fail || ratio > factor) {
        rep.verdict = Verdict::fail;
        rep.verdict_label = any_fail ? "level failed" : "blows up under refinement";
    } else if (any_unresolved) {
        rep.verdict = Verdict::inconclusive;
        rep.verdict_label = "unresolved level";
    } else {
        rep.verdict = Verdict::pass;
        rep.verdict_label = "stable under refinement";
    }
    return rep;
}

} // namespace

DiagnosticReport lemma_l1i_refinement(std::span<const DiagnosticReport> levels, double factor)
{
    return combine_levels(levels, factor, true, "lemma_l1i_refinement");
}

DiagnosticReport lemma_l2_refinement(std::span<const DiagnosticReport> levels, double factor)
{
    return combine_levels(levels, factor, false, "lemma_l2_refinement");
}

DiagnosticReport tail_majorant_check(const GridSpace& space, const ExponentField& p, double x0, double r,
                                     std::optional<double> Q)
{
    if (!(space == p.space())) throw DomainError("exponent lives on a different space");
    DiagnosticReport rep = make_report("tail_majorant", {"shell", "shell_integral", "partial_sum", "ratio"}, "tail_ratio");

    double q = 0.0;
    if (Q) {
        q = *Q;
    } else {
        const double L = space.total_measure();
        const std::vector<double> radii{L / 64.0, L / 32.0, L / 16.0};
        const std::vector<Ball> fam = interior_balls(space, ball_family(space, 10, radii));
        q = geometry_report(space, fam).ahlfors_Q;
    }
    const double pm = p.p_minus();
    rep.parameters = {{"x0", x0}, {"r", r}, {"Q", q}, {"p_minus", pm}};

    if (!(r * pm > q)) {
        rep.verdict_label = "precondition violated";
        rep.notes = "r * p- = " + format_number(r * pm) + " does not exceed Q = " + format_number(q);
        rep.series.push_back({kNaN, kNaN, kNaN, kNaN});
        return rep;
    }

    const TailMajorant h = tail_majorant(space, x0, r);
    const double w = space.width();
    double direct = 0.0;
    std::vector<double> shell_sum;
    std::vector<std::size_t> shell_count;
    for (std::size_t i = 0; i < space.n_cells(); ++i) {
        const double v = std::pow(h.values[i], pm) * w;
        direct += v;
        const double d = std::abs(space.center(i) - x0);
        std::size_t j = 0;
        if (d >= 1.0) {
            int e = 0;
            std::frexp(d, &e);
            j = static_cast<std::size_t>(e);
        }
        if (j >= shell_sum.size()) {
            shell_sum.resize(j + 1, 0.0);
            shell_count.resize(j + 1, 0);
        }
        shell_sum[j] += v;
        ++shell_count[j];
    }

    double partial = 0.0;
    std::size_t last_full = 0;
    for (std::size_t j = 0; j < shell_sum.size(); ++j) {
        partial += shell_sum[j];
        const double ratio = j > 0 && shell_sum[j - 1] > 0.0 ? shell_sum[j] / shell_sum[j - 1] : kNaN;
        rep.series.push_back({static_cast<double>(j), shell_sum[j], partial, ratio});
        const double nominal = j == 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(j) - 1);
        if (static_cast<double>(shell_count[j]) * w >= 0.5 * nominal) last_full = j;
    }
    rep.parameters["direct"] = direct;
    rep.parameters["shell_total"] = partial;

    if (last_full < 2) {
        rep.verdict_label = "too few shells";
        rep.notes = "domain covers fewer than three dyadic shells";
        return rep;
    }
    const double ratio = shell_sum[last_full] / shell_sum[last_full - 1];
    const double limit = std::exp2(q - r * pm) + 0.05;
    const bool agree = std::abs(direct - partial) <= 1e-6 * direct;
    const bool cauchy = shell_sum[last_full] < shell_sum[last_full - 1];
    rep.key_value = ratio;
    rep.parameters["ratio_limit"] = limit;
    rep.parameters["last_shell"] = static_cast<double>(last_full);
    if (agree && cauchy && ratio <= limit) {
        rep.verdict = Verdict::pass;
        rep.verdict_label = "geometric tail";
    } else {
        rep.verdict = Verdict::fail;
        rep.verdict_label = "tail not geometric";
        if (!agree) append_note(rep, "shell and direct sums disagree");
        if (!cauchy) append_note(rep, "last shell increment does not shrink");
        if (ratio > limit) append_note(rep, "tail ratio above 2^(Q - r p-) + 0.05");
    }
    return rep;
}

DiagnosticReport noncompactness_witness(const PiecewiseMap& phi, const ExponentField& p,
                                        const PushforwardProfile& profile, double eps,
                                        std::span<const double> deltas)
{
    if (!(phi.space() == p.space()) || !(profile.space == p.space())) {
        throw DomainError("map, exponent and profile live on different spaces");
    }
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
    const GridSpace& s = p.space();
    const double w = s.width();
    DiagnosticReport rep = make_report(
        "noncompactness", {"delta", "restricted_modular", "measure_A", "density_ratio", "x_N"}, "min_restricted_modular");
    rep.parameters = {{"eps", eps}};

    std::vector<char> inU(s.n_cells(), 0);
    std::vector<std::size_t> prefix(s.n_cells() + 1, 0);
    for (std::size_t i = 0; i < s.n_cells(); ++i) {
        inU[i] = profile.u_values[i] > eps ? 1 : 0;
        prefix[i + 1] = prefix[i] + static_cast<std::size_t>(inU[i]);
    }
    rep.parameters["measure_U"] = static_cast<double>(prefix.back()) * w;
    if (std::isinf(profile.u_sup)) append_note(rep, "u_sup is infinite; witness evaluated without the boundedness hypothesis");

    if (prefix.back() == 0) {
        rep.verdict_label = "trivial operator regime";
        append_note(rep, "U_eps is empty");
        rep.series.push_back({kNaN, kNaN, kNaN, kNaN, kNaN});
        return rep;
    }

    std::vector<double> mods;
    std::vector<double> measures;
    for (double delta : deltas) {
        std::optional<std::size_t> chosen;
        IndexRange cells;
        double ratio = 0.0;
        for (std::size_t i = 0; i < s.n_cells() && !chosen; ++i) {
            if (!inU[i]) continue;
            cells = ball_cells(s, Ball{s.center(i), delta});
            if (cells.empty()) continue;
            ratio = static_cast<double>(prefix[cells.last] - prefix[cells.first]) / static_cast<double>(cells.size());
            if (ratio >= 0.5) chosen = i;
        }
        if (!chosen) {
            rep.verdict_label = "no density point";
            append_note(rep, "no cell of U_eps passes the density test at delta = " + format_number(delta));
            rep.series.push_back({delta, kNaN, kNaN, kNaN, kNaN});
            return rep;
        }
        const double muB = measure(s, cells);
        double mod = 0.0;
        std::size_t countA = 0;
        for (std::size_t x = 0; x < s.n_cells(); ++x) {
            const std::size_t y = phi.image_cell(x);
            if (!cells.contains(y) || !inU[y]) continue;
            ++countA;
            mod += std::pow(std::pow(muB, -1.0 / p[y]), p[x]);
        }
        mod *= w;
        const double muA = static_cast<double>(countA) * w;
        mods.push_back(mod);
        measures.push_back(muA);
        rep.series.push_back({delta, mod, muA, ratio, s.center(*chosen)});
    }
    if (mods.empty()) throw DomainError("noncompactness witness needs at least one delta");

    const double mn = *std::min_element(mods.begin(), mods.end());
    rep.key_value = mn;
    const bool floor_ok = mn >= eps / 4.0;
    const bool shrinking = strictly_decreasing(measures) || (measures.size() == 1 && measures[0] > 0.0);
    if (floor_ok && shrinking) {
        rep.verdict = Verdict::pass;
        rep.verdict_label = "non-compactness witnessed";
    } else {
        rep.verdict = Verdict::fail;
        rep.verdict_label = "no witness";
        if (!floor_ok) append_note(rep, "restricted modular fell below eps/4");
        if (!shrinking) append_note(rep, "mu(A_delta) does not strictly decrease");
    }
    return rep;
}

DiagnosticReport weak_compactness_diagnostic(const PiecewiseMap& phi, const ExponentField& r,
                                             const PushforwardProfile& profile, std::span<const double> lambdas,
                                             std::span<const Ball> family, const WeakCompactnessOptions& options)
{
    if (!(phi.space() == r.space()) || !(profile.space == r.space())) {
        throw DomainError("map, exponent and profile live on different spaces");
    }
    const GridSpace& s = r.space();
    const double w = s.width();
    DiagnosticReport rep = make_report("weak_compactness", {}, "");
    rep.parameters["r_minus"] = r.p_minus();
    rep.parameters["floor_factor"] = options.floor_factor;

    const double resolution = max_adjacent_difference(r);
    if (r.p_minus() - 1.0 > resolution + 1e-12) {
        rep.columns = {"lambda", "D", "floor"};
        rep.key_name = "D_min";
        rep.verdict_label = "reflexive regime";
        rep.notes = "reflexive regime: r- > 1, every composition operator is weakly compact";
        rep.series.push_back({kNaN, kNaN, kNaN});
        return rep;
    }

    const CellSet om = omega_one(r);
    std::vector<char> inOmega(s.n_cells(), 0);
    for (std::size_t i : om) inOmega[i] = 1;
    rep.parameters["measure_omega1"] = static_cast<double>(om.size()) * w;

    if (!om.empty()) {
        rep.columns = {"n", "radius", "integral"};
        rep.key_name = "liminf";
        double z0 = 0.0;
        if (options.z0) {
            z0 = *options.z0;
        } else {
            std::size_t best_first = om.front();
            std::size_t best_len = 0;
            std::size_t run_first = om.front();
            for (std::size_t k = 0; k < om.size(); ++k) {
                if (k > 0 && om[k] != om[k - 1] + 1) run_first = om[k];
                const std::size_t len = om[k] - run_first + 1;
                if (len > best_len) {
                    best_len = len;
                    best_first = run_first;
                }
            }
            z0 = 0.5 * (s.center(best_first) + s.center(best_first + best_len - 1));
        }
        rep.parameters["z0"] = z0;

        std::vector<double> values;
        for (int n = 1; n < 60; ++n) {
            const double rad = std::ldexp(1.0, -n);
            if (rad < 2.0 * w) break;
            const IndexRange I = ball_cells(s, Ball{z0, rad});
            if (I.empty()) continue;
            std::size_t count = 0;
            for (std::size_t x = 0; x < s.n_cells(); ++x) {
                const std::size_t y = phi.image_cell(x);
                if (inOmega[x] && I.contains(y) && inOmega[y]) ++count;
            }
            const double integral = static_cast<double>(count) / static_cast<double>(I.size());
            values.push_back(integral);
            rep.series.push_back({static_cast<double>(n), rad, integral});
        }
        if (values.empty()) {
            rep.verdict_label = "grid too coarse";
            rep.notes = "no interval I_n resolves at this cell width";
            rep.series.push_back({kNaN, kNaN, kNaN});
            return rep;
        }
        const double liminf = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2), values.end());
        rep.key_value = liminf;

        bool invariant = true;
        for (std::size_t x = 0; x < s.n_cells() && invariant; ++x) {
            if (inOmega[phi.image_cell(x)] && !inOmega[x]) invariant = false;
        }
        append_note(rep, invariant ? "phi^{-1}(Omega_1) is contained in Omega_1"
                                   : "phi^{-1}(Omega_1) is not contained in Omega_1");
        if (liminf >= options.floor_factor) {
            rep.verdict = Verdict::pass;
            rep.verdict_label = "not weakly compact";
        } else {
            rep.verdict = Verdict::inconclusive;
            rep.verdict_label = "unresolved";
            append_note(rep, "liminf below the floor; the construction has no converse");
        }
        return rep;
    }

    rep.columns = {"lambda", "D", "floor"};
    rep.key_name = "D_min";
    double M = kInf;
    for (std::size_t i = 0; i < s.n_cells(); ++i) {
        if (!inOmega[i]) M = std::min(M, profile.u_values[i]);
    }
    const double floor = options.floor_factor * M;
    rep.parameters["M"] = M;
    rep.parameters["floor"] = floor;

    std::vector<GridFunction> tests;
    for (const Ball& b : family) {
        if (!ball_cells(s, b).empty()) tests.push_back(normalized_ball_indicator(b, r));
    }
    if (tests.empty()) throw DomainError("weak-compactness diagnostic needs balls of positive measure");

    std::vector<double> D;
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
        double best = 0.0;
        for (const GridFunction& f : tests) {
            double sum = 0.0;
            for (std::size_t z = 0; z < s.n_cells(); ++z) {
                if (f[z] == 0.0 || profile.u_values[z] == 0.0) continue;
                sum += std::pow(lambda * std::abs(f[z]), r[z]) * profile.u_values[z];
            }
            best = std::max(best, sum * w / lambda);
        }
        D.push_back(best);
        rep.series.push_back({lambda, best, floor});
    }
    if (D.empty()) throw DomainError("weak-compactness diagnostic needs at least one lambda");

    const double dmin = *std::min_element(D.begin(), D.end());
    const double dmax = *std::max_element(D.begin(), D.end());
    rep.key_value = dmin;
    if (M > 0.0 && dmin >= floor) {
        rep.verdict = Verdict::pass;
        rep.verdict_label = "not weakly compact";
    } else if (strictly_decreasing(D) && D.back() < options.floor_factor * dmax) {
        rep.verdict = Verdict::fail;
        rep.verdict_label = "diagnostic vanishes";
    } else {
        rep.verdict = Verdict::inconclusive;
        rep.verdict_label = "unresolved";
        if (!(M > 0.0)) append_note(rep, "u vanishes off Omega_1 (M = 0)");
    }
    return rep;
}

DiagnosticReport conjecture_explorer(std::span<const PiecewiseMap> maps, const ExponentField& r,
                                     std::span<const double> lambdas, std::span<const Ball> family)
{
    DiagnosticReport rep = make_report("conjecture", {"map", "inf_u", "D_smallest_lambda", "verdict_code"}, "maps");
    rep.verdict_label = "evidence only";
    if (lambdas.empty()) throw DomainError("conjecture explorer needs at least one lambda");
    const auto smallest = std::min_element(lambdas.begin(), lambdas.end());
    rep.parameters["smallest_lambda"] = *smallest;
    if (std::abs(r.p_minus() - 1.0) > max_adjacent_difference(r) + 1e-12) append_note(rep, "r- differs from 1");

    for (std::size_t k = 0; k < maps.size(); ++k) {
        const PiecewiseMap& phi = maps[k];
        if (!nonsingularity_check(phi).nonsingular) {
            rep.series.push_back({static_cast<double>(k), kNaN, kNaN, 2.0});
            append_note(rep, "map " + std::to_string(k) + " is singular");
            continue;
        }
        const PushforwardProfile prof = radon_nikodym_analytic(phi);
        const double inf_u = *std::min_element(prof.u_values.begin(), prof.u_values.end());
        const DiagnosticReport d = weak_compactness_diagnostic(phi, r, prof, lambdas, family);
        double at_smallest = kNaN;
        if (d.columns.size() == 3 && d.columns[0] == "lambda") {
            for (const auto& row : d.series) {
                if (row[0] == *smallest) at_smallest = row[1];
            }
        } else {
            at_smallest = d.key_value;
        }
        rep.series.push_back({static_cast<double>(k), inf_u, at_smallest, static_cast<double>(d.verdict)});
    }
    rep.key_value = static_cast<double>(maps.size());
    rep.verdict = Verdict::inconclusive;
    return rep;
}

} // namespace varlp
