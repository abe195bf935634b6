// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "varlp/cli/runner.hpp"
#include "varlp/cli/scenario.hpp"
#include "varlp/exponent.hpp"
#include "varlp/modular.hpp"
#include "varlp/operators.hpp"
#include "varlp/pushforward.hpp"
#include "varlp/random.hpp"
#include "varlp/space.hpp"
#include "varlp/theorems.hpp"

#ifndef VARLP_SCENARIO_DIR
#error "VARLP_SCENARIO_DIR must point at the scenarios directory"
#endif

using namespace varlp;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what)
{
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!ok) ++failures;
}

void info(const std::string& what) { std::printf("       info: %s\n", what.c_str()); }

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

GridSpace unit(std::size_t n = 10000) { return GridSpace(0.0, 1.0, n); }

ExponentField random_exponent(const GridSpace& s, SeededRng& rng, double lo, double hi)
{
    std::vector<double> v(s.n_cells());
    const std::size_t pieces = 1 + rng.below(12);
    std::vector<double> level(pieces);
    for (double& x : level) x = rng.uniform(lo, hi);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = level[i * pieces / v.size()];
    return ExponentField(s, std::move(v));
}

GridFunction nonzero_function(const GridSpace& s, SeededRng& rng)
{
    GridFunction f = random_simple_function(s, rng, 1 + rng.below(16), -4.0, 4.0);
    return f.is_zero() ? GridFunction::constant(s, 1.0) : f;
}

void criterion1()
{
    const GridSpace s = unit();
    const ExponentField p2 = ExponentField::constant(s, 2.0);
    const double n = luxemburg_norm(GridFunction::indicator(s, IndexRange{0, 5000}), p2);
    const bool half = std::abs(n - std::sqrt(0.5)) <= 1e-6;

    SeededRng rng(1);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double c = rng.uniform(1.0, 4.0);
        const ExponentField p = ExponentField::constant(s, c);
        const GridFunction f = nonzero_function(s, rng);
        double sum = 0.0;
        for (double v : f.values()) sum += std::pow(std::abs(v), c);
        const double closed = std::pow(sum * s.width(), 1.0 / c);
        worst = std::max(worst, std::abs(luxemburg_norm(f, p) - closed) / closed);
    }
    report(1, half && worst <= 1e-9,
           "|chi_[0,1/2]|_2 = " + num(n) + ", max rel. deviation from closed form over 100 draws " + num(worst));
}

void criterion2()
{
    const GridSpace s = unit();
    const ExponentField p = ExponentField::affine(s, 1.0, 1.0);
    const double tol = kDefaultNormTolerance;
    SeededRng rng(2);
    double unit_dev = 0.0;
    bool hom_ok = true;
    bool tri_ok = true;
    for (int k = 0; k < 100; ++k) {
        const GridFunction f = nonzero_function(s, rng);
        const GridFunction g = nonzero_function(s, rng);
        const double c = rng.uniform(-5.0, 5.0);
        const double nf = luxemburg_norm(f, p);
        unit_dev = std::max(unit_dev, std::abs(modular_scaled(f, p, nf) - 1.0));
        hom_ok = hom_ok && std::abs(luxemburg_norm(f.scaled(c), p) - std::abs(c) * nf) <= 2.0 * tol * std::abs(c) * nf;
        const double ng = luxemburg_norm(g, p);
        tri_ok = tri_ok && luxemburg_norm(f + g, p) <= nf + ng + 4.0 * tol * (nf + ng);
    }
    report(2, unit_dev <= 1e-7 && hom_ok && tri_ok,
           "max |rho(f/|f|) - 1| = " + num(unit_dev) + ", homogeneity " + (hom_ok ? "ok" : "violated") +
               ", triangle " + (tri_ok ? "ok" : "violated"));
}

void criterion3()
{
    const GridSpace s = unit();
    SeededRng rng(3);
    int passed = 0;
    for (int k = 0; k < 100; ++k) {
        const ExponentField p = random_exponent(s, rng, 1.0, 4.0);
        const GridFunction f = nonzero_function(s, rng);
        if (norm_modular_check(f, p).pass) ++passed;
    }
    report(3, passed == 100, "norm-modular relation on " + std::to_string(passed) + "/100 random pairs");
}

void criterion4()
{
    const std::vector<double> radii{0.02, 0.04, 0.06};
    const std::vector<std::size_t> levels{1000, 10000, 100000};
    const char* names[] = {"x/2", "x^2", "(1+x)/2"};
    bool ok = true;
    for (int m = 0; m < 3; ++m) {
        std::vector<double> res;
        bool bounded = true;
        for (std::size_t n : levels) {
            const GridSpace s = unit(n);
            const PiecewiseMap phi = m == 0   ? PiecewiseMap::affine(s, 0.5, 0.0)
                                     : m == 1 ? PiecewiseMap::power(s, 2.0)
                                              : PiecewiseMap::affine(s, 0.5, 0.5);
            const PushforwardProfile prof = radon_nikodym_analytic(phi);
            const std::vector<Ball> fam = ball_family(s, 10, radii);
            double worst = 0.0;
            for (const Ball& b : fam) worst = std::max(worst, pushforward_residual(phi, prof, b));
            bounded = bounded && worst <= 3.0 * s.width();
            res.push_back(worst);
        }
        // residual proportional to width: each level divides it by the width ratio, +-20%
        bool scales = true;
        for (std::size_t k = 1; k < res.size(); ++k) {
            const double ratio = res[k - 1] / res[k];
            const double expected = static_cast<double>(levels[k]) / static_cast<double>(levels[k - 1]);
            scales = scales && ratio >= 0.8 * expected && ratio <= 1.2 * expected;
        }
        ok = ok && bounded && scales;
        info(std::string(names[m]) + ": max residual/width " + num(res[0] * 1e3) + ", " + num(res[1] * 1e4) + ", " +
             num(res[2] * 1e5) + " at 1e3/1e4/1e5 cells");
    }
    report(4, ok, "pushforward identity within 3 width on the 30-ball family, residual proportional to width");
}

void criterion5()
{
    const GridSpace s = unit();
    const PiecewiseMap phi = PiecewiseMap::power(s, 2.0);
    const PushforwardProfile a = radon_nikodym_analytic(phi);
    const PushforwardProfile e = radon_nikodym_empirical(phi, 0.02);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.n_cells(); ++i) {
        const double x = s.center(i);
        if (x < 0.1 || x > 0.9) continue;
        worst = std::max(worst, std::abs(e.u_values[i] - a.u_values[i]) / a.u_values[i]);
    }
    report(5, worst < 0.02, "x^2 empirical vs analytic u on [0.1, 0.9]: max rel. error " + num(worst));
}

void criterion6()
{
    const GridSpace s = unit();
    const PiecewiseMap phi = PiecewiseMap::affine(s, 0.5, 0.0);

    const ExponentField p2 = ExponentField::constant(s, 2.0);
    std::vector<Ball> inside = interior_balls(s, ball_family(s, 9, std::vector<double>{0.01, 0.02}), 1.0);
    std::erase_if(inside, [](const Ball& b) { return b.center + b.radius >= 0.5; });
    inside.push_back(Ball{0.25, 0.2});
    const OperatorNormReport a = operator_norm_report(phi, p2, radon_nikodym_analytic(phi, p2), inside);
    const bool ok_a = std::abs(a.upper_bound - std::numbers::sqrt2) <= 1e-12 && a.lower_bound >= std::numbers::sqrt2 - 0.01;

    const ExponentField p = ExponentField::affine(s, 1.0, 1.0);
    std::vector<Ball> near0;
    for (int k = 1; k <= 10; ++k) near0.push_back(Ball{std::ldexp(1.0, -k), std::ldexp(1.0, -k)});
    const OperatorNormReport b = operator_norm_report(phi, p, radon_nikodym_analytic(phi, p), near0);
    const double cell = 2.0 * std::numbers::ln2 * s.width();
    const bool ok_b = std::abs(b.upper_bound - 2.0) <= cell && b.lower_bound >= 1.95;

    report(6, ok_a && ok_b,
           "p=2: upper " + num(a.upper_bound) + " lower " + num(a.lower_bound) + "; p=1+x: upper " +
               num(b.upper_bound) + " lower " + num(b.lower_bound) + " (" + b.witness + ")");
}

void criterion7()
{
    const std::vector<double> n_list{10.0, 100.0, 1000.0, 10000.0};
    const GridSpace s = unit();

    const DiagnosticReport id = m1_dichotomy_probe(PiecewiseMap::identity(s), ExponentField::affine(s, 1.0, 1.0),
                                                   Ball{0.5, 0.2}, n_list);
    const PiecewiseMap half = PiecewiseMap::affine(s, 0.5, 0.0);
    const DiagnosticReport h2 = m1_dichotomy_probe(half, ExponentField::constant(s, 2.0), Ball{0.2, 0.1}, n_list);

    // B = (0.25, 0.45) has preimage (0.5, 0.9) under x/2
    const ExponentField p = ExponentField::affine(s, 2.0, 1.0);
    const DiagnosticReport grow = m1_dichotomy_probe(half, p, Ball{0.35, 0.1}, n_list);
    const bool ok = id.verdict == Verdict::pass && h2.verdict == Verdict::pass && grow.verdict == Verdict::fail &&
                    grow.key_value > 10.0;
    report(7, ok,
           "identity: " + id.verdict_label + "; x/2, p=2: " + h2.verdict_label + "; x/2, p=2+x on [0,1]: " +
               grow.verdict_label + " with growth " + num(grow.key_value));

    const DiagnosticReport literal = m1_dichotomy_probe(half, p, Ball{0.7, 0.2}, n_list);
    info("ball (0.5, 0.9) on [0,1]: " + literal.verdict_label + " (" + literal.notes + ")");
    const GridSpace s10(0.0, 10.0, 10000);
    const DiagnosticReport wide = m1_dichotomy_probe(PiecewiseMap::affine(s10, 0.5, 0.0),
                                                     ExponentField::affine(s10, 2.0, 1.0), Ball{3.5, 1.0}, n_list);
    info("same map and exponent on [0,10], preimage (5,9): " + wide.verdict_label + " with growth " +
         num(wide.key_value));
}

void criterion8()
{
    const GridSpace s = unit();
    const PiecewiseMap phi = PiecewiseMap::affine(s, 0.5, 0.0);
    const std::vector<double> deltas{0.1, 0.05, 0.025};
    const DiagnosticReport r =
        noncompactness_witness(phi, ExponentField::constant(s, 2.0), radon_nikodym_analytic(phi), 1.0, deltas);
    bool ok = r.verdict == Verdict::pass;
    for (std::size_t k = 0; k < r.series.size(); ++k) {
        ok = ok && r.series[k][1] >= 0.5;
        if (k > 0) ok = ok && r.series[k][2] < r.series[k - 1][2];
    }
    report(8, ok, "restricted modular >= 1/2 (min " + num(r.key_value) + ") with mu(A_delta) decreasing");
}

void criterion9()
{
    const GridSpace s = unit();
    const PiecewiseMap id = PiecewiseMap::identity(s);
    const PushforwardProfile prof = radon_nikodym_analytic(id);
    std::vector<Ball> fam;
    for (int k = 1; k <= 10; ++k) fam.push_back(Ball{std::ldexp(1.0, -k), std::ldexp(1.0, -k)});
    const std::vector<double> lambdas{1e-1, 1e-2, 1e-3};

    const DiagnosticReport a = weak_compactness_diagnostic(id, ExponentField::affine(s, 1.0, 1.0), prof, lambdas, fam);
    const double d3 = a.series.back()[1];
    const bool ok_a = d3 >= 0.5 && a.verdict_label == "not weakly compact";

    const DiagnosticReport b = weak_compactness_diagnostic(id, ExponentField::constant(s, 2.0), prof, lambdas, fam);
    const bool ok_b = b.verdict == Verdict::inconclusive && b.notes.find("reflexive regime") != std::string::npos;

    WeakCompactnessOptions opt;
    opt.z0 = 0.1;
    const DiagnosticReport c = weak_compactness_diagnostic(id, ExponentField::table(s, {1.0, 2.0, 2.0, 2.0}), prof,
                                                           lambdas, fam, opt);
    const bool ok_c = c.key_value >= 0.9 && c.verdict_label == "not weakly compact";

    report(9, ok_a && ok_b && ok_c,
           "D(1e-3) = " + num(d3) + " (" + a.verdict_label + "); r=2: " + b.verdict_label + "; Omega_1 liminf " +
               num(c.key_value));
}

void criterion10()
{
    const GridSpace s(0.0, 50.0, 10000);
    const ExponentField p = ExponentField::example_ex1(s);
    const double c = std::log(1.0 + std::numbers::e);
    bool bound = true;
    for (std::size_t i = 0; i < s.n_cells(); ++i) {
        const double x = s.center(i);
        bound = bound && p[i] - 1.0 >= 0.0 && p[i] - 1.0 <= c / std::log(x + std::numbers::e);
    }
    const double k0 = lh0_constant(p);
    report(10, bound && std::isfinite(k0) && k0 <= 3.0,
           std::string("pointwise bound ") + (bound ? "holds" : "violated") + " on (0,50], K0 = " + num(k0));
}

void criterion11()
{
    const GridSpace s = unit();
    const std::vector<double> radii{0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
    const std::vector<Ball> fam = interior_balls(s, ball_family(s, 20, radii));
    const GeometryReport g = geometry_report(s, fam);
    report(11, g.ahlfors_Q >= 0.95 && g.ahlfors_Q <= 1.05 && g.doubling_constant >= 1.9 && g.doubling_constant <= 2.1,
           "Q = " + num(g.ahlfors_Q) + ", doubling constant " + num(g.doubling_constant) + " over " +
               std::to_string(g.ball_family_size) + " interior balls");
}

std::map<std::string, std::string> run_suite(const std::filesystem::path& out)
{
    std::map<std::string, std::string> csv;
    for (const auto& entry : std::filesystem::directory_iterator(VARLP_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const cli::Scenario sc = cli::parse_scenario(entry.path());
        cli::RunOptions opt;
        opt.out = out / entry.path().stem();
        opt.seed = 12345;
        opt.quiet = true;
        const cli::RunResult r = cli::run_scenario(sc, opt);
        for (const auto& f : std::filesystem::directory_iterator(r.out_dir)) {
            if (f.path().extension() != ".csv") continue;
            std::ifstream in(f.path(), std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            csv[(entry.path().stem() / f.path().filename()).string()] = ss.str();
        }
    }
    return csv;
}

void criterion12()
{
    const auto base = std::filesystem::temp_directory_path() / "varlp_acceptance";
    std::filesystem::remove_all(base);
    const auto first = run_suite(base / "a");
    const auto second = run_suite(base / "b");
    const bool ok = !first.empty() && first == second;
    report(12, ok, std::to_string(first.size()) + " CSV files, identical across two seeded runs: " + (ok ? "yes" : "no"));
    std::filesystem::remove_all(base);
}

} // namespace

int main()
{
    void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6,
                            criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
    for (int k = 0; k < 12; ++k) {
        try {
            criteria[k]();
        } catch (const std::exception& e) {
            report(k + 1, false, std::string("threw: ") + e.what());
        }
    }
    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
