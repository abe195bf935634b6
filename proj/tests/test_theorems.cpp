#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "varlp/pushforward.hpp"
#include "varlp/theorems.hpp"

using namespace varlp;

namespace {
const std::vector<double> kN{10.0, 100.0, 1000.0, 10000.0};
}

TEST_CASE("dichotomy ratio matches a direct sum")
{
    const GridSpace s(0.0, 10.0, 10000);
    const auto rep = m1_dichotomy_probe(PiecewiseMap::affine(s, 0.5, 0.0), ExponentField::affine(s, 2.0, 1.0),
                                        Ball{3.5, 1.0}, kN);
    REQUIRE(rep.series.size() == kN.size());
    auto phi = [](double x) { return 0.5 * x; };
    auto p = [](double x) { return 2.0 + x; };
    for (std::size_t k = 0; k < kN.size(); ++k) {
        const double ref = oracle::dichotomy_ratio(phi, p, 3.5, 1.0, kN[k], 0.0, 10.0, 10000);
        // the probe reads p at the image cell center, the oracle at phi(x)
        CHECK(rep.series[k][1] == doctest::Approx(ref).epsilon(1e-6));
        CHECK(ref == doctest::Approx(oracle::dichotomy_ratio_continuous(phi, p, 5.0, 9.0, 1.0, kN[k])).epsilon(1e-3));
    }
    CHECK(rep.verdict == Verdict::fail);
    CHECK(rep.verdict_label == "fail-of-(M1)");
    CHECK(rep.key_value > 80.0);
}

TEST_CASE("dichotomy pass cases and empty preimage")
{
    const GridSpace s(0.0, 1.0, 10000);
    const auto id =
        m1_dichotomy_probe(PiecewiseMap::identity(s), ExponentField::affine(s, 1.0, 3.0), Ball{0.5, 0.2}, kN);
    CHECK(id.verdict == Verdict::pass);
    CHECK(id.series.front()[1] == doctest::Approx(1.0));
    const auto none = m1_dichotomy_probe(PiecewiseMap::affine(s, 0.5, 0.0), ExponentField::constant(s, 2.0),
                                         Ball{0.8, 0.1}, kN);
    CHECK(none.verdict == Verdict::inconclusive);
}

TEST_CASE("non-compactness witness for x/2")
{
    const GridSpace s(0.0, 1.0, 10000);
    const auto phi = PiecewiseMap::affine(s, 0.5, 0.0);
    const std::vector<double> deltas{0.1, 0.05, 0.025};
    const auto r = noncompactness_witness(phi, ExponentField::constant(s, 2.0), radon_nikodym_analytic(phi), 1.0,
                                          deltas);
    CHECK(r.verdict == Verdict::pass);
    // f = mu(B)^{-1/2} chi_B, A = 2B: modular mu(A)/mu(B) = 2
    for (const auto& row : r.series) CHECK(row[1] == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("tail majorant on a long interval")
{
    const GridSpace s(0.0, 127.0, 12700);
    const auto r = tail_majorant_check(s, ExponentField::constant(s, 2.0), 0.0, 1.0);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.parameters.count("Q") == 1);
    const auto t = tail_majorant_check(s, ExponentField::constant(s, 2.0), 0.0, 0.25, 1.0);
    CHECK(t.verdict == Verdict::inconclusive);
}

TEST_CASE("lemma bounds for the identity and a contraction")
{
    const GridSpace s(0.0, 1.0, 2000);
    const auto fam = interior_balls(s, ball_family(s, 9, std::vector<double>{0.01, 0.02, 0.04}));
    const auto p = ExponentField::affine(s, 1.0, 1.0);
    const auto l1 = lemma_l1i_check(p, PiecewiseMap::identity(s), fam);
    CHECK(l1.verdict == Verdict::pass);
    const auto l2 = lemma_l2_check(p, PiecewiseMap::identity(s), Ball{0.5, 0.3}, fam);
    CHECK(l2.verdict == Verdict::pass);
    // under x/2, 1+x has p-_B < p-_{phi^-1 B} on every ball, so bracket_minus < 1
    const auto off = lemma_l2_check(p, PiecewiseMap::affine(s, 0.5, 0.0), Ball{0.25, 0.2}, fam);
    CHECK(off.verdict == Verdict::inconclusive);
    const std::vector<DiagnosticReport> levels{l1, l1};
    CHECK(lemma_l1i_refinement(levels).verdict == Verdict::pass);
}

TEST_CASE("weak compactness branches")
{
    const GridSpace s(0.0, 1.0, 10000);
    const auto id = PiecewiseMap::identity(s);
    const auto prof = radon_nikodym_analytic(id);
    std::vector<Ball> fam;
    for (int k = 1; k <= 10; ++k) fam.push_back(Ball{std::ldexp(1.0, -k), std::ldexp(1.0, -k)});
    const std::vector<double> lambdas{1e-1, 1e-2, 1e-3};
    const auto a = weak_compactness_diagnostic(id, ExponentField::affine(s, 1.0, 1.0), prof, lambdas, fam);
    CHECK(a.verdict == Verdict::pass);
    CHECK(a.series.back()[1] >= 0.5);
    const auto b = weak_compactness_diagnostic(id, ExponentField::constant(s, 2.0), prof, lambdas, fam);
    CHECK(b.verdict_label == "reflexive regime");
    WeakCompactnessOptions opt;
    opt.z0 = 0.1;
    const auto c =
        weak_compactness_diagnostic(id, ExponentField::table(s, {1.0, 2.0, 2.0, 2.0}), prof, lambdas, fam, opt);
    CHECK(c.key_value == doctest::Approx(1.0));
    std::vector<PiecewiseMap> maps{id, PiecewiseMap::affine(s, 0.5, 0.25)};
    CHECK(conjecture_explorer(maps, ExponentField::affine(s, 1.0, 1.0), lambdas, fam).verdict ==
          Verdict::inconclusive);
}
