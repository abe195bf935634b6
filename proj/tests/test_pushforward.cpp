#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "varlp/error.hpp"
#include "varlp/pushforward.hpp"

using namespace varlp;

TEST_CASE("map construction")
{
    const GridSpace s(0.0, 1.0, 100);
    CHECK_THROWS_WITH_AS((void)PiecewiseMap::affine(s, 2.0, 0.0), doctest::Contains("map leaves domain"), DomainError);
    const auto phi = PiecewiseMap::clamp_affine(s, 2.0, -0.5, 0.0, 1.0);
    CHECK(phi.branches().size() == 3);
    CHECK(phi.evaluate(0.1) == 0.0);
    CHECK(phi.evaluate(0.5) == doctest::Approx(0.5));
    const AffineSegment segs[] = {{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, -2.0, 2.0}};
    const auto tent = PiecewiseMap::piecewise_affine(s, segs);
    CHECK(tent.evaluate(0.75) == doctest::Approx(0.5));
    CHECK(tent.branch_inverse(1, 0.5) == doctest::Approx(0.75));
}

TEST_CASE("preimage measure for affine maps")
{
    const GridSpace s(0.0, 1.0, 10000);
    const auto phi = PiecewiseMap::affine(s, 0.5, 0.25);
    for (double c : {0.3, 0.5, 0.7}) {
        const Ball b{c, 0.05};
        const double exact = oracle::affine_preimage_length(0.5, 0.25, c, 0.05, 0.0, 1.0);
        CHECK(std::abs(preimage_measure(phi, b) - exact) <= 2.0 * s.width());
        CHECK(preimage_measure(phi, b) == doctest::Approx(measure(s, preimage_cells(phi, b))));
    }
    CHECK(preimage_measure(phi, Ball{0.9, 0.05}) == 0.0);
}

TEST_CASE("nonsingularity")
{
    const GridSpace s(0.0, 1.0, 100);
    CHECK(nonsingularity_check(PiecewiseMap::power(s, 2.0)).nonsingular);
    const auto r = nonsingularity_check(PiecewiseMap::clamp_affine(s, 2.0, -0.5, 0.0, 1.0));
    REQUIRE_FALSE(r.nonsingular);
    REQUIRE(r.witness);
    CHECK(r.witness->value == 0.0);
    CHECK(r.witness->preimage_measure == doctest::Approx(0.25).epsilon(0.05));
    CHECK_THROWS_AS((void)radon_nikodym_analytic(PiecewiseMap::affine(s, 0.0, 0.5)), DomainError);
}

TEST_CASE("analytic density of x/2 and x^2")
{
    const GridSpace s(0.0, 1.0, 1000);
    const auto half = radon_nikodym_analytic(PiecewiseMap::affine(s, 0.5, 0.0));
    CHECK(half.u_values[10] == doctest::Approx(2.0));
    CHECK(half.u_values[900] == 0.0);
    CHECK(half.u_sup == doctest::Approx(2.0));

    const auto sq = radon_nikodym_analytic(PiecewiseMap::power(s, 2.0));
    for (std::size_t i : {5, 250, 999}) CHECK(sq.u_values[i] == doctest::Approx(0.5 / std::sqrt(s.center(i))));
    CHECK(std::isinf(sq.u_sup));

    const AffineSegment segs[] = {{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, -2.0, 2.0}};
    const auto tent = radon_nikodym_analytic(PiecewiseMap::piecewise_affine(s, segs));
    CHECK(tent.u_values[400] == doctest::Approx(1.0));
}

TEST_CASE("u^(1/p) and the cal U ratio")
{
    const GridSpace s(0.0, 1.0, 1000);
    const auto phi = PiecewiseMap::affine(s, 0.5, 0.0);
    const auto p = ExponentField::affine(s, 1.0, 1.0);
    const auto prof = radon_nikodym_analytic(phi, p);
    REQUIRE(prof.u_p_sup);
    CHECK(*prof.u_p_sup == doctest::Approx(std::pow(2.0, 1.0 / (1.0 + 0.5 * s.width()))));
    const std::vector<Ball> fam{Ball{0.2, 0.1}, Ball{0.5, 0.1}};
    CHECK(cal_U(phi, fam) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("pushforward residual shrinks with the grid")
{
    double prev = 1.0;
    for (std::size_t n : {1000, 10000, 100000}) {
        const GridSpace s(0.0, 1.0, n);
        const auto phi = PiecewiseMap::power(s, 2.0);
        const auto prof = radon_nikodym_analytic(phi);
        const double r = pushforward_residual(phi, prof, Ball{0.5, 0.2});
        CHECK(r <= 3.0 * s.width());
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("empirical density")
{
    const GridSpace s(0.0, 1.0, 10000);
    const auto phi = PiecewiseMap::power(s, 2.0);
    const auto e = radon_nikodym_empirical(phi, 0.02);
    CHECK(e.method == ProfileMethod::empirical);
    const std::size_t i = s.cell_of(0.5);
    CHECK(e.u_values[i] == doctest::Approx(0.5 / std::sqrt(0.5)).epsilon(0.02));
    CHECK_THROWS_AS((void)radon_nikodym_empirical(phi, s.width()), DomainError);
}
