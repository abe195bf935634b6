#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "varlp/error.hpp"
#include "varlp/exponent.hpp"

using namespace varlp;

TEST_CASE("construction validates values")
{
    const GridSpace s(0.0, 1.0, 10);
    CHECK_THROWS_WITH_AS((void)ExponentField::constant(s, 0.5), doctest::Contains("exponent below 1"), DomainError);
    CHECK_THROWS_AS((void)ExponentField(s, std::vector<double>(10, NAN)), DomainError);
    CHECK_THROWS_AS((void)ExponentField(s, std::vector<double>(3, 2.0)), DomainError);
    const auto p = ExponentField::affine(s, 1.0, 1.0);
    CHECK(p.p_minus() == doctest::Approx(1.05));
    CHECK(p.p_plus() == doctest::Approx(1.95));
    CHECK(p_plus(p, IndexRange{2, 5}) == doctest::Approx(1.45));
    CHECK(p_minus(p, CellSet{7, 3}) == doctest::Approx(1.35));
    CHECK_THROWS_AS((void)p_plus(p, IndexRange{4, 4}), EmptyRegionError);
}

TEST_CASE("table exponent is resolution independent")
{
    const GridSpace coarse(0.0, 1.0, 8);
    const auto p = ExponentField::table(coarse, {1.0, 2.0});
    CHECK(p[3] == 1.0);
    CHECK(p[4] == 2.0);
    const auto fine = p.resampled(coarse.refined(4));
    CHECK(fine.size() == 32);
    CHECK(fine[15] == 1.0);
    CHECK(fine[16] == 2.0);
    CHECK(omega_one(fine).size() == 16);
}

TEST_CASE("example exponent values")
{
    CHECK(example_ex1_value(0.5) == doctest::Approx(1.25));
    CHECK(example_ex1_value(1.0) == doctest::Approx(2.0));
    CHECK(example_ex1_value(3.0) == doctest::Approx(1.2));
}

TEST_CASE("conjugate exponent")
{
    const GridSpace s(0.0, 1.0, 4);
    const auto c = conjugate(ExponentField::table(s, {1.0, 2.0, 3.0, 1.5}));
    CHECK(c.is_infinite(0));
    CHECK(c.values[1] == doctest::Approx(2.0));
    CHECK(c.values[2] == doctest::Approx(1.5));
    CHECK(c.values[3] == doctest::Approx(3.0));
    CHECK(c.infinite_cells() == CellSet{0});
    CHECK_THROWS_AS((void)c.to_field(), DomainError);
}

TEST_CASE("lh0 matches an all-pairs sweep")
{
    const GridSpace s(0.0, 1.0, 400);
    const auto p = ExponentField::from_function(s, [](double x) { return 1.0 + x * x; });
    std::vector<double> ps(p.values().begin(), p.values().end());
    CHECK(lh0_constant(p) == doctest::Approx(oracle::lh0_pairs(s.centers(), ps)).epsilon(1e-12));
    CHECK(lh0_constant(ExponentField::constant(s, 3.0)) == 0.0);
}

TEST_CASE("lh0 of a jump grows with resolution")
{
    double prev = 0.0;
    for (std::size_t n : {100, 1000}) {
        const auto p = ExponentField::table(GridSpace(0.0, 1.0, n), {1.5, 2.5});
        const double k = lh0_constant(p);
        CHECK(k == doctest::Approx(-std::log(1.0 / static_cast<double>(n))));
        CHECK(k > prev);
        prev = k;
    }
}

TEST_CASE("lhinf minimax against a direct scan")
{
    const GridSpace s(0.0, 100.0, 2000);
    const auto p = ExponentField::from_function(s, [](double x) { return 1.0 + 1.0 / (1.0 + x); });
    std::vector<double> ps(p.values().begin(), p.values().end());
    const auto ref = oracle::lhinf_scan(s.centers(), ps, 0.0);
    const LhInfFit fit = lhinf_constant(p, 0.0);
    CHECK(fit.k_inf == doctest::Approx(ref.k).epsilon(1e-6));
    CHECK(fit.p_inf == doctest::Approx(ref.q).epsilon(1e-4));

    const LhInfFit at_one = lhinf_constant(p, 0.0, 1.0);
    CHECK(at_one.p_inf == 1.0);
    double k1 = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i)
        k1 = std::max(k1, (ps[i] - 1.0) * std::log(std::numbers::e + s.center(i)));
    CHECK(at_one.k_inf == doctest::Approx(k1));
    CHECK(at_one.k_inf <= 1.0);
}

TEST_CASE("regularity report flags")
{
    const GridSpace s(0.0, 50.0, 10000);
    const auto r = regularity_report(ExponentField::example_ex1(s));
    CHECK(r.in_LH0);
    CHECK(r.in_LHinf);
    CHECK(r.K0 <= 3.0);
    RegularityOptions tight;
    tight.cap = 1e-3;
    CHECK_FALSE(regularity_report(ExponentField::example_ex1(s), tight).in_LH0);
}
