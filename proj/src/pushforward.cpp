#include "varlp/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varlp/error.hpp"

namespace varlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t count_in_open_ball(std::span<const double> sorted, const Ball& ball, double width)
{
    const double r = ball.radius - kBoundaryTolerance * width;
    if (!(r > 0.0)) return 0;
    const double a = ball.center - r;
    const double b = ball.center + r;
    const auto first = std::upper_bound(sorted.begin(), sorted.end(), a);
    const auto last = std::lower_bound(first, sorted.end(), b);
    return static_cast<std::size_t>(last - first);
}

} // namespace

CellSet preimage_cells(const PiecewiseMap& phi, const Ball& ball)
{
    CellSet out;
    const double w = phi.space().width();
    const double r = ball.radius - kBoundaryTolerance * w;
    if (!(r > 0.0)) return out;
    const double a = ball.center - r;
    const double b = ball.center + r;
    for (std::size_t i = 0; i < phi.images().size(); ++i) {
        const double y = phi.image(i);
        if (y > a && y < b) out.push_back(i);
    }
    return out;
}

double preimage_measure(const PiecewiseMap& phi, const Ball& ball)
{
    const double w = phi.space().width();
    return static_cast<double>(count_in_open_ball(phi.sorted_images(), ball, w)) * w;
}

NonsingularityResult nonsingularity_check(const PiecewiseMap& phi)
{
    NonsingularityResult res;
    const auto branches = phi.branches();
    for (std::size_t k = 0; k < branches.size(); ++k) {
        if (branches[k].direction != Monotonicity::flat) continue;
        SingularityWitness w;
        w.branch = k;
        w.value = branches[k].value(branches[k].a);
        std::size_t count = 0;
        for (double y : phi.images()) {
            if (y == w.value) ++count;
        }
        w.preimage_measure = static_cast<double>(count) * phi.space().width();
        res.nonsingular = false;
        res.witness = w;
        return res;
    }
    return res;
}

PushforwardProfile radon_nikodym_analytic(const PiecewiseMap& phi)
{
    const NonsingularityResult ns = nonsingularity_check(phi);
    if (!ns.nonsingular) throw DomainError("Radon-Nikodym derivative requires a non-singular map");

    const GridSpace& s = phi.space();
    PushforwardProfile prof{s, std::vector<double>(s.n_cells(), 0.0), 0.0, std::nullopt, std::nullopt, ProfileMethod::analytic};
    prof.method = ProfileMethod::analytic;

    bool blowup = false;
    const auto branches = phi.branches();
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const Branch& br = branches[k];
        if (std::abs(br.derivative(br.a)) < kDerivativeFloor || std::abs(br.derivative(br.b)) < kDerivativeFloor) {
            blowup = true;
        }
        const double ymin = br.image_min();
        const double ymax = br.image_max();
        for (std::size_t i = 0; i < s.n_cells(); ++i) {
            const double y = s.center(i);
            if (y < ymin || y > ymax) continue;
            const double x = phi.branch_inverse(k, y);
            const double d = std::abs(br.derivative(x));
            if (!std::isfinite(d)) throw DomainError("branch derivative not computable at x = " + std::to_string(x));
            if (d < kDerivativeFloor) {
                blowup = true;
                continue;
            }
            prof.u_values[i] += 1.0 / d;
        }
    }
    double sup = 0.0;
    for (double u : prof.u_values) sup = std::max(sup, u);
    prof.u_sup = blowup ? kInf : sup;
    return prof;
}

PushforwardProfile radon_nikodym_analytic(const PiecewiseMap& phi, const ExponentField& p)
{
    PushforwardProfile prof = radon_nikodym_analytic(phi);
    prof.u_p_sup = u_p_sup(prof, p);
    return prof;
}

PushforwardProfile radon_nikodym_empirical(const PiecewiseMap& phi, double radius)
{
    const GridSpace& s = phi.space();
    if (!(radius >= 2.0 * s.width())) {
        throw DomainError("empirical Radon-Nikodym radius must be at least two cell widths");
    }
    PushforwardProfile prof{s, std::vector<double>(s.n_cells(), 0.0), 0.0, std::nullopt, std::nullopt, ProfileMethod::analytic};
    prof.method = ProfileMethod::empirical;
    double sup = 0.0;
    for (std::size_t i = 0; i < s.n_cells(); ++i) {
        const Ball b{s.center(i), radius};
        const double mu = measure(s, ball_cells(s, b));
        if (!(mu > 0.0)) throw DomainError("zero-measure ball in empirical estimator");
        prof.u_values[i] = preimage_measure(phi, b) / mu;
        sup = std::max(sup, prof.u_values[i]);
    }
    prof.u_sup = sup;
    return prof;
}

double u_p_sup(const PushforwardProfile& profile, const ExponentField& p)
{
    if (!(profile.space == p.space())) throw DomainError("profile and exponent live on different spaces");
    if (std::isinf(profile.u_sup)) return kInf;
    double m = 0.0;
    for (std::size_t i = 0; i < profile.u_values.size(); ++i) {
        const double u = profile.u_values[i];
        if (u > 0.0) m = std::max(m, std::pow(u, 1.0 / p[i]));
    }
    return m;
}

double cal_U(const PiecewiseMap& phi, std::span<const Ball> family)
{
    const GridSpace& s = phi.space();
    double best = 0.0;
    for (const Ball& b : family) {
        const double mu = measure(s, ball_cells(s, b));
        if (!(mu > 0.0)) throw DomainError("cal_U needs balls of positive measure");
        best = std::max(best, preimage_measure(phi, b) / mu);
    }
    return best;
}

double pushforward_residual(const PiecewiseMap& phi, const PushforwardProfile& profile, const Ball& ball)
{
    const GridSpace& s = phi.space();
    const IndexRange cells = ball_cells(s, ball);
    double mass = 0.0;
    for (std::size_t i = cells.first; i < cells.last; ++i) mass += profile.u_values[i];
    return std::abs(mass * s.width() - preimage_measure(phi, ball));
}

} // namespace varlp
