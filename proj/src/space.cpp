#include "varlp/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varlp/error.hpp"

namespace varlp {

IndexRange intersect(IndexRange a, IndexRange b) noexcept
{
    IndexRange r{std::max(a.first, b.first), std::min(a.last, b.last)};
    if (r.last < r.first) r.last = r.first;
    return r;
}

GridSpace::GridSpace(double lo, double hi, std::size_t n_cells) : lo_(lo), hi_(hi), n_(n_cells), width_(0.0)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        throw DomainError("grid space requires finite lo < hi, got [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
    if (n_cells == 0) throw DomainError("grid space requires at least one cell");
    width_ = (hi - lo) / static_cast<double>(n_cells);
}

std::vector<double> GridSpace::centers() const
{
    std::vector<double> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = center(i);
    return c;
}

std::size_t GridSpace::cell_of(double y) const noexcept
{
    const double t = std::floor((y - lo_) / width_);
    if (!(t > 0.0)) return 0;
    if (t >= static_cast<double>(n_ - 1)) return n_ - 1;
    return static_cast<std::size_t>(t);
}

GridSpace GridSpace::refined(std::size_t factor) const
{
    if (factor == 0) throw DomainError("refinement factor must be positive");
    return GridSpace(lo_, hi_, n_ * factor);
}

bool inside_open(double value, const Ball& ball, double width) noexcept
{
    const double r = ball.radius - kBoundaryTolerance * width;
    return r > 0.0 && value > ball.center - r && value < ball.center + r;
}

IndexRange ball_cells(const GridSpace& space, const Ball& ball)
{
    if (!(ball.radius > 0.0)) throw DomainError("ball radius must be positive");
    const double w = space.width();
    const double n = static_cast<double>(space.n_cells());

    // Superset estimate in index coordinates, then trim with the exact test.
    const double lo_idx = std::floor((ball.center - ball.radius - space.lo()) / w - 0.5) - 1.0;
    const double hi_idx = std::ceil((ball.center + ball.radius - space.lo()) / w - 0.5) + 2.0;
    if (hi_idx <= 0.0 || lo_idx >= n) return {};
    std::size_t first = lo_idx <= 0.0 ? 0 : static_cast<std::size_t>(lo_idx);
    std::size_t last = hi_idx >= n ? space.n_cells() : static_cast<std::size_t>(hi_idx);

    while (first < last && !inside_open(space.center(first), ball, w)) ++first;
    while (last > first && !inside_open(space.center(last - 1), ball, w)) --last;
    return {first, last};
}

double measure(const GridSpace& space, IndexRange cells) noexcept
{
    return static_cast<double>(cells.size()) * space.width();
}

double measure(const GridSpace& space, std::span<const std::size_t> cells) noexcept
{
    return static_cast<double>(cells.size()) * space.width();
}

double clipped_diameter(const GridSpace& space, const Ball& ball) noexcept
{
    const double a = std::max(space.lo(), ball.center - ball.radius);
    const double b = std::min(space.hi(), ball.center + ball.radius);
    return std::max(0.0, b - a);
}

std::vector<Ball> ball_family(const GridSpace& space, std::size_t n_centers, std::span<const double> radii)
{
    if (n_centers == 0) throw DomainError("ball family needs at least one center");
    std::vector<double> sorted(radii.begin(), radii.end());
    for (double r : sorted) {
        if (!(r > 0.0)) throw DomainError("ball family radii must be positive");
    }
    std::sort(sorted.begin(), sorted.end());

    std::vector<Ball> family;
    family.reserve(n_centers * sorted.size());
    const double step = space.total_measure() / static_cast<double>(n_centers + 1);
    for (std::size_t k = 1; k <= n_centers; ++k) {
        const double c = space.lo() + static_cast<double>(k) * step;
        for (double r : sorted) family.push_back({c, r});
    }
    return family;
}

std::vector<Ball> interior_balls(const GridSpace& space, std::span<const Ball> family, double factor)
{
    std::vector<Ball> out;
    for (const Ball& b : family) {
        const double reach = factor * b.radius;
        if (b.center - reach >= space.lo() && b.center + reach <= space.hi()) out.push_back(b);
    }
    return out;
}

std::pair<CellSet, CellSet> split_cells(std::span<const std::size_t> cells)
{
    if (cells.size() < 2) throw DomainError("a single cell is indivisible at this resolution");
    const auto mid = cells.begin() + static_cast<std::ptrdiff_t>(cells.size() / 2);
    return {CellSet(cells.begin(), mid), CellSet(mid, cells.end())};
}

GeometryReport geometry_report(const GridSpace& space, std::span<const Ball> family)
{
    if (family.empty()) throw DomainError("geometry report needs a non-empty ball family");

    GeometryReport report;
    report.ball_family_size = family.size();

    std::vector<double> log_diam;
    std::vector<double> log_mu;
    log_diam.reserve(family.size());
    log_mu.reserve(family.size());

    double doubling = 0.0;
    for (const Ball& b : family) {
        const double mu = measure(space, ball_cells(space, b));
        if (!(mu > 0.0)) {
            throw DomainError("ball B(" + std::to_string(b.center) + ", " + std::to_string(b.radius) +
                              ") has zero measure");
        }
        const double mu2 = measure(space, ball_cells(space, Ball{b.center, 2.0 * b.radius}));
        doubling = std::max(doubling, mu2 / mu);
        log_diam.push_back(std::log(clipped_diameter(space, b)));
        log_mu.push_back(std::log(mu));
    }
    report.doubling_constant = doubling;

    const double m = static_cast<double>(family.size());
    double mean_t = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < log_diam.size(); ++i) {
        mean_t += log_diam[i];
        mean_y += log_mu[i];
    }
    mean_t /= m;
    mean_y /= m;
    double var = 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < log_diam.size(); ++i) {
        const double dt = log_diam[i] - mean_t;
        var += dt * dt;
        cov += dt * (log_mu[i] - mean_y);
    }
    report.ahlfors_Q = var > 1e-24 ? cov / var : 0.0;

    double c_lo = std::numeric_limits<double>::infinity();
    double c_hi = 0.0;
    for (std::size_t i = 0; i < log_diam.size(); ++i) {
        const double c = std::exp(log_mu[i] - report.ahlfors_Q * log_diam[i]);
        c_lo = std::min(c_lo, c);
        c_hi = std::max(c_hi, c);
    }
    report.ahlfors_c_lower = c_lo;
    report.ahlfors_c_upper = c_hi;
    return report;
}

} // namespace varlp
