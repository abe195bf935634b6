#include "varlp/piecewise_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varlp/error.hpp"

namespace varlp {

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

Branch affine_branch(double a, double b, double slope, double intercept)
{
    Branch br;
    br.a = a;
    br.b = b;
    br.value = [slope, intercept](double x) { return slope * x + intercept; };
    br.derivative = [slope](double) { return slope; };
    if (slope == 0.0) {
        br.direction = Monotonicity::flat;
    } else {
        br.direction = slope > 0.0 ? Monotonicity::increasing : Monotonicity::decreasing;
        br.inverse = [slope, intercept](double y) { return (y - intercept) / slope; };
    }
    return br;
}

} // namespace

PiecewiseMap::PiecewiseMap(GridSpace space, std::vector<Branch> branches, std::string description)
    : space_(space), branches_(std::move(branches)), description_(std::move(description))
{
    if (branches_.empty()) throw DomainError("map needs at least one branch");
    const double scale = std::max({1.0, std::abs(space_.lo()), std::abs(space_.hi())});
    const double eps = 1e-12 * scale;

    if (std::abs(branches_.front().a - space_.lo()) > eps || std::abs(branches_.back().b - space_.hi()) > eps) {
        throw DomainError("map branches must cover [lo, hi]");
    }
    for (std::size_t k = 0; k < branches_.size(); ++k) {
        const Branch& br = branches_[k];
        if (!br.value || !(br.b > br.a)) throw DomainError("map branch " + std::to_string(k) + " is malformed");
        if (br.direction != Monotonicity::flat && !br.derivative) {
            throw DomainError("map branch " + std::to_string(k) + " needs a derivative");
        }
        if (k + 1 < branches_.size() && std::abs(br.b - branches_[k + 1].a) > eps) {
            throw DomainError("map branches must be contiguous");
        }
        const double va = br.value(br.a);
        const double vb = br.value(br.b);
        const bool ok = (br.direction == Monotonicity::increasing && vb > va) ||
                        (br.direction == Monotonicity::decreasing && vb < va) ||
                        (br.direction == Monotonicity::flat && va == vb);
        if (!ok) throw DomainError("map branch " + std::to_string(k) + " contradicts its monotone direction");
        if (std::min(va, vb) < space_.lo() - eps || std::max(va, vb) > space_.hi() + eps) {
            throw DomainError("map leaves domain: branch " + std::to_string(k) + " has image [" +
                              num(std::min(va, vb)) + ", " + num(std::max(va, vb)) + "] outside [" +
                              num(space_.lo()) + ", " + num(space_.hi()) + "]");
        }
    }

    images_.resize(space_.n_cells());
    for (std::size_t i = 0; i < images_.size(); ++i) {
        const double y = evaluate(space_.center(i));
        images_[i] = std::clamp(y, space_.lo(), space_.hi());
    }
    sorted_images_ = images_;
    std::sort(sorted_images_.begin(), sorted_images_.end());
}

PiecewiseMap PiecewiseMap::identity(const GridSpace& space)
{
    Branch br;
    br.a = space.lo();
    br.b = space.hi();
    br.value = [](double x) { return x; };
    br.derivative = [](double) { return 1.0; };
    br.inverse = [](double y) { return y; };
    br.direction = Monotonicity::increasing;
    return PiecewiseMap(space, {br}, "identity");
}

PiecewiseMap PiecewiseMap::affine(const GridSpace& space, double a, double b)
{
    return PiecewiseMap(space, {affine_branch(space.lo(), space.hi(), a, b)},
                        "affine(a=" + num(a) + ", b=" + num(b) + ")");
}

PiecewiseMap PiecewiseMap::power(const GridSpace& space, double k)
{
    if (!(k > 0.0)) throw DomainError("power map needs k > 0");
    if (space.lo() < 0.0) throw DomainError("power map needs a domain inside [0, 1]");
    Branch br;
    br.a = space.lo();
    br.b = space.hi();
    br.value = [k](double x) { return std::pow(x, k); };
    br.derivative = [k](double x) { return k * std::pow(x, k - 1.0); };
    br.inverse = [k](double y) { return std::pow(y, 1.0 / k); };
    br.direction = Monotonicity::increasing;
    return PiecewiseMap(space, {br}, "power(k=" + num(k) + ")");
}

PiecewiseMap PiecewiseMap::clamp_affine(const GridSpace& space, double a, double b, double y_min, double y_max)
{
    if (!(y_max >= y_min)) throw DomainError("clamp_affine needs y_min <= y_max");
    if (a == 0.0) {
        return PiecewiseMap(space, {affine_branch(space.lo(), space.hi(), 0.0, std::clamp(b, y_min, y_max))},
                            "clamp_affine");
    }
    // Breakpoints where a*x + b crosses the clamp levels, in domain order.
    double x1 = (y_min - b) / a;
    double x2 = (y_max - b) / a;
    if (x1 > x2) std::swap(x1, x2);
    const double left_level = a > 0.0 ? y_min : y_max;
    const double right_level = a > 0.0 ? y_max : y_min;

    std::vector<Branch> branches;
    const double lo = space.lo();
    const double hi = space.hi();
    const double c1 = std::clamp(x1, lo, hi);
    const double c2 = std::clamp(x2, lo, hi);
    if (c1 > lo) branches.push_back(affine_branch(lo, c1, 0.0, left_level));
    if (c2 > c1) branches.push_back(affine_branch(c1, c2, a, b));
    if (hi > c2) branches.push_back(affine_branch(c2, hi, 0.0, right_level));
    return PiecewiseMap(space, std::move(branches),
                        "clamp_affine(a=" + num(a) + ", b=" + num(b) + ", min=" + num(y_min) + ", max=" + num(y_max) + ")");
}

PiecewiseMap PiecewiseMap::piecewise_affine(const GridSpace& space, std::span<const AffineSegment> segments)
{
    std::vector<Branch> branches;
    for (const AffineSegment& s : segments) branches.push_back(affine_branch(s.from, s.to, s.slope, s.intercept));
    return PiecewiseMap(space, std::move(branches), "piecewise(" + std::to_string(segments.size()) + " segments)");
}

std::size_t PiecewiseMap::branch_index(double x) const noexcept
{
    for (std::size_t k = 0; k + 1 < branches_.size(); ++k) {
        if (x <= branches_[k].b) return k;
    }
    return branches_.size() - 1;
}

double PiecewiseMap::evaluate(double x) const
{
    return branches_[branch_index(x)].value(x);
}

double PiecewiseMap::branch_inverse(std::size_t k, double y) const
{
    const Branch& br = branches_.at(k);
    if (br.direction == Monotonicity::flat) throw DomainError("flat branch has no inverse");
    if (br.inverse) return std::clamp(br.inverse(y), br.a, br.b);

    double lo = br.a;
    double hi = br.b;
    const bool inc = br.direction == Monotonicity::increasing;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = br.value(mid);
        if ((v < y) == inc) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace varlp
