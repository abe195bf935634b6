#include "varlp/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varlp/error.hpp"

namespace varlp {

GridFunction::GridFunction(GridSpace space, std::vector<double> values) : space_(space), values_(std::move(values))
{
    if (values_.size() != space_.n_cells()) {
        throw DomainError("function has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(space_.n_cells()) + " cells");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw DomainError("function value not finite at cell " + std::to_string(i));
    }
}

GridFunction GridFunction::zero(const GridSpace& space) { return constant(space, 0.0); }

GridFunction GridFunction::constant(const GridSpace& space, double value)
{
    return GridFunction(space, std::vector<double>(space.n_cells(), value));
}

GridFunction GridFunction::from_function(const GridSpace& space, const std::function<double(double)>& f)
{
    std::vector<double> v(space.n_cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(space.center(i));
    return GridFunction(space, std::move(v));
}

GridFunction GridFunction::indicator(const GridSpace& space, IndexRange cells, double value)
{
    std::vector<double> v(space.n_cells(), 0.0);
    for (std::size_t i = cells.first; i < cells.last && i < v.size(); ++i) v[i] = value;
    return GridFunction(space, std::move(v));
}

GridFunction GridFunction::indicator(const GridSpace& space, std::span<const std::size_t> cells, double value)
{
    std::vector<double> v(space.n_cells(), 0.0);
    for (std::size_t i : cells) v.at(i) = value;
    return GridFunction(space, std::move(v));
}

bool GridFunction::is_zero() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction GridFunction::scaled(double c) const
{
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return GridFunction(space_, std::move(v));
}

GridFunction operator+(const GridFunction& f, const GridFunction& g)
{
    if (!(f.space() == g.space())) throw DomainError("adding functions on different spaces");
    std::vector<double> v(f.values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += g.values_[i];
    return GridFunction(f.space(), std::move(v));
}

namespace {

void require_same_space(const GridFunction& f, const ExponentField& p)
{
    if (!(f.space() == p.space())) throw DomainError("function and exponent live on different spaces");
}

double power_sum(std::span<const double> f, std::span<const double> p, double inv_eta, double width)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]) * inv_eta;
        if (a == 0.0) continue;
        sum += std::pow(a, p[i]);
    }
    return sum * width;
}

} // namespace

double modular(const GridFunction& f, const ExponentField& p)
{
    require_same_space(f, p);
    const double v = power_sum(f.values(), p.values(), 1.0, f.space().width());
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

ModularValue modular_checked(const GridFunction& f, const ExponentField& p)
{
    const double v = modular(f, p);
    return {v, std::isinf(v)};
}

double modular_scaled(const GridFunction& f, const ExponentField& p, double eta)
{
    require_same_space(f, p);
    const double v = power_sum(f.values(), p.values(), 1.0 / eta, f.space().width());
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

NormTrace luxemburg_norm_trace(const GridFunction& f, const ExponentField& p, double tol)
{
    require_same_space(f, p);
    if (!(tol > 0.0)) throw DomainError("norm tolerance must be positive");

    NormTrace trace;
    if (f.is_zero()) return trace;

    auto rho = [&](double eta) { return modular_scaled(f, p, eta); };

    // rho(f/eta) <= 1 at `hi`, > 1 at `lo`.
    double lo = 1.0;
    double hi = 1.0;
    double r = rho(1.0);
    trace.bracket.emplace_back(1.0, r);
    constexpr int kMaxExpansion = 2200;
    if (r <= 1.0) {
        int k = 0;
        for (;;) {
            lo = hi * 0.5;
            r = rho(lo);
            trace.bracket.emplace_back(lo, r);
            if (r > 1.0) break;
            hi = lo;
            if (++k > kMaxExpansion) throw ConvergenceError("norm bracket expansion did not terminate");
        }
    } else {
        int k = 0;
        for (;;) {
            hi = lo * 2.0;
            r = rho(hi);
            trace.bracket.emplace_back(hi, r);
            if (r <= 1.0) break;
            lo = hi;
            if (++k > kMaxExpansion) throw ConvergenceError("norm bracket expansion did not terminate");
        }
    }

    while (hi - lo > tol * hi) {
        if (++trace.bisection_steps > kMaxBisectionSteps) {
            throw ConvergenceError("Luxemburg norm bisection exceeded " + std::to_string(kMaxBisectionSteps) +
                                   " steps");
        }
        const double mid = 0.5 * (lo + hi);
        if (rho(mid) <= 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    trace.norm = 0.5 * (lo + hi);
    return trace;
}

double luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol)
{
    return luxemburg_norm_trace(f, p, tol).norm;
}

NormModularCheck norm_modular_check(const GridFunction& f, const ExponentField& p)
{
    NormModularCheck c;
    c.rho = modular(f, p);
    const double n = luxemburg_norm(f, p, 1e-13);
    const double a = std::pow(n, p.p_plus());
    const double b = std::pow(n, p.p_minus());
    c.lhs = std::min(a, b);
    c.rhs = std::max(a, b);
    constexpr double slack = 1e-9;
    c.pass = c.lhs <= c.rho + slack * std::max(1.0, c.rho) && c.rho <= c.rhs + slack * std::max(1.0, c.rhs);
    return c;
}

HolderPairing holder_pairing(const GridFunction& f, const GridFunction& g, const ExponentField& p)
{
    require_same_space(f, p);
    if (!(g.space() == p.space())) throw DomainError("function and exponent live on different spaces");
    if (!(p.p_minus() > 1.0)) throw DomainError("Hoelder pairing needs p > 1 everywhere (conjugate is infinite)");

    const ExponentField q = conjugate(p).to_field();
    HolderPairing h;
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i] * g[i]);
    h.integral = s * f.space().width();
    h.bound = 2.0 * luxemburg_norm(f, p) * luxemburg_norm(g, q);
    h.pass = h.integral <= h.bound + 1e-9;
    return h;
}

} // namespace varlp
