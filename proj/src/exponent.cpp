#include "varlp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "varlp/error.hpp"

namespace varlp {

double example_ex1_value(double x) noexcept
{
    if (x < 1.0) return 1.0 + x * x;
    return 1.0 + 1.0 / (2.0 * x - 1.0);
}

ExponentField::ExponentField(GridSpace space, std::vector<double> values, ExponentForm form)
    : space_(space), values_(std::move(values)), form_(std::move(form))
{
    if (values_.size() != space_.n_cells()) {
        throw DomainError("exponent has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(space_.n_cells()) + " cells");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v)) throw DomainError("exponent not finite at cell " + std::to_string(i));
        if (v < 1.0) {
            throw DomainError("exponent below 1: p = " + std::to_string(v) + " at cell " + std::to_string(i));
        }
    }
    const auto [mn, mx] = std::minmax_element(values_.begin(), values_.end());
    p_minus_ = *mn;
    p_plus_ = *mx;
}

ExponentField ExponentField::constant(const GridSpace& space, double value)
{
    return ExponentField(space, std::vector<double>(space.n_cells(), value),
                         ExponentForm{ExponentKind::constant, value, 0.0, {}});
}

ExponentField ExponentField::affine(const GridSpace& space, double a, double b)
{
    std::vector<double> v(space.n_cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a + b * space.center(i);
    return ExponentField(space, std::move(v), ExponentForm{ExponentKind::affine, a, b, {}});
}

ExponentField ExponentField::example_ex1(const GridSpace& space)
{
    std::vector<double> v(space.n_cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = example_ex1_value(space.center(i));
    return ExponentField(space, std::move(v), ExponentForm{ExponentKind::example_ex1, 0.0, 0.0, {}});
}

ExponentField ExponentField::table(const GridSpace& space, std::vector<double> table)
{
    if (table.empty()) throw DomainError("exponent table is empty");
    const double k = static_cast<double>(table.size());
    std::vector<double> v(space.n_cells());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = std::floor((space.center(i) - space.lo()) / space.total_measure() * k);
        const auto idx = static_cast<std::size_t>(std::clamp(t, 0.0, k - 1.0));
        v[i] = table[idx];
    }
    return ExponentField(space, std::move(v), ExponentForm{ExponentKind::table, 0.0, 0.0, std::move(table)});
}

ExponentField ExponentField::from_function(const GridSpace& space, const std::function<double(double)>& p)
{
    std::vector<double> v(space.n_cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = p(space.center(i));
    return ExponentField(space, std::move(v));
}

ExponentField ExponentField::resampled(const GridSpace& space) const
{
    switch (form_.kind) {
    case ExponentKind::constant: return constant(space, form_.a);
    case ExponentKind::affine: return affine(space, form_.a, form_.b);
    case ExponentKind::example_ex1: return example_ex1(space);
    case ExponentKind::table: return table(space, form_.table);
    case ExponentKind::sampled: break;
    }
    throw DomainError("sampled exponent has no closed form to resample");
}

namespace {

template <typename Indices>
double extreme(const ExponentField& p, const Indices& cells, bool want_max)
{
    bool any = false;
    double best = 0.0;
    for (std::size_t i : cells) {
        const double v = p[i];
        if (!any || (want_max ? v > best : v < best)) best = v;
        any = true;
    }
    if (!any) throw EmptyRegionError("exponent sup/inf over an empty region");
    return best;
}

struct RangeIndices {
    IndexRange r;
    struct It {
        std::size_t i;
        std::size_t operator*() const { return i; }
        It& operator++() { ++i; return *this; }
        bool operator!=(const It& o) const { return i != o.i; }
    };
    It begin() const { return {r.first}; }
    It end() const { return {r.empty() ? r.first : r.last}; }
};

} // namespace

double p_plus(const ExponentField& p, IndexRange cells) { return extreme(p, RangeIndices{cells}, true); }
double p_plus(const ExponentField& p, std::span<const std::size_t> cells) { return extreme(p, cells, true); }
double p_minus(const ExponentField& p, IndexRange cells) { return extreme(p, RangeIndices{cells}, false); }
double p_minus(const ExponentField& p, std::span<const std::size_t> cells) { return extreme(p, cells, false); }

CellSet omega_one(const ExponentField& p)
{
    CellSet out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 1.0) out.push_back(i);
    }
    return out;
}

CellSet ConjugateExponent::infinite_cells() const
{
    CellSet out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (is_infinite(i)) out.push_back(i);
    }
    return out;
}

ExponentField ConjugateExponent::to_field() const
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (is_infinite(i)) throw DomainError("conjugate exponent is infinite at cell " + std::to_string(i));
    }
    return ExponentField(space, values);
}

ConjugateExponent conjugate(const ExponentField& p)
{
    ConjugateExponent out{p.space(), std::vector<double>(p.size())};
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = p[i];
        out.values[i] = v == 1.0 ? kInfiniteExponent : v / (v - 1.0);
    }
    return out;
}

double lh0_constant(const ExponentField& p, std::size_t subsample_threshold)
{
    const GridSpace& s = p.space();
    const std::size_t n = s.n_cells();
    if (n < 2) return 0.0;

    std::size_t stride = 1;
    if (subsample_threshold > 0 && n > subsample_threshold) {
        stride = (n + subsample_threshold - 1) / subsample_threshold;
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);

    double k0 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        const double xa = s.center(idx[a]);
        const double pa = p[idx[a]];
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const double d = s.center(idx[b]) - xa;
            if (!(d < 0.5)) break;
            if (!(d > 0.0)) continue;
            k0 = std::max(k0, std::abs(p[idx[b]] - pa) * -std::log(d));
        }
    }
    return k0;
}

LhInfFit lhinf_constant(const ExponentField& p, double base_point, std::optional<double> p_inf_override)
{
    const GridSpace& s = p.space();
    std::vector<double> weight(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        weight[i] = std::log(std::numbers::e + std::abs(s.center(i) - base_point));
    }
    auto objective = [&](double q) {
        double m = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q) * weight[i]);
        return m;
    };

    if (p_inf_override) return {*p_inf_override, objective(*p_inf_override)};

    double lo = p.p_minus();
    double hi = p.p_plus();
    while (hi - lo > 1e-9) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) <= objective(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double q = 0.5 * (lo + hi);
    return {q, objective(q)};
}

RegularityReport regularity_report(const ExponentField& p, const RegularityOptions& options)
{
    RegularityReport r;
    r.base_point = options.base_point;
    r.K0 = lh0_constant(p, options.subsample_threshold);
    const LhInfFit fit = lhinf_constant(p, options.base_point, options.p_inf);
    r.p_inf = fit.p_inf;
    r.K_inf = fit.k_inf;
    r.in_LH0 = std::isfinite(r.K0) && r.K0 <= options.cap;
    r.in_LHinf = std::isfinite(r.K_inf) && r.K_inf <= options.cap;
    return r;
}

} // namespace varlp
