#include "varlp/operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "varlp/error.hpp"
#include "varlp/format.hpp"

namespace varlp {

GridFunction compose(const GridFunction& f, const PiecewiseMap& phi)
{
    if (!(f.space() == phi.space())) throw DomainError("function and map live on different spaces");
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[phi.image_cell(i)];
    return GridFunction(f.space(), std::move(v));
}

ExponentField pull_exponent(const ExponentField& p, const PiecewiseMap& phi)
{
    if (!(p.space() == phi.space())) throw DomainError("exponent and map live on different spaces");
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = p[phi.image_cell(i)];
    return ExponentField(p.space(), std::move(v));
}

GridFunction multiply(const GridFunction& f, const GridFunction& u)
{
    if (!(f.space() == u.space())) throw DomainError("multiplying functions on different spaces");
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * u[i];
    return GridFunction(f.space(), std::move(v));
}

GridFunction multiplier_symbol(const PushforwardProfile& profile, const ExponentField& p)
{
    if (!(profile.space == p.space())) throw DomainError("profile and exponent live on different spaces");
    if (std::isinf(profile.u_sup)) throw DomainError("multiplier symbol is unbounded");
    std::vector<double> v(p.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (profile.u_values[i] > 0.0) v[i] = std::pow(profile.u_values[i], 1.0 / p[i]);
    }
    return GridFunction(p.space(), std::move(v));
}

double change_of_variables_residual(const GridFunction& f, const PiecewiseMap& phi, const ExponentField& p,
                                    const PushforwardProfile& profile)
{
    if (!(profile.space == p.space())) throw DomainError("profile and exponent live on different spaces");
    const double lhs = modular(compose(f, phi), pull_exponent(p, phi));
    double rhs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a == 0.0 || profile.u_values[i] == 0.0) continue;
        rhs += std::pow(a, p[i]) * profile.u_values[i];
    }
    rhs *= f.space().width();
    return std::abs(lhs - rhs);
}

GridFunction normalized_ball_indicator(const Ball& ball, const ExponentField& p)
{
    const GridSpace& s = p.space();
    const IndexRange cells = ball_cells(s, ball);
    const double mu = measure(s, cells);
    if (!(mu > 0.0)) throw DomainError("normalized indicator of a zero-measure ball");
    std::vector<double> v(s.n_cells(), 0.0);
    for (std::size_t i = cells.first; i < cells.last; ++i) v[i] = std::pow(mu, -1.0 / p[i]);
    return GridFunction(s, std::move(v));
}

OperatorNormReport operator_norm_report(const PiecewiseMap& phi, const ExponentField& p,
                                        const PushforwardProfile& profile, std::span<const Ball> family,
                                        std::span<const GridFunction> extra)
{
    OperatorNormReport rep;
    rep.upper_bound = u_p_sup(profile, p);
    rep.family_size = family.size() + extra.size();

    const ExponentField p_phi = pull_exponent(p, phi);
    double best = 0.0;
    std::string witness = "none";
    auto consider = [&](const GridFunction& f, const std::string& label) {
        const double nf = luxemburg_norm(f, p);
        if (!(nf > 0.0)) return;
        const double ratio = luxemburg_norm(compose(f, phi), p_phi) / nf;
        if (ratio > best) {
            best = ratio;
            witness = label;
        }
    };
    for (const Ball& b : family) {
        if (ball_cells(p.space(), b).empty()) continue;
        consider(normalized_ball_indicator(b, p), "ball(" + format_number(b.center) + "," + format_number(b.radius) + ")");
    }
    for (std::size_t k = 0; k < extra.size(); ++k) consider(extra[k], "extra[" + std::to_string(k) + "]");
    rep.lower_bound = best;
    rep.witness = witness;
    return rep;
}

} // namespace varlp
