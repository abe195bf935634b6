#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "varlp/exponent.hpp"
#include "varlp/space.hpp"

namespace varlp {

/// A measurable function represented as one finite value per cell.
class GridFunction {
public:
    GridFunction(GridSpace space, std::vector<double> values);

    static GridFunction zero(const GridSpace& space);
    static GridFunction constant(const GridSpace& space, double value);
    static GridFunction from_function(const GridSpace& space, const std::function<double(double)>& f);
    static GridFunction indicator(const GridSpace& space, IndexRange cells, double value = 1.0);
    static GridFunction indicator(const GridSpace& space, std::span<const std::size_t> cells, double value = 1.0);

    [[nodiscard]] const GridSpace& space() const noexcept { return space_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool is_zero() const noexcept;

    [[nodiscard]] GridFunction scaled(double c) const;
    friend GridFunction operator+(const GridFunction& f, const GridFunction& g);

private:
    GridSpace space_;
    std::vector<double> values_;
};

/// rho(f) = sum_i |f_i|^{p_i} * width. Returns +inf on overflow.
[[nodiscard]] double modular(const GridFunction& f, const ExponentField& p);

struct ModularValue {
    double value = 0.0;
    bool overflow = false;
};
[[nodiscard]] ModularValue modular_checked(const GridFunction& f, const ExponentField& p);

/// rho(f / eta) without materializing f / eta.
[[nodiscard]] double modular_scaled(const GridFunction& f, const ExponentField& p, double eta);

inline constexpr double kDefaultNormTolerance = 1e-9;
inline constexpr int kMaxBisectionSteps = 200;

struct NormTrace {
    double norm = 0.0;
    /// (eta, rho(f/eta)) for every bracket-expansion step, in visit order.
    std::vector<std::pair<double, double>> bracket;
    int bisection_steps = 0;
};

/**
 * Luxemburg norm inf{eta > 0 : rho(f/eta) <= 1}.
 *
 * Brackets the root by doubling / halving eta from 1, then bisects until the
 * bracket is below `tol` relative to its upper end and returns its midpoint.
 * The zero function has norm 0. Exceeding kMaxBisectionSteps throws
 * ConvergenceError.
 */
[[nodiscard]] double luxemburg_norm(const GridFunction& f, const ExponentField& p,
                                    double tol = kDefaultNormTolerance);
[[nodiscard]] NormTrace luxemburg_norm_trace(const GridFunction& f, const ExponentField& p,
                                             double tol = kDefaultNormTolerance);

struct NormModularCheck {
    double lhs = 0.0;
    double rho = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// min(|f|^{p+}, |f|^{p-}) <= rho(f) <= max(|f|^{p+}, |f|^{p-}), with p+/p-
/// taken over the whole space and a 1e-9 relative slack.
[[nodiscard]] NormModularCheck norm_modular_check(const GridFunction& f, const ExponentField& p);

struct HolderPairing {
    double integral = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// integral |f g| <= 2 |f|_{p} |g|_{p'}. Needs p > 1 on every cell
/// (DomainError otherwise).
[[nodiscard]] HolderPairing holder_pairing(const GridFunction& f, const GridFunction& g, const ExponentField& p);

} // namespace varlp
