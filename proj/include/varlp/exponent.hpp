#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "varlp/space.hpp"

namespace varlp {

enum class ExponentKind { constant, affine, example_ex1, table, sampled };

/// Closed-form origin of a sampled exponent, kept so it can be resampled on a
/// refined grid. For `constant` the value is `a`; for `affine` p(x) = a + b*x.
struct ExponentForm {
    ExponentKind kind = ExponentKind::sampled;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> table;
};

/// The piecewise exponent 1 + x^2 on (0, 1), 1 + 1/(2x - 1) on [1, inf).
[[nodiscard]] double example_ex1_value(double x) noexcept;

/**
 * A variable exponent p(.) sampled at the cell centers of a GridSpace.
 *
 * Values must be finite and >= 1. Construction rejects anything else with
 * DomainError("exponent below 1") or DomainError("exponent not finite").
 */
class ExponentField {
public:
    ExponentField(GridSpace space, std::vector<double> values, ExponentForm form = {});

    static ExponentField constant(const GridSpace& space, double value);
    static ExponentField affine(const GridSpace& space, double a, double b);
    static ExponentField example_ex1(const GridSpace& space);
    /// Step function taking table[k] on the k-th of table.size() equal
    /// subintervals of [lo, hi]. Resolution independent.
    static ExponentField table(const GridSpace& space, std::vector<double> table);
    static ExponentField from_function(const GridSpace& space, const std::function<double(double)>& p);

    /// Same closed form sampled on another grid. Sampled fields without a
    /// form throw DomainError.
    [[nodiscard]] ExponentField resampled(const GridSpace& space) const;

    [[nodiscard]] const GridSpace& space() const noexcept { return space_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const ExponentForm& form() const noexcept { return form_; }

    /// p+ and p- over the whole space.
    [[nodiscard]] double p_plus() const noexcept { return p_plus_; }
    [[nodiscard]] double p_minus() const noexcept { return p_minus_; }

private:
    GridSpace space_;
    std::vector<double> values_;
    ExponentForm form_;
    double p_plus_ = 1.0;
    double p_minus_ = 1.0;
};

/// esssup / essinf of p over a cell set; grid max / min. Empty sets throw
/// EmptyRegionError.
[[nodiscard]] double p_plus(const ExponentField& p, IndexRange cells);
[[nodiscard]] double p_plus(const ExponentField& p, std::span<const std::size_t> cells);
[[nodiscard]] double p_minus(const ExponentField& p, IndexRange cells);
[[nodiscard]] double p_minus(const ExponentField& p, std::span<const std::size_t> cells);

/// Omega_1 = {p = 1}.
[[nodiscard]] CellSet omega_one(const ExponentField& p);

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

/// Conjugate exponent p' = p/(p-1), +inf on Omega_1.
struct ConjugateExponent {
    GridSpace space;
    std::vector<double> values;

    [[nodiscard]] bool is_infinite(std::size_t i) const noexcept { return values[i] == kInfiniteExponent; }
    [[nodiscard]] CellSet infinite_cells() const;
    /// Throws DomainError if any value is infinite.
    [[nodiscard]] ExponentField to_field() const;
};

[[nodiscard]] ConjugateExponent conjugate(const ExponentField& p);

inline constexpr std::size_t kDefaultPairSubsample = 2000;

/**
 * Local log-Hoelder constant: max over cell pairs with 0 < d < 1/2 of
 * |p(x) - p(y)| * (-log d). Above `subsample_threshold` cells the sweep runs
 * on a uniform subsample of about that many cells. No qualifying pairs -> 0.
 */
[[nodiscard]] double lh0_constant(const ExponentField& p, std::size_t subsample_threshold = kDefaultPairSubsample);

struct LhInfFit {
    double p_inf = 1.0;
    double k_inf = 0.0;
};

/**
 * Log-Hoelder decay constant at infinity with base point x0:
 * minimizes max_x |p(x) - q| * log(e + |x - x0|) over q in [p-, p+] by
 * ternary search (the objective is convex in q). With an override the
 * constant is evaluated at the given p_inf instead.
 */
[[nodiscard]] LhInfFit lhinf_constant(const ExponentField& p, double base_point,
                                      std::optional<double> p_inf_override = std::nullopt);

struct RegularityOptions {
    double base_point = 0.0;
    std::optional<double> p_inf;
    double cap = 100.0;  ///< K0 and K_inf above this count as non-regular
    std::size_t subsample_threshold = kDefaultPairSubsample;
};

struct RegularityReport {
    double K0 = 0.0;
    double K_inf = 0.0;
    double p_inf = 1.0;
    double base_point = 0.0;
    bool in_LH0 = false;
    bool in_LHinf = false;
};

[[nodiscard]] RegularityReport regularity_report(const ExponentField& p, const RegularityOptions& options = {});

} // namespace varlp
