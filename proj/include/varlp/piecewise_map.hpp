#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "varlp/space.hpp"

namespace varlp {

enum class Monotonicity { increasing, decreasing, flat };

/// One monotone piece of a map on [a, b]. Flat branches are constant and make
/// the map singular.
struct Branch {
    double a = 0.0;
    double b = 0.0;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    /// Optional closed-form inverse on the branch image; bisection otherwise.
    std::function<double(double)> inverse;
    Monotonicity direction = Monotonicity::increasing;

    [[nodiscard]] double image_min() const { return std::min(value(a), value(b)); }
    [[nodiscard]] double image_max() const { return std::max(value(a), value(b)); }
};

/// Affine segment slope*x + intercept on [from, to]; the config-level branch.
struct AffineSegment {
    double from = 0.0;
    double to = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
};

/**
 * The inducing map phi: [lo, hi] -> [lo, hi] as an ordered list of branches
 * partitioning the domain, plus its values at the cell centers.
 *
 * Construction checks that the branches tile [lo, hi], that each branch is
 * consistent with its declared direction, and that the map stays in the
 * domain (DomainError "map leaves domain" otherwise).
 */
class PiecewiseMap {
public:
    PiecewiseMap(GridSpace space, std::vector<Branch> branches, std::string description);

    static PiecewiseMap identity(const GridSpace& space);
    /// phi(x) = a*x + b; a = 0 gives a single flat branch.
    static PiecewiseMap affine(const GridSpace& space, double a, double b);
    /// phi(x) = x^k, k > 0, on a domain inside [0, 1].
    static PiecewiseMap power(const GridSpace& space, double k);
    /// phi(x) = clamp(a*x + b, y_min, y_max): flat where clamped.
    static PiecewiseMap clamp_affine(const GridSpace& space, double a, double b, double y_min, double y_max);
    static PiecewiseMap piecewise_affine(const GridSpace& space, std::span<const AffineSegment> segments);

    [[nodiscard]] const GridSpace& space() const noexcept { return space_; }
    [[nodiscard]] std::span<const Branch> branches() const noexcept { return branches_; }
    [[nodiscard]] std::span<const double> images() const noexcept { return images_; }
    [[nodiscard]] double image(std::size_t i) const noexcept { return images_[i]; }
    /// Cell containing phi(center_i).
    [[nodiscard]] std::size_t image_cell(std::size_t i) const noexcept { return space_.cell_of(images_[i]); }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

    [[nodiscard]] std::size_t branch_index(double x) const noexcept;
    [[nodiscard]] double evaluate(double x) const;
    /// x in branch k with phi(x) = y; y must lie in the branch image.
    [[nodiscard]] double branch_inverse(std::size_t k, double y) const;

    /// Images sorted ascending, for counting preimages.
    [[nodiscard]] std::span<const double> sorted_images() const noexcept { return sorted_images_; }

private:
    GridSpace space_;
    std::vector<Branch> branches_;
    std::string description_;
    std::vector<double> images_;
    std::vector<double> sorted_images_;
};

} // namespace varlp
