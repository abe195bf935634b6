#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace varlp {

/// Half-open range [first, last) of cell indices.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;

    [[nodiscard]] std::size_t size() const noexcept { return last > first ? last - first : 0; }
    [[nodiscard]] bool empty() const noexcept { return size() == 0; }
    [[nodiscard]] bool contains(std::size_t i) const noexcept { return i >= first && i < last; }

    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Sorted, duplicate-free list of cell indices.
using CellSet = std::vector<std::size_t>;

IndexRange intersect(IndexRange a, IndexRange b) noexcept;

/**
 * Uniform discretization of the interval [lo, hi] with Lebesgue measure.
 *
 * Cell i covers [lo + i*width, lo + (i+1)*width) and is represented by its
 * midpoint. Every function on the space is constant per cell, so the measure
 * of a cell set is exactly (number of cells) * width.
 */
class GridSpace {
public:
    GridSpace(double lo, double hi, std::size_t n_cells);

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] std::size_t n_cells() const noexcept { return n_; }
    [[nodiscard]] double width() const noexcept { return width_; }
    [[nodiscard]] double total_measure() const noexcept { return hi_ - lo_; }

    [[nodiscard]] double center(std::size_t i) const noexcept
    {
        return lo_ + (static_cast<double>(i) + 0.5) * width_;
    }
    [[nodiscard]] std::vector<double> centers() const;

    /// Index of the cell containing y; points outside [lo, hi] clamp to the
    /// boundary cell.
    [[nodiscard]] std::size_t cell_of(double y) const noexcept;

    /// Same interval refined by an integer factor.
    [[nodiscard]] GridSpace refined(std::size_t factor) const;

    friend bool operator==(const GridSpace&, const GridSpace&) = default;

private:
    double lo_;
    double hi_;
    std::size_t n_;
    double width_;
};

/// Open ball B(center, radius) in the Euclidean metric of the line.
struct Ball {
    double center = 0.0;
    double radius = 0.0;

    friend bool operator==(const Ball&, const Ball&) = default;
};

// Points within this many cell widths of a ball's boundary count as on the
// boundary, hence outside the open ball. Keeps membership stable against
// rounding in center and image computations.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Open-ball membership test shared by cell and preimage queries.
[[nodiscard]] bool inside_open(double value, const Ball& ball, double width) noexcept;

/// Cells whose centers lie in the open ball. Always a contiguous range.
[[nodiscard]] IndexRange ball_cells(const GridSpace& space, const Ball& ball);

[[nodiscard]] double measure(const GridSpace& space, IndexRange cells) noexcept;
[[nodiscard]] double measure(const GridSpace& space, std::span<const std::size_t> cells) noexcept;

/// Length of the ball intersected with [lo, hi].
[[nodiscard]] double clipped_diameter(const GridSpace& space, const Ball& ball) noexcept;

/**
 * Cartesian product of n_centers equispaced interior centers
 * lo + k*(hi-lo)/(n_centers+1), k = 1..n_centers, with the given radii.
 * Ordered center-major, then radius ascending.
 */
[[nodiscard]] std::vector<Ball> ball_family(const GridSpace& space, std::size_t n_centers,
                                            std::span<const double> radii);

/// Balls whose `factor`-dilate stays inside [lo, hi].
[[nodiscard]] std::vector<Ball> interior_balls(const GridSpace& space, std::span<const Ball> family,
                                               double factor = 2.0);

/// Splits a cell set with at least two cells into two non-empty halves.
/// A single cell is the resolution floor and cannot be split.
[[nodiscard]] std::pair<CellSet, CellSet> split_cells(std::span<const std::size_t> cells);

struct GeometryReport {
    double doubling_constant = 1.0;
    double ahlfors_Q = 0.0;
    double ahlfors_c_lower = 0.0;
    double ahlfors_c_upper = 0.0;
    std::size_t ball_family_size = 0;
};

/**
 * Doubling constant max mu(2B)/mu(B) and a log-log least-squares fit
 * mu(B) ~ diam(B)^Q over the family. c_lower and c_upper are the extreme
 * ratios mu(B)/diam(B)^Q. If all diameters coincide the fit is degenerate and
 * the minimum-norm slope Q = 0 is reported.
 *
 * Throws DomainError on an empty family or a ball of zero measure.
 */
[[nodiscard]] GeometryReport geometry_report(const GridSpace& space, std::span<const Ball> family);

} // namespace varlp
