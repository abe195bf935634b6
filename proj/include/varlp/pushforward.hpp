#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "varlp/exponent.hpp"
#include "varlp/piecewise_map.hpp"
#include "varlp/space.hpp"

namespace varlp {

/// Cells i with phi(center_i) in the open ball.
[[nodiscard]] CellSet preimage_cells(const PiecewiseMap& phi, const Ball& ball);

/// mu(phi^{-1}(B)) on the grid; same cells as preimage_cells, counted in
/// O(log n).
[[nodiscard]] double preimage_measure(const PiecewiseMap& phi, const Ball& ball);

struct SingularityWitness {
    std::size_t branch = 0;
    double value = 0.0;             ///< E = {value}, mu(E) = 0
    double preimage_measure = 0.0;  ///< grid measure of phi^{-1}(E) > 0
};

struct NonsingularityResult {
    bool nonsingular = true;
    std::optional<SingularityWitness> witness;
};

/// Non-singular iff no branch is flat. The first flat branch is the witness.
[[nodiscard]] NonsingularityResult nonsingularity_check(const PiecewiseMap& phi);

enum class ProfileMethod { analytic, empirical };

/// Radon-Nikodym derivative u_phi of mu o phi^{-1} at the cell centers.
struct PushforwardProfile {
    GridSpace space;
    std::vector<double> u_values;
    double u_sup = 0.0;  ///< +inf when the density blows up
    std::optional<double> u_p_sup;  ///< sup u^{1/p}, once an exponent is attached
    std::optional<double> cal_U;
    ProfileMethod method = ProfileMethod::analytic;
};

inline constexpr double kDerivativeFloor = 1e-12;

/**
 * u_phi(y) = sum over non-flat branches whose image contains y of
 * 1/|phi'(x_k(y))|, x_k the branch inverse. u_sup is the max over cells; it is
 * +inf if phi' drops below kDerivativeFloor at an inverse of a cell center or
 * at a branch endpoint (the sup over each closed branch image).
 *
 * Throws DomainError for singular maps.
 */
[[nodiscard]] PushforwardProfile radon_nikodym_analytic(const PiecewiseMap& phi);
[[nodiscard]] PushforwardProfile radon_nikodym_analytic(const PiecewiseMap& phi, const ExponentField& p);

/// Ball-ratio estimate mu(phi^{-1}(B(c_i, r))) / mu(B(c_i, r)).
/// Needs radius >= 2 * width.
[[nodiscard]] PushforwardProfile radon_nikodym_empirical(const PiecewiseMap& phi, double radius);

/// ess sup of u^{1/p} with 0^{1/p} = 0; +inf if u_sup is infinite.
[[nodiscard]] double u_p_sup(const PushforwardProfile& profile, const ExponentField& p);

/// max over the family of mu(phi^{-1}(B)) / mu(B). Zero-measure balls throw.
[[nodiscard]] double cal_U(const PiecewiseMap& phi, std::span<const Ball> family);

/// |sum_{i in B} u_i * width - mu(phi^{-1}(B))|.
[[nodiscard]] double pushforward_residual(const PiecewiseMap& phi, const PushforwardProfile& profile,
                                          const Ball& ball);

} // namespace varlp
