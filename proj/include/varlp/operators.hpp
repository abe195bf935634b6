#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "varlp/exponent.hpp"
#include "varlp/modular.hpp"
#include "varlp/piecewise_map.hpp"
#include "varlp/pushforward.hpp"
#include "varlp/space.hpp"

namespace varlp {

/// C_phi f = f o phi by nearest-cell lookup at the grid images.
[[nodiscard]] GridFunction compose(const GridFunction& f, const PiecewiseMap& phi);

/// p_phi = p o phi, same lookup as compose.
[[nodiscard]] ExponentField pull_exponent(const ExponentField& p, const PiecewiseMap& phi);

[[nodiscard]] GridFunction multiply(const GridFunction& f, const GridFunction& u);

/// u^{1/p} with 0^{1/p} = 0; the symbol of the multiplication operator
/// realizing |T_phi|. Throws DomainError if u_sup is infinite.
[[nodiscard]] GridFunction multiplier_symbol(const PushforwardProfile& profile, const ExponentField& p);

/// |rho_{p_phi}(f o phi) - sum_i |f_i|^{p_i} u_i width|.
[[nodiscard]] double change_of_variables_residual(const GridFunction& f, const PiecewiseMap& phi,
                                                  const ExponentField& p, const PushforwardProfile& profile);

/// mu(B)^{-1/p(x)} on the ball cells, 0 elsewhere. Unit Luxemburg norm.
[[nodiscard]] GridFunction normalized_ball_indicator(const Ball& ball, const ExponentField& p);

struct OperatorNormReport {
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    std::string witness;
    std::size_t family_size = 0;
};

/**
 * Bounds on |T_phi : L^p -> L^{p o phi}|. The upper bound is the exact
 * formula ess sup u^{1/p}; the lower bound is the best ratio
 * |T_phi f|_{p_phi} / |f|_p over the normalized ball indicators of the family
 * and the extra functions. Zero-norm test functions are skipped.
 */
[[nodiscard]] OperatorNormReport operator_norm_report(const PiecewiseMap& phi, const ExponentField& p,
                                                      const PushforwardProfile& profile,
                                                      std::span<const Ball> family,
                                                      std::span<const GridFunction> extra = {});

} // namespace varlp
