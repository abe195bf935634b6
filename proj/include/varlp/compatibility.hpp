#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "varlp/exponent.hpp"
#include "varlp/piecewise_map.hpp"
#include "varlp/space.hpp"

namespace varlp {

struct BallCompatibility {
    Ball ball;
    double p_plus_ball = 0.0;
    double p_plus_pre = 0.0;
    double p_minus_ball = 0.0;
    double p_minus_pre = 0.0;
};

struct CompatibilityReport {
    double bracket_plus = 0.0;   ///< min over balls of p+_B / p+_{phi^-1 B}
    double bracket_minus = 0.0;  ///< max over balls of p-_B / p-_{phi^-1 B}
    std::size_t family_size = 0;
    std::size_t skipped = 0;     ///< balls with an empty cell set or preimage
    bool in_P_phi_plus = false;  ///< bracket_plus >= 1, LH0 and LHinf
    bool in_P_phi_minus = false; ///< bracket_minus <= 1 and LH0
    /// bracket_plus <= 1, the direction the boundedness proof consumes.
    bool bracket_plus_le_one = false;
    RegularityReport regularity;
    std::vector<BallCompatibility> per_ball;
};

/// Throws EmptyRegionError if every ball is skipped.
[[nodiscard]] CompatibilityReport compatibility_report(const ExponentField& p, const PiecewiseMap& phi,
                                                       std::span<const Ball> family,
                                                       const RegularityOptions& options = {});

} // namespace varlp
