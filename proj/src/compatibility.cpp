#include "varlp/compatibility.hpp"

#include <algorithm>
#include <limits>

#include "varlp/error.hpp"
#include "varlp/pushforward.hpp"

namespace varlp {

CompatibilityReport compatibility_report(const ExponentField& p, const PiecewiseMap& phi,
                                         std::span<const Ball> family, const RegularityOptions& options)
{
    if (!(p.space() == phi.space())) throw DomainError("exponent and map live on different spaces");

    CompatibilityReport rep;
    rep.family_size = family.size();
    rep.bracket_plus = std::numeric_limits<double>::infinity();
    rep.bracket_minus = 0.0;
    for (const Ball& b : family) {
        const IndexRange cells = ball_cells(p.space(), b);
        const CellSet pre = preimage_cells(phi, b);
        if (cells.empty() || pre.empty()) {
            ++rep.skipped;
            continue;
        }
        BallCompatibility bc{b, p_plus(p, cells), p_plus(p, pre), p_minus(p, cells), p_minus(p, pre)};
        rep.bracket_plus = std::min(rep.bracket_plus, bc.p_plus_ball / bc.p_plus_pre);
        rep.bracket_minus = std::max(rep.bracket_minus, bc.p_minus_ball / bc.p_minus_pre);
        rep.per_ball.push_back(bc);
    }
    if (rep.per_ball.empty()) throw EmptyRegionError("every ball in the family has an empty preimage");

    rep.regularity = regularity_report(p, options);
    rep.in_P_phi_plus = rep.bracket_plus >= 1.0 && rep.regularity.in_LH0 && rep.regularity.in_LHinf;
    rep.in_P_phi_minus = rep.bracket_minus <= 1.0 && rep.regularity.in_LH0;
    rep.bracket_plus_le_one = rep.bracket_plus <= 1.0;
    return rep;
}

} // namespace varlp
