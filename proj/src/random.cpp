#include "varlp/random.hpp"

#include <algorithm>
#include <vector>

#include "varlp/error.hpp"

namespace varlp {

GridFunction random_simple_function(const GridSpace& space, SeededRng& rng, std::size_t pieces, double lo, double hi)
{
    if (pieces == 0) throw DomainError("a simple function needs at least one piece");
    pieces = std::min(pieces, space.n_cells());
    std::vector<double> level(pieces);
    for (double& v : level) v = rng.uniform(lo, hi);
    std::vector<double> v(space.n_cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = level[i * pieces / v.size()];
    return GridFunction(space, std::move(v));
}

} // namespace varlp
