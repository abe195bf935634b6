#pragma once

#include <cstdint>
#include <random>

#include "varlp/modular.hpp"
#include "varlp/space.hpp"

namespace varlp {

/// mt19937_64 with doubles taken from the top 53 bits, so a seed fixes the
/// sequence across platforms and reimplementations.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1).
    [[nodiscard]] double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    [[nodiscard]] double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Uniform integer in [0, n).
    [[nodiscard]] std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::mt19937_64 engine_;
};

/// Step function with `pieces` equal runs of cells, values uniform in
/// [lo, hi).
[[nodiscard]] GridFunction random_simple_function(const GridSpace& space, SeededRng& rng, std::size_t pieces,
                                                  double lo, double hi);

} // namespace varlp
