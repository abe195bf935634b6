#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "varlp/error.hpp"
#include "varlp/exponent.hpp"
#include "varlp/piecewise_map.hpp"
#include "varlp/space.hpp"

namespace varlp::cli {

using Json = nlohmann::json;

/// Parse or validation failure, prefixed with "<origin>:<line>: ".
class ScenarioError : public Error {
public:
    ScenarioError(const std::string& origin, int line, const std::string& message);
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

struct SpaceSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n_cells = 1000;
};

struct ExponentSpec {
    std::string type = "constant";
    double value = 2.0;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> table;
};

struct MapSpec {
    std::string type = "identity";
    double a = 1.0;
    double b = 0.0;
    double k = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<AffineSegment> segments;
};

struct FamilySpec {
    std::size_t n_centers = 10;
    std::vector<double> radii{0.02, 0.04, 0.06};
    std::vector<double> radii_cells;  ///< radii in cell widths, rescaled per level
    bool interior = false;
    std::vector<Ball> balls;          ///< explicit balls, appended
};

struct ProbeSpec {
    std::string name;
    std::string id;
    Json params = Json::object();
    int line = 0;
};

struct Scenario {
    std::string origin;
    std::string name;
    SpaceSpec space;
    ExponentSpec exponent;
    MapSpec map;
    FamilySpec family;
    std::vector<ProbeSpec> probes;
    std::string output = "out";
    std::size_t levels = 1;
    std::size_t refinement_factor = 2;
    std::uint64_t seed = 0;
};

/// Names accepted in the probe list, in listing order.
[[nodiscard]] const std::vector<std::string>& probe_names();
[[nodiscard]] bool is_probe(const std::string& name);

[[nodiscard]] Scenario parse_scenario(const std::filesystem::path& path);
[[nodiscard]] Scenario parse_scenario_text(const std::string& text, const std::string& origin);

/// Objects of a scenario at refinement level k (n_cells * factor^k).
[[nodiscard]] GridSpace build_space(const Scenario& s, std::size_t level);
[[nodiscard]] ExponentField build_exponent(const ExponentSpec& spec, const GridSpace& space);
[[nodiscard]] PiecewiseMap build_map(const MapSpec& spec, const GridSpace& space);
[[nodiscard]] std::vector<Ball> build_family(const FamilySpec& spec, const GridSpace& space);

/// Parses {"type": ...} exponent / map objects; used for probe parameters.
[[nodiscard]] ExponentSpec parse_exponent_spec(const Json& j);
[[nodiscard]] MapSpec parse_map_spec(const Json& j);
[[nodiscard]] FamilySpec parse_family_spec(const Json& j);

} // namespace varlp::cli
