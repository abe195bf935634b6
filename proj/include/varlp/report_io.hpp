#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "varlp/compatibility.hpp"
#include "varlp/exponent.hpp"
#include "varlp/format.hpp"
#include "varlp/operators.hpp"
#include "varlp/pushforward.hpp"
#include "varlp/space.hpp"
#include "varlp/theorems.hpp"

namespace varlp {

using Json = nlohmann::json;

/// Finite values as numbers, non-finite ones as the strings "inf", "-inf",
/// "nan".
[[nodiscard]] Json json_number(double x);

[[nodiscard]] Json to_json(const GeometryReport& r);
[[nodiscard]] Json to_json(const RegularityReport& r);
[[nodiscard]] Json to_json(const CompatibilityReport& r);
[[nodiscard]] Json to_json(const PushforwardProfile& r);
[[nodiscard]] Json to_json(const OperatorNormReport& r);
[[nodiscard]] Json to_json(const DiagnosticReport& r);

/// RFC 4180 quoting when the field needs it.
[[nodiscard]] std::string csv_field(const std::string& s);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);
void write_csv(std::ostream& out, std::span<const std::string> columns,
               std::span<const std::vector<double>> rows);

} // namespace varlp
