#pragma once

#include <string>

namespace varlp {

/// Shortest round-trip decimal form of x; "inf", "-inf" and "nan" for the
/// non-finite values. Locale independent.
[[nodiscard]] std::string format_number(double x);

} // namespace varlp
