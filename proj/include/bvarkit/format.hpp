#pragma once

#include <string>

namespace bvarkit {

/// Shortest decimal text that parses back to exactly `v` ("NaN", "Inf", "-Inf" for non-finite).
[[nodiscard]] std::string format_double(double v);

}  // namespace bvarkit
