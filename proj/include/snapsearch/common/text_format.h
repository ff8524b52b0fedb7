#pragma once

#include <string>
#include <string_view>

namespace snapsearch {

// Shortest decimal form that round-trips; stable across runs, used for CSV.
std::string format_number(double value);

// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(std::string_view value);

}  // namespace snapsearch
