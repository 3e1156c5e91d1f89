#pragma once

#include <string>

namespace ctm {

// Locale-independent "%.*g"; NaN prints as "NaN", infinities as "Inf"/"-Inf".
std::string format_number(double value, int precision = 12);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

}  // namespace ctm
