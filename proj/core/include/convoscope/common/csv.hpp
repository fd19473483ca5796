#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace convoscope::csv {

// Quotes the field when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

// Splits CSV text into rows of fields (RFC 4180 quoting; quoted fields may
// span lines). Lines starting with '#' outside of quotes are skipped.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace convoscope::csv
