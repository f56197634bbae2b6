#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lhv {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// Comma-separated row terminated by '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace lhv
