#pragma once

#include <string>

namespace ksep {

/// Shortest "%.12g" rendering; every float the tools print goes through here so
/// outputs stay diff-stable.
std::string format_number(double value);

/// value rounded to 12 significant digits.
double round_significant(double value);

}  // namespace ksep
