#pragma once

#include <string>

#include <fmt/format.h>

namespace gnd {

// Reals in reports and CSVs: 9 significant digits, locale independent.
inline std::string format_real(double x) { return fmt::format("{:.9g}", x); }

}  // namespace gnd
