#pragma once

#include <string>

#include <json.hpp>

#include "gnd/abrd.hpp"
#include "gnd/bounds.hpp"
#include "gnd/instance.hpp"

namespace gnd {

using Report = nlohmann::ordered_json;

// One "key: value" line per scalar leaf; nested objects flatten to dotted
// keys, arrays print inline. Reals use 9 significant digits.
std::string render_text(const Report& report);

Report bounds_report(const TheoreticalBounds& bounds);

Report run_report(const Instance& instance, const AbrdConfig& config, const RunResult& result);

}  // namespace gnd
