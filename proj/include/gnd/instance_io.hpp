#pragma once

// JSON instance files.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gnd/instance.hpp"

namespace gnd {

// Throws ParseError for syntax errors (with line and column) and for
// schema violations (with the offending field path), StructuralError for
// invariant violations.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

// Canonical form: two-space indentation, fixed key order, weights written
// as a most-common default plus overrides.
std::string write_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::filesystem::path& path);

// Reply and profile as lists of resource ids.
nlohmann::ordered_json reply_json(const Instance& instance, const Reply& reply);
nlohmann::ordered_json profile_json(const Instance& instance, const StrategyProfile& profile);
std::string reply_text(const Instance& instance, const Reply& reply);

}  // namespace gnd
