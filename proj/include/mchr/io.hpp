#pragma once

#include <json.hpp>
#include <string>

#include "mchr/analytic.hpp"
#include "mchr/model.hpp"
#include "mchr/precedence.hpp"
#include "mchr/reliability.hpp"
#include "mchr/simulate.hpp"

namespace mchr {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "mchr-lab/1";

/// Structural parsing; semantic invariants are left to validate_model.
/// Throws ParseError with a JSON-pointer location.
ModelSpec parse_model(const Json& doc);
ModelSpec load_model(const std::string& path);
Json model_to_json(const ModelSpec& model);

PathSetSystem parse_system(const Json& doc);
PathSetSystem load_system(const std::string& path);

/// Reads a whole file as JSON; throws ParseError on I/O or syntax errors.
Json read_json_file(const std::string& path);

/// One-based index lists such as "1,2,3" (blank means all of 1..n).
SubsetMask parse_subset_list(const std::string& text, int n);
/// "0,0.5,1" or "start:stop:count" (count points, both ends included).
std::vector<double> parse_grid(const std::string& text);

/// Rounds every floating point number to 12 significant digits; non-finite
/// numbers become null.
Json round_numbers(const Json& doc);

Json subset_json(SubsetMask a);  // one-based array
Json to_json(const ValidationReport& report);
Json to_json(const Quantity& q);
Json to_json(const AlphaVector& a);
Json to_json(const MinReport& r);
Json to_json(const Estimate& e);
Json to_json(const SpMatrix& sp);
Json to_json(const ClassificationReport& c);
Json to_json(const ParadoxReport& p);
Json to_json(const ConditionVerdict& v);
Json to_json(const CrossPathReversal& r);

}  // namespace mchr
