#pragma once

#include <vector>

#include <json.hpp>

#include "cfrelay/decodable_sets.hpp"
#include "cfrelay/optimizer.hpp"
#include "cfrelay/rate_schemes.hpp"
#include "cfrelay/verify.hpp"

namespace cfrelay {

/// Subsets serialize as sorted 1-based index lists, e.g. [1,3].
nlohmann::json subset_json(SubsetMask s);
SubsetMask subset_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SchemeReport& r);
nlohmann::json to_json(const DecodabilityReport& r);
nlohmann::json to_json(const OptimizationResult& r);
nlohmann::json to_json(const SuiteReport& r);
nlohmann::json to_json(const std::vector<ValidationIssue>& issues);

/// Shared rendering of a JSON report: two-space indent, trailing newline.
std::string dump_report(const nlohmann::json& j);

}  // namespace cfrelay
