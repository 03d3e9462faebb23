#pragma once

#include <json.hpp>

#include "acyclify/formula.hpp"

namespace acyclify {

/// Tree-of-records interchange: `{"op": "mem", "lhs": "x", "rhs": "y"}`,
/// `{"op": "exists", "var": "x", "body": {...}}`, `{"op": "not", "body": {...}}`,
/// binary connectives carry `lhs`/`rhs` subtrees.
nlohmann::json toJson(const Formula& f);
Formula fromJson(const nlohmann::json& j, const ParseOptions& options = {});

}  // namespace acyclify
