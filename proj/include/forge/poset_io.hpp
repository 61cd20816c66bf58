#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "forge/poset.hpp"

namespace forge {

// {"elements": [id...], "lt": [[x,y]...]} with "lt" the covering pairs.
nlohmann::json poset_to_json(const FinitePoset& p);
// Re-closes the covering pairs and validates the result.
FinitePoset poset_from_json(const nlohmann::json& j);

struct DotNodeStyle {
  std::string label;
  std::string color;
  std::string shape;
};

// Hasse diagram, edges directed upward.
std::string poset_to_dot(const FinitePoset& p,
                         const std::function<DotNodeStyle(ElementId)>& style = nullptr,
                         const std::string& graph_name = "poset");

}  // namespace forge
