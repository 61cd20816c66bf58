#include "forge/poset_io.hpp"

#include <sstream>

namespace forge {

nlohmann::json poset_to_json(const FinitePoset& p) {
  nlohmann::json j;
  j["elements"] = p.elements();
  nlohmann::json lt = nlohmann::json::array();
  for (auto [x, y] : p.hasse_edges()) lt.push_back({x, y});
  j["lt"] = std::move(lt);
  return j;
}

FinitePoset poset_from_json(const nlohmann::json& j) {
  try {
    auto elements = j.at("elements").get<std::vector<ElementId>>();
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (const auto& e : j.at("lt")) pairs.emplace_back(e.at(0).get<ElementId>(), e.at(1).get<ElementId>());
    FinitePoset p = transitive_close(elements, pairs);
    if (!p.is_strict_order()) throw Error(ErrorCode::CorruptArtifact, "loaded relation is not a strict order");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, std::string("poset json: ") + e.what());
  }
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string poset_to_dot(const FinitePoset& p, const std::function<DotNodeStyle(ElementId)>& style,
                         const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << quote(graph_name) << " {\n";
  os << "  rankdir=BT;\n";
  os << "  node [shape=circle, style=filled, fillcolor=white];\n";
  for (ElementId id : p.elements()) {
    os << "  n" << id;
    if (style) {
      DotNodeStyle s = style(id);
      os << " [label=" << quote(s.label.empty() ? std::to_string(id) : s.label);
      if (!s.color.empty()) os << ", fillcolor=" << quote(s.color);
      if (!s.shape.empty()) os << ", shape=" << quote(s.shape);
      os << "]";
    } else {
      os << " [label=" << quote(std::to_string(id)) << "]";
    }
    os << ";\n";
  }
  for (auto [x, y] : p.hasse_edges()) os << "  n" << x << " -> n" << y << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace forge
