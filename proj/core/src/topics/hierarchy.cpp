#include "convoscope/topics/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {

TopicHierarchy::TopicHierarchy(std::vector<TopicNode> nodes) : nodes_(std::move(nodes)) {
  std::unordered_set<std::string> ids;
  for (const auto& node : nodes_) {
    if (node.id.empty()) throw InvalidInputError("topic with empty id");
    if (!ids.insert(node.id).second) throw InvalidInputError("duplicate topic id '" + node.id + "'");
  }
  for (const auto& node : nodes_) {
    if (!node.parent_id) continue;
    const TopicNode* parent = find(*node.parent_id);
    if (parent == nullptr)
      throw InvalidInputError("topic '" + node.id + "' references unknown parent '" + *node.parent_id + "'");
    if (parent->parent_id)
      throw InvalidInputError("topic '" + node.id + "' nests below leaf '" + parent->id + "'");
  }
  for (const auto& node : nodes_)
    if (!node.parent_id && children(node.id).empty())
      throw InvalidInputError("parent topic '" + node.id + "' has no leaves");
}

const TopicNode* TopicHierarchy::find(std::string_view id) const {
  auto it = std::find_if(nodes_.begin(), nodes_.end(), [&](const TopicNode& n) { return n.id == id; });
  return it == nodes_.end() ? nullptr : &*it;
}

bool TopicHierarchy::is_leaf(std::string_view id) const {
  const TopicNode* node = find(id);
  return node != nullptr && node->parent_id.has_value();
}

bool TopicHierarchy::is_parent(std::string_view id) const {
  const TopicNode* node = find(id);
  return node != nullptr && !node->parent_id.has_value();
}

std::vector<std::string> TopicHierarchy::leaves() const {
  std::vector<std::string> out;
  for (const auto& node : nodes_)
    if (node.parent_id) out.push_back(node.id);
  return out;
}

std::vector<std::string> TopicHierarchy::parents() const {
  std::vector<std::string> out;
  for (const auto& node : nodes_)
    if (!node.parent_id) out.push_back(node.id);
  return out;
}

std::vector<std::string> TopicHierarchy::children(std::string_view parent_id) const {
  std::vector<std::string> out;
  for (const auto& node : nodes_)
    if (node.parent_id && *node.parent_id == parent_id) out.push_back(node.id);
  return out;
}

std::set<std::string> TopicHierarchy::with_parents(const std::set<std::string>& leaves) const {
  std::set<std::string> out = leaves;
  for (const auto& id : leaves)
    if (const TopicNode* node = find(id); node != nullptr && node->parent_id) out.insert(*node->parent_id);
  return out;
}

TopicHierarchy read_topic_hierarchy(std::istream& in) {
  std::vector<TopicNode> nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, '\t')) parts.push_back(part);
    if (parts.size() != 3) throw FormatError("expected id<TAB>label<TAB>parent_id", line_no);
    TopicNode node{parts[0], parts[1], std::nullopt};
    if (parts[2] != "-") node.parent_id = parts[2];
    nodes.push_back(std::move(node));
  }
  try {
    return TopicHierarchy(std::move(nodes));
  } catch (const InvalidInputError& e) {
    throw FormatError(e.what(), 0);
  }
}

TopicHierarchy load_topic_hierarchy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read topic hierarchy " + path.string());
  return read_topic_hierarchy(in);
}

void write_topic_hierarchy(std::ostream& out, const TopicHierarchy& hierarchy) {
  for (const auto& node : hierarchy.nodes())
    out << node.id << '\t' << node.label << '\t' << node.parent_id.value_or("-") << '\n';
}

TopicHierarchy default_topic_hierarchy() {
  return TopicHierarchy({
      {"logistics", "Logistics", std::nullopt},
      {"appointment", "Appointment", "logistics"},
      {"outpatient", "Outpatient", "logistics"},
      {"treatment", "Treatment", std::nullopt},
      {"medication", "Medication", "treatment"},
      {"physical", "Physical Symptoms", "treatment"},
      {"social", "Social", std::nullopt},
      {"social_services", "Social Services", "social"},
  });
}

}  // namespace convoscope
