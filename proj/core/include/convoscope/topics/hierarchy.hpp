#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace convoscope {

struct TopicNode {
  std::string id;
  std::string label;
  std::optional<std::string> parent_id;

  bool operator==(const TopicNode&) const = default;
};

// Two-level topic tree: parent topics (no parent) and leaf topics (whose
// parent is a parent topic). Every parent has at least one leaf.
class TopicHierarchy {
 public:
  TopicHierarchy() = default;
  // Throws InvalidInputError on duplicate ids, dangling or nested parents,
  // or childless parents.
  explicit TopicHierarchy(std::vector<TopicNode> nodes);

  const std::vector<TopicNode>& nodes() const { return nodes_; }
  const TopicNode* find(std::string_view id) const;
  bool is_leaf(std::string_view id) const;
  bool is_parent(std::string_view id) const;

  // Declaration order.
  std::vector<std::string> leaves() const;
  std::vector<std::string> parents() const;
  std::vector<std::string> children(std::string_view parent_id) const;

  // The given leaves plus every parent with at least one of them.
  std::set<std::string> with_parents(const std::set<std::string>& leaves) const;

  bool operator==(const TopicHierarchy&) const = default;

 private:
  std::vector<TopicNode> nodes_;
};

// One node per line: `id<TAB>label<TAB>parent_id`, with `-` for no parent.
TopicHierarchy read_topic_hierarchy(std::istream& in);
TopicHierarchy load_topic_hierarchy(const std::filesystem::path& path);
void write_topic_hierarchy(std::ostream& out, const TopicHierarchy& hierarchy);

// Configurable stand-in for a clinical label set: Logistics, Treatment and
// Social parents over five leaves.
TopicHierarchy default_topic_hierarchy();

}  // namespace convoscope
