#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace uniwalk {

using NodeId = std::uint32_t;

/// Interns node names to dense 0-based ids, one table per node type.
/// Ids are assigned in first-occurrence order and are contiguous 0..n-1.
class NodeTable {
public:
    NodeId intern(std::string_view name);
    std::optional<NodeId> find(std::string_view name) const;
    const std::string& name(NodeId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
};

} // namespace uniwalk
