#include "uniwalk/node_table.hpp"

namespace uniwalk {

NodeId NodeTable::intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) {
        return it->second;
    }
    const NodeId id = static_cast<NodeId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
}

std::optional<NodeId> NodeTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

} // namespace uniwalk
