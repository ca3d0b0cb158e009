#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uniwalk/network.hpp"
#include "uniwalk/node_table.hpp"

namespace uniwalk {

/// Loads one intra-layer edge list. Format: UTF-8 text, one edge per line,
/// `source<TAB>target[<TAB>weight]`; `#` begins a comment line; blank lines
/// are ignored. New names are appended to `table`; duplicates are merged;
/// undirected input is symmetrized. Throws ParseError with the line number
/// on malformed lines, negative weights, or a weight column in an
/// unweighted layer.
Layer load_edge_list(const std::filesystem::path& path, bool directed, bool weighted,
                     NodeTable& table, SelfLoopPolicy self_loops = SelfLoopPolicy::Keep);

/// Same, from an already-read buffer (`origin` only labels error messages).
Layer parse_edge_list(const std::string& text, bool directed, bool weighted, NodeTable& table,
                      SelfLoopPolicy self_loops = SelfLoopPolicy::Keep,
                      const std::string& origin = "<memory>");

/// Loads a bipartite edge list between two existing node tables. Node names
/// must already be interned on their respective sides; unknown names are
/// rejected (bipartite matrices are dimensioned by the multiplex node sets).
BipartiteNetwork load_bipartite_list(const std::filesystem::path& path, bool directed,
                                     std::uint32_t source_type, std::uint32_t target_type,
                                     const NodeTable& source_table, const NodeTable& target_table);

BipartiteNetwork parse_bipartite_list(const std::string& text, bool directed,
                                      std::uint32_t source_type, std::uint32_t target_type,
                                      const NodeTable& source_table, const NodeTable& target_table,
                                      const std::string& origin = "<memory>");

/// Writes a layer back to edge-list text. Undirected layers emit each
/// unordered pair once (smaller id first); unweighted layers emit two
/// columns. Re-loading the output yields an identical edge multiset.
void serialize_edge_list(std::ostream& out, const Layer& layer, const NodeTable& table);

void serialize_bipartite_list(std::ostream& out, const BipartiteNetwork& bipartite,
                              const NodeTable& source_table, const NodeTable& target_table);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_score(double value);

} // namespace uniwalk
