#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uniwalk/node_table.hpp"
#include "uniwalk/sparse.hpp"

namespace uniwalk {

struct Edge {
    NodeId source = 0;
    NodeId target = 0;
    double weight = 1.0;
};

enum class SelfLoopPolicy { Keep, Drop };

/// Sorts by (source, target) and merges duplicate pairs. Weighted edges are
/// merged by summing; unweighted duplicates collapse to weight 1.
std::vector<Edge> canonical_edges(std::vector<Edge> edges, bool weighted);

/// One layer of a multiplex network. For undirected layers the edge list holds
/// both orientations of every non-loop edge, so the adjacency is symmetric.
struct Layer {
    bool directed = false;
    bool weighted = false;
    SelfLoopPolicy self_loops = SelfLoopPolicy::Keep;
    std::vector<Edge> edges;  // canonical

    // built by MultiplexNetwork::finalize
    SparseMatrix adjacency;          // n x n
    std::vector<double> out_weight;  // weighted out-degree per node
};

/// L layers over one shared node set (replica-node semantics), plus the
/// layer-jump probability delta and the restart-layer distribution tau.
struct MultiplexNetwork {
    NodeTable nodes;
    std::vector<Layer> layers;
    double delta = 0.5;       // forced to 0 when there is a single layer
    std::vector<double> tau;  // length = layer count, sums to 1

    std::size_t node_count() const { return nodes.size(); }
    std::size_t layer_count() const { return layers.size(); }

    /// Builds layer adjacencies and applies defaults (uniform tau, delta = 0
    /// for monoplexes). Throws Error on out-of-range node ids.
    void finalize();
};

/// Typed edges from the nodes of one multiplex to the nodes of another.
/// For undirected bipartites the transpose is materialized (`reverse`), so the
/// (target_type, source_type) view exists as well.
struct BipartiteNetwork {
    std::uint32_t source_type = 0;
    std::uint32_t target_type = 0;
    bool directed = false;
    std::vector<Edge> edges;  // canonical, in declared orientation

    // built by MultilayerNetwork::finalize
    SparseMatrix forward;  // n_source x n_target
    SparseMatrix reverse;  // n_target x n_source, only when undirected
    std::vector<double> forward_row_sum;
    std::vector<double> reverse_row_sum;

    void finalize(std::size_t n_source, std::size_t n_target);
};

/// Read-only view of the bipartite transitions leaving multiplex
/// `source` toward multiplex `target` (possibly the transpose of an
/// undirected declaration).
struct BipartiteView {
    const BipartiteNetwork* declared = nullptr;
    bool transposed = false;

    const SparseMatrix& matrix() const { return transposed ? declared->reverse : declared->forward; }
    const std::vector<double>& row_sums() const {
        return transposed ? declared->reverse_row_sum : declared->forward_row_sum;
    }
};

/// Any number of multiplex networks coupled by any set of bipartite networks.
struct MultilayerNetwork {
    std::vector<MultiplexNetwork> multiplexes;
    std::vector<BipartiteNetwork> bipartites;

    std::size_t multiplex_count() const { return multiplexes.size(); }

    /// Finalizes every component and indexes the bipartite views per ordered
    /// (source, target) pair. Throws Error when two bipartites occupy the
    /// same ordered pair.
    void finalize();

    std::optional<BipartiteView> bipartite_view(std::size_t source, std::size_t target) const;

    /// Multiplexes beta for which node `node` of multiplex `alpha` has at
    /// least one outgoing bipartite edge, ascending.
    std::vector<std::uint32_t> outgoing_partners(std::size_t alpha, NodeId node) const;

    /// Total intra-layer edge count of one multiplex (stored orientations).
    std::size_t edge_count(std::size_t multiplex) const;

private:
    // dense (source * N + target) -> index into bipartites_, transposed flag
    std::vector<std::int32_t> view_index_;
    std::vector<std::uint8_t> view_transposed_;
};

} // namespace uniwalk
