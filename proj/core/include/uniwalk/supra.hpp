#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "uniwalk/config.hpp"
#include "uniwalk/network.hpp"
#include "uniwalk/sparse.hpp"

namespace uniwalk {

/// Row-stochastic transition matrix over the global supra index space.
/// Every non-dangling row sums to 1 within 1e-12; rows with no outgoing
/// transitions at all are listed in `dangling` and handled by the solver
/// (teleport to the restart distribution).
struct TransitionMatrix {
    SparseMatrix matrix;
    BlockLayout layout;
    std::vector<std::uint32_t> dangling;  // sorted supra indices with empty rows

    std::size_t dim() const { return layout.dim; }
    const BlockLayout& block_layout() const { return layout; }

    /// out = matrix^T * in (out is overwritten).
    void apply_transpose(std::span<const double> in, std::span<double> out) const;

    double dangling_mass(std::span<const double> p) const;
};

BlockLayout make_layout(const MultilayerNetwork& network);

/// Supra-adjacency matrix of one multiplex: diagonal blocks (1-delta) A^[a],
/// off-diagonal blocks (delta / (L-1)) I. A monoplex yields its single
/// adjacency unscaled.
SparseMatrix build_supra_adjacency(const MultiplexNetwork& multiplex);

/// Tiles the node-level bipartite matrix Li x Lj times, one copy per pair of
/// layers, yielding an (Li*n_i) x (Lj*n_j) block.
SparseMatrix build_bipartite_block(const SparseMatrix& bipartite, std::size_t source_layers,
                                   std::size_t target_layers);

/// A bipartite edge hidden from the normalization without touching the
/// network (used by the evaluation protocols to leave one edge out).
/// `both_directions` also hides the mirrored transition of an undirected
/// bipartite.
struct MaskedEdge {
    std::uint32_t source_mux = 0;
    std::uint32_t target_mux = 0;
    NodeId source = 0;
    NodeId target = 0;
    bool both_directions = false;
};

/// Builds one supra row of the normalized transition matrix into
/// `cols`/`vals` (cleared first, columns ascending). The intra part reads
/// the supra-adjacency with each layer adjacency row-normalized, so delta is
/// an exact jump probability and rescaling a layer's weights leaves the
/// result unchanged. Row semantics, for node i of multiplex alpha:
///   - with no outgoing bipartite edge, the row is the row-normalized
///     supra-adjacency row;
///   - otherwise the intra block is scaled by the stay probability
///     1 - sum of lambda[alpha][beta] over the multiplexes beta that node i
///     can actually reach, and each reachable bipartite block carries
///     lambda[alpha][beta] spread over its row-normalized tiled row;
///   - lambda mass pointing at unreachable multiplexes stays in the intra
///     block; when the intra row itself is empty, the bipartite blocks are
///     rescaled to carry the full mass;
///   - a row with no transitions anywhere is left empty (dangling).
void build_transition_row(const MultilayerNetwork& network, const RwrConfig& config,
                          const BlockLayout& layout, std::size_t multiplex, std::size_t layer,
                          NodeId node, const MaskedEdge* mask, std::vector<std::uint32_t>& cols,
                          std::vector<double>& vals);

/// Full normalization of the supra-heterogeneous matrix. Throws ConfigError
/// on invalid parameters (lambda mass without a bipartite, bad tau/delta).
TransitionMatrix normalize(const MultilayerNetwork& network, const RwrConfig& config);

/// A transition matrix with a handful of recomputed rows layered over an
/// immutable base — the per-edge rebuild used by the evaluation protocols.
/// Only the supra rows of the masked edge's endpoints differ from the base.
class TransitionOverlay {
public:
    TransitionOverlay(const MultilayerNetwork& network, const RwrConfig& config,
                      const TransitionMatrix& base, const MaskedEdge& mask);

    std::size_t dim() const { return base_->dim(); }
    const BlockLayout& block_layout() const { return base_->layout; }
    void apply_transpose(std::span<const double> in, std::span<double> out) const;
    double dangling_mass(std::span<const double> p) const;
    const std::vector<std::uint32_t>& dangling_rows() const { return dangling_; }

private:
    struct Override {
        std::uint32_t row;
        std::vector<std::uint32_t> cols;
        std::vector<double> vals;
    };

    const TransitionMatrix* base_;
    std::vector<Override> overrides_;  // sorted by row
    std::vector<std::uint32_t> dangling_;
};

/// Debug dump as TSV triplets `row<TAB>col<TAB>value`.
void dump_transition_tsv(std::ostream& out, const TransitionMatrix& transition);

} // namespace uniwalk
