#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace uniwalk {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Compressed sparse-row matrix with 64-bit values.
/// Canonical form: column indices strictly increasing within each row,
/// no explicit zeros stored.
struct SparseMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::size_t> row_offsets;  // length n_rows + 1
    std::vector<std::uint32_t> col_indices;
    std::vector<double> values;

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols)
        : n_rows(rows), n_cols(cols), row_offsets(rows + 1, 0) {}

    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet> triplets);
    static SparseMatrix identity(std::size_t n, double scale = 1.0);

    std::size_t nnz() const { return col_indices.size(); }

    /// Sorts each row, merges duplicate columns by summing, drops zeros.
    void canonicalize();
    bool is_canonical() const;

    /// Entry lookup by binary search within the row; zero when absent.
    double at(std::size_t row, std::size_t col) const;
};

/// y += m^T * v, i.e. a scatter over the rows of m. `out` must be zeroed by
/// the caller when a plain product is wanted. Single pass, deterministic.
void transpose_apply_add(const SparseMatrix& m, std::span<const double> v,
                         std::span<double> out);

/// Returns m^T * v. Throws Error on length mismatch.
std::vector<double> transpose_apply(const SparseMatrix& m, std::span<const double> v);

/// Identifies one block of the supra space: (row multiplex, row layer,
/// column multiplex, column layer). Each block is a node-level matrix.
struct BlockKey {
    std::uint32_t row_multiplex = 0;
    std::uint32_t row_layer = 0;
    std::uint32_t col_multiplex = 0;
    std::uint32_t col_layer = 0;

    auto operator<=>(const BlockKey&) const = default;
};

/// Maps (multiplex, layer, node) replicas onto the global supra index space
/// of dimension D = sum_k L_k * n_k. Supra index of (k, a, i) is
/// offset(k) + a * n_k + i.
struct BlockLayout {
    struct MultiplexExtent {
        std::size_t offset = 0;       // first supra index of this multiplex
        std::size_t layer_count = 0;  // L_k
        std::size_t node_count = 0;   // n_k
    };

    std::vector<MultiplexExtent> multiplexes;
    std::size_t dim = 0;

    static BlockLayout from_sizes(const std::vector<std::pair<std::size_t, std::size_t>>& layers_nodes);

    std::size_t offset(std::size_t multiplex) const { return multiplexes.at(multiplex).offset; }
    std::size_t supra_index(std::size_t multiplex, std::size_t layer, std::size_t node) const {
        const auto& m = multiplexes.at(multiplex);
        return m.offset + layer * m.node_count + node;
    }
    std::size_t multiplex_count() const { return multiplexes.size(); }

    /// Inverse of supra_index.
    void decompose(std::size_t supra, std::size_t& multiplex, std::size_t& layer,
                   std::size_t& node) const;
};

/// Places node-level blocks into a single D x D canonical sparse matrix.
/// Every block at (alpha, a, beta, b) must be n_alpha x n_beta; the total
/// entry count equals the sum of the block entry counts.
SparseMatrix assemble(const std::map<BlockKey, SparseMatrix>& blocks, const BlockLayout& layout);

} // namespace uniwalk
