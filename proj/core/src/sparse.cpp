#include "uniwalk/sparse.hpp"

#include <algorithm>
#include <stdexcept>

#include "uniwalk/errors.hpp"

namespace uniwalk {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
    SparseMatrix m(rows, cols);
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw Error("triplet out of bounds");
        }
        m.row_offsets[t.row + 1]++;
    }
    for (std::size_t r = 0; r < rows; ++r) {
        m.row_offsets[r + 1] += m.row_offsets[r];
    }
    m.col_indices.reserve(triplets.size());
    m.values.reserve(triplets.size());
    for (const auto& t : triplets) {
        m.col_indices.push_back(static_cast<std::uint32_t>(t.col));
        m.values.push_back(t.value);
    }
    m.canonicalize();
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n, double scale) {
    SparseMatrix m(n, n);
    if (scale == 0.0) {
        return m;
    }
    m.col_indices.resize(n);
    m.values.assign(n, scale);
    for (std::size_t i = 0; i < n; ++i) {
        m.row_offsets[i + 1] = i + 1;
        m.col_indices[i] = static_cast<std::uint32_t>(i);
    }
    return m;
}

void SparseMatrix::canonicalize() {
    std::vector<std::size_t> new_offsets(n_rows + 1, 0);
    std::vector<std::uint32_t> new_cols;
    std::vector<double> new_vals;
    new_cols.reserve(col_indices.size());
    new_vals.reserve(values.size());

    std::vector<std::pair<std::uint32_t, double>> row_buf;
    for (std::size_t r = 0; r < n_rows; ++r) {
        row_buf.clear();
        for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
            row_buf.emplace_back(col_indices[k], values[k]);
        }
        std::sort(row_buf.begin(), row_buf.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::size_t kept = 0;
        for (std::size_t k = 0; k < row_buf.size();) {
            const std::uint32_t col = row_buf[k].first;
            double sum = 0.0;
            while (k < row_buf.size() && row_buf[k].first == col) {
                sum += row_buf[k].second;
                ++k;
            }
            if (sum != 0.0) {
                new_cols.push_back(col);
                new_vals.push_back(sum);
                ++kept;
            }
        }
        new_offsets[r + 1] = new_offsets[r] + kept;
    }
    row_offsets = std::move(new_offsets);
    col_indices = std::move(new_cols);
    values = std::move(new_vals);
}

bool SparseMatrix::is_canonical() const {
    if (row_offsets.size() != n_rows + 1 || row_offsets[0] != 0) {
        return false;
    }
    if (row_offsets[n_rows] != col_indices.size() || col_indices.size() != values.size()) {
        return false;
    }
    for (std::size_t r = 0; r < n_rows; ++r) {
        if (row_offsets[r] > row_offsets[r + 1]) {
            return false;
        }
        for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
            if (k > row_offsets[r] && col_indices[k - 1] >= col_indices[k]) {
                return false;
            }
            if (values[k] == 0.0 || col_indices[k] >= n_cols) {
                return false;
            }
        }
    }
    return true;
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
    const auto begin = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row]);
    const auto end = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row + 1]);
    const auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(col));
    if (it == end || *it != col) {
        return 0.0;
    }
    return values[static_cast<std::size_t>(it - col_indices.begin())];
}

void transpose_apply_add(const SparseMatrix& m, std::span<const double> v,
                         std::span<double> out) {
    if (v.size() != m.n_rows || out.size() != m.n_cols) {
        throw Error("transpose_apply: length mismatch");
    }
    for (std::size_t r = 0; r < m.n_rows; ++r) {
        const double x = v[r];
        if (x == 0.0) {
            continue;
        }
        for (std::size_t k = m.row_offsets[r]; k < m.row_offsets[r + 1]; ++k) {
            out[m.col_indices[k]] += m.values[k] * x;
        }
    }
}

std::vector<double> transpose_apply(const SparseMatrix& m, std::span<const double> v) {
    std::vector<double> out(m.n_cols, 0.0);
    transpose_apply_add(m, v, out);
    return out;
}

BlockLayout BlockLayout::from_sizes(
    const std::vector<std::pair<std::size_t, std::size_t>>& layers_nodes) {
    BlockLayout layout;
    std::size_t offset = 0;
    for (const auto& [layers, nodes] : layers_nodes) {
        layout.multiplexes.push_back({offset, layers, nodes});
        offset += layers * nodes;
    }
    layout.dim = offset;
    return layout;
}

void BlockLayout::decompose(std::size_t supra, std::size_t& multiplex, std::size_t& layer,
                            std::size_t& node) const {
    for (std::size_t k = 0; k < multiplexes.size(); ++k) {
        const auto& m = multiplexes[k];
        const std::size_t span = m.layer_count * m.node_count;
        if (supra < m.offset + span) {
            multiplex = k;
            layer = (supra - m.offset) / m.node_count;
            node = (supra - m.offset) % m.node_count;
            return;
        }
    }
    throw Error("supra index out of range");
}

SparseMatrix assemble(const std::map<BlockKey, SparseMatrix>& blocks, const BlockLayout& layout) {
    // Group blocks by row stripe (row multiplex, row layer), ordered by column offset.
    struct Placed {
        std::size_t col_base;
        const SparseMatrix* block;
    };
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Placed>> stripes;
    for (const auto& [key, block] : blocks) {
        const auto& rm = layout.multiplexes.at(key.row_multiplex);
        const auto& cm = layout.multiplexes.at(key.col_multiplex);
        if (key.row_layer >= rm.layer_count || key.col_layer >= cm.layer_count) {
            throw Error("assemble: block layer out of range");
        }
        if (block.n_rows != rm.node_count || block.n_cols != cm.node_count) {
            throw Error("assemble: block dimensions do not match layout");
        }
        const std::size_t col_base = cm.offset + key.col_layer * cm.node_count;
        stripes[{key.row_multiplex, key.row_layer}].push_back({col_base, &block});
    }
    for (auto& [stripe, placed] : stripes) {
        std::sort(placed.begin(), placed.end(),
                  [](const Placed& a, const Placed& b) { return a.col_base < b.col_base; });
    }

    SparseMatrix out(layout.dim, layout.dim);
    std::size_t total = 0;
    for (const auto& [stripe, placed] : stripes) {
        for (const auto& p : placed) {
            total += p.block->nnz();
        }
    }
    out.col_indices.reserve(total);
    out.values.reserve(total);

    for (std::size_t k = 0; k < layout.multiplexes.size(); ++k) {
        const auto& m = layout.multiplexes[k];
        for (std::size_t layer = 0; layer < m.layer_count; ++layer) {
            auto it = stripes.find({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(layer)});
            for (std::size_t node = 0; node < m.node_count; ++node) {
                const std::size_t supra_row = m.offset + layer * m.node_count + node;
                if (it != stripes.end()) {
                    for (const auto& p : it->second) {
                        const SparseMatrix& b = *p.block;
                        for (std::size_t e = b.row_offsets[node]; e < b.row_offsets[node + 1]; ++e) {
                            out.col_indices.push_back(
                                static_cast<std::uint32_t>(p.col_base + b.col_indices[e]));
                            out.values.push_back(b.values[e]);
                        }
                    }
                }
                out.row_offsets[supra_row + 1] = out.col_indices.size();
            }
        }
    }
    return out;
}

} // namespace uniwalk
