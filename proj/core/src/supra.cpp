#include "uniwalk/supra.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"

namespace uniwalk {

namespace {

constexpr double kProbTol = 1e-12;

SparseMatrix scaled_copy(const SparseMatrix& m, double scale) {
    if (scale == 0.0) {
        return SparseMatrix(m.n_rows, m.n_cols);
    }
    SparseMatrix out = m;
    for (double& v : out.values) {
        v *= scale;
    }
    return out;
}

void check_multiplex_params(const MultilayerNetwork& network) {
    for (std::size_t k = 0; k < network.multiplex_count(); ++k) {
        const MultiplexNetwork& mux = network.multiplexes[k];
        if (mux.delta < 0.0 || mux.delta > 1.0) {
            throw ConfigError("multiplex " + std::to_string(k) + ": delta must lie in [0, 1]");
        }
        double tau_sum = 0.0;
        for (const double t : mux.tau) {
            if (t < 0.0) {
                throw ConfigError("multiplex " + std::to_string(k) + ": tau must be nonnegative");
            }
            tau_sum += t;
        }
        if (std::abs(tau_sum - 1.0) > kProbTol) {
            throw ConfigError("multiplex " + std::to_string(k) + ": tau does not sum to 1");
        }
    }
}

} // namespace

void TransitionMatrix::apply_transpose(std::span<const double> in, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    transpose_apply_add(matrix, in, out);
}

double TransitionMatrix::dangling_mass(std::span<const double> p) const {
    double mass = 0.0;
    for (const std::uint32_t row : dangling) {
        mass += p[row];
    }
    return mass;
}

BlockLayout make_layout(const MultilayerNetwork& network) {
    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    sizes.reserve(network.multiplex_count());
    for (const MultiplexNetwork& mux : network.multiplexes) {
        sizes.emplace_back(mux.layer_count(), mux.node_count());
    }
    return BlockLayout::from_sizes(sizes);
}

SparseMatrix build_supra_adjacency(const MultiplexNetwork& multiplex) {
    const std::size_t L = multiplex.layer_count();
    const std::size_t n = multiplex.node_count();
    const BlockLayout layout = BlockLayout::from_sizes({{L, n}});

    const double delta = L > 1 ? multiplex.delta : 0.0;
    const double diag_scale = L > 1 ? 1.0 - delta : 1.0;
    const double jump = L > 1 ? delta / static_cast<double>(L - 1) : 0.0;

    std::map<BlockKey, SparseMatrix> blocks;
    for (std::size_t a = 0; a < L; ++a) {
        if (diag_scale != 0.0 && multiplex.layers[a].adjacency.nnz() > 0) {
            blocks[{0, static_cast<std::uint32_t>(a), 0, static_cast<std::uint32_t>(a)}] =
                scaled_copy(multiplex.layers[a].adjacency, diag_scale);
        }
        if (jump != 0.0) {
            for (std::size_t b = 0; b < L; ++b) {
                if (b != a) {
                    blocks[{0, static_cast<std::uint32_t>(a), 0, static_cast<std::uint32_t>(b)}] =
                        SparseMatrix::identity(n, jump);
                }
            }
        }
    }
    return assemble(blocks, layout);
}

SparseMatrix build_bipartite_block(const SparseMatrix& bipartite, std::size_t source_layers,
                                   std::size_t target_layers) {
    const std::size_t n_src = bipartite.n_rows;
    const std::size_t n_dst = bipartite.n_cols;
    SparseMatrix out(source_layers * n_src, target_layers * n_dst);
    out.col_indices.reserve(source_layers * target_layers * bipartite.nnz());
    out.values.reserve(out.col_indices.capacity());

    for (std::size_t a = 0; a < source_layers; ++a) {
        for (std::size_t i = 0; i < n_src; ++i) {
            const std::size_t row = a * n_src + i;
            for (std::size_t b = 0; b < target_layers; ++b) {
                const std::size_t col_base = b * n_dst;
                for (std::size_t k = bipartite.row_offsets[i]; k < bipartite.row_offsets[i + 1];
                     ++k) {
                    out.col_indices.push_back(
                        static_cast<std::uint32_t>(col_base + bipartite.col_indices[k]));
                    out.values.push_back(bipartite.values[k]);
                }
            }
            out.row_offsets[row + 1] = out.col_indices.size();
        }
    }
    return out;
}

void build_transition_row(const MultilayerNetwork& network, const RwrConfig& config,
                          const BlockLayout& layout, std::size_t multiplex, std::size_t layer,
                          NodeId node, const MaskedEdge* mask, std::vector<std::uint32_t>& cols,
                          std::vector<double>& vals) {
    cols.clear();
    vals.clear();

    const MultiplexNetwork& mux = network.multiplexes[multiplex];
    const std::size_t L = mux.layer_count();
    const std::size_t n = mux.node_count();
    const double delta = L > 1 ? mux.delta : 0.0;
    const double diag_scale = L > 1 ? 1.0 - delta : 1.0;
    const double jump = L > 1 ? delta / static_cast<double>(L - 1) : 0.0;

    const Layer& lay = mux.layers[layer];
    // Layer adjacencies enter row-normalized: delta stays an exact jump
    // probability and uniform weight rescaling of a layer cancels out.
    const double out_weight = lay.out_weight[node];
    const double raw_intra = (out_weight > 0.0 ? diag_scale : 0.0) + (L > 1 ? delta : 0.0);

    // Outgoing bipartite blocks this node can reach, with masked-edge effects.
    struct Partner {
        std::uint32_t beta;
        BipartiteView view;
        double row_sum;
        bool masked;
        std::uint32_t masked_col;
    };
    std::vector<Partner> partners;
    double lambda_out = 0.0;
    for (std::size_t beta = 0; beta < network.multiplex_count(); ++beta) {
        if (beta == multiplex) {
            continue;
        }
        const double lam = config.lambda[multiplex][beta];
        if (lam == 0.0) {
            continue;
        }
        const auto view = network.bipartite_view(multiplex, beta);
        if (!view) {
            continue;
        }
        bool masked = false;
        std::uint32_t masked_col = 0;
        if (mask) {
            if (mask->source_mux == multiplex && mask->target_mux == beta &&
                mask->source == node) {
                masked_col = mask->target;
                masked = true;
            } else if (mask->both_directions && mask->source_mux == beta &&
                       mask->target_mux == multiplex && mask->target == node) {
                masked_col = mask->source;
                masked = true;
            }
        }
        double row_sum;
        if (!masked) {
            row_sum = view->row_sums()[node];
        } else {
            // Left-to-right resummation skipping the masked column, so a
            // patched row is bitwise identical to a full rebuild without
            // the edge.
            row_sum = 0.0;
            const SparseMatrix& bm = view->matrix();
            for (std::size_t k = bm.row_offsets[node]; k < bm.row_offsets[node + 1]; ++k) {
                if (bm.col_indices[k] != masked_col) {
                    row_sum += bm.values[k];
                }
            }
        }
        if (row_sum > 0.0) {
            partners.push_back({static_cast<std::uint32_t>(beta), *view, row_sum, masked,
                                masked_col});
            lambda_out += lam;
        }
    }

    const bool has_intra = raw_intra > 0.0;
    if (!has_intra && partners.empty()) {
        return;  // dangling row
    }

    double intra_scale = 0.0;
    double bip_renorm = 1.0;
    if (has_intra) {
        double stay = partners.empty() ? 1.0 : 1.0 - lambda_out;
        if (stay < 0.0) {
            stay = 0.0;
        }
        intra_scale = stay / raw_intra;
    } else {
        // No transitions inside the multiplex: the full row mass moves
        // through the bipartite blocks.
        bip_renorm = 1.0 / lambda_out;
    }

    auto partner_it = partners.begin();
    for (std::size_t beta = 0; beta < network.multiplex_count(); ++beta) {
        if (beta == multiplex) {
            if (intra_scale == 0.0) {
                continue;
            }
            const std::size_t base = layout.offset(multiplex);
            for (std::size_t b = 0; b < L; ++b) {
                if (b == layer) {
                    const SparseMatrix& adj = lay.adjacency;
                    for (std::size_t k = adj.row_offsets[node]; k < adj.row_offsets[node + 1];
                         ++k) {
                        const double v =
                            diag_scale * (adj.values[k] / out_weight) * intra_scale;
                        if (v != 0.0) {
                            cols.push_back(
                                static_cast<std::uint32_t>(base + b * n + adj.col_indices[k]));
                            vals.push_back(v);
                        }
                    }
                } else {
                    const double v = jump * intra_scale;
                    if (v != 0.0) {
                        cols.push_back(static_cast<std::uint32_t>(base + b * n + node));
                        vals.push_back(v);
                    }
                }
            }
            continue;
        }
        if (partner_it == partners.end() || partner_it->beta != beta) {
            continue;
        }
        const Partner& p = *partner_it;
        ++partner_it;
        const std::size_t l_beta = network.multiplexes[beta].layer_count();
        const std::size_t n_beta = network.multiplexes[beta].node_count();
        const double scale = config.lambda[multiplex][beta] * bip_renorm /
                             (static_cast<double>(l_beta) * p.row_sum);
        const SparseMatrix& bm = p.view.matrix();
        const std::size_t base = layout.offset(beta);
        for (std::size_t b = 0; b < l_beta; ++b) {
            for (std::size_t k = bm.row_offsets[node]; k < bm.row_offsets[node + 1]; ++k) {
                if (p.masked && bm.col_indices[k] == p.masked_col) {
                    continue;
                }
                const double v = bm.values[k] * scale;
                if (v != 0.0) {
                    cols.push_back(
                        static_cast<std::uint32_t>(base + b * n_beta + bm.col_indices[k]));
                    vals.push_back(v);
                }
            }
        }
    }
}

TransitionMatrix normalize(const MultilayerNetwork& network, const RwrConfig& config) {
    check_rwr_config(network, config);
    check_multiplex_params(network);

    TransitionMatrix t;
    t.layout = make_layout(network);
    const std::size_t dim = t.layout.dim;
    t.matrix = SparseMatrix(dim, dim);

    std::size_t estimate = 0;
    for (const MultiplexNetwork& mux : network.multiplexes) {
        for (const Layer& lay : mux.layers) {
            estimate += lay.edges.size();
        }
        estimate += mux.node_count() * mux.layer_count() * (mux.layer_count() - 1);
    }
    for (const BipartiteNetwork& bp : network.bipartites) {
        estimate += 4 * bp.edges.size();
    }
    t.matrix.col_indices.reserve(estimate);
    t.matrix.values.reserve(estimate);

    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    for (std::size_t alpha = 0; alpha < network.multiplex_count(); ++alpha) {
        const MultiplexNetwork& mux = network.multiplexes[alpha];
        for (std::size_t layer = 0; layer < mux.layer_count(); ++layer) {
            for (NodeId node = 0; node < mux.node_count(); ++node) {
                const std::size_t row = t.layout.supra_index(alpha, layer, node);
                build_transition_row(network, config, t.layout, alpha, layer, node, nullptr, cols,
                                     vals);
                if (cols.empty()) {
                    t.dangling.push_back(static_cast<std::uint32_t>(row));
                }
                t.matrix.col_indices.insert(t.matrix.col_indices.end(), cols.begin(), cols.end());
                t.matrix.values.insert(t.matrix.values.end(), vals.begin(), vals.end());
                t.matrix.row_offsets[row + 1] = t.matrix.col_indices.size();
            }
        }
    }
    return t;
}

TransitionOverlay::TransitionOverlay(const MultilayerNetwork& network, const RwrConfig& config,
                                     const TransitionMatrix& base, const MaskedEdge& mask)
    : base_(&base) {
    std::vector<std::pair<std::size_t, NodeId>> touched;  // (multiplex, node)
    touched.emplace_back(mask.source_mux, mask.source);
    if (mask.both_directions) {
        touched.emplace_back(mask.target_mux, mask.target);
    }

    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    for (const auto& [mux_idx, node] : touched) {
        const MultiplexNetwork& mux = network.multiplexes[mux_idx];
        for (std::size_t layer = 0; layer < mux.layer_count(); ++layer) {
            const std::uint32_t row =
                static_cast<std::uint32_t>(base.layout.supra_index(mux_idx, layer, node));
            build_transition_row(network, config, base.layout, mux_idx, layer, node, &mask, cols,
                                 vals);
            overrides_.push_back({row, cols, vals});
        }
    }
    std::sort(overrides_.begin(), overrides_.end(),
              [](const Override& a, const Override& b) { return a.row < b.row; });

    // Adjusted dangling list: base rows keep their status unless overridden.
    std::vector<std::uint32_t> overridden;
    std::vector<std::uint32_t> newly_dangling;
    for (const Override& o : overrides_) {
        overridden.push_back(o.row);
        if (o.cols.empty()) {
            newly_dangling.push_back(o.row);
        }
    }
    for (const std::uint32_t row : base.dangling) {
        if (!std::binary_search(overridden.begin(), overridden.end(), row)) {
            dangling_.push_back(row);
        }
    }
    dangling_.insert(dangling_.end(), newly_dangling.begin(), newly_dangling.end());
    std::sort(dangling_.begin(), dangling_.end());
}

void TransitionOverlay::apply_transpose(std::span<const double> in,
                                        std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    const SparseMatrix& m = base_->matrix;
    std::size_t next_override = 0;
    for (std::size_t r = 0; r < m.n_rows; ++r) {
        if (next_override < overrides_.size() && overrides_[next_override].row == r) {
            const Override& o = overrides_[next_override];
            ++next_override;
            const double x = in[r];
            if (x != 0.0) {
                for (std::size_t k = 0; k < o.cols.size(); ++k) {
                    out[o.cols[k]] += o.vals[k] * x;
                }
            }
            continue;
        }
        const double x = in[r];
        if (x == 0.0) {
            continue;
        }
        for (std::size_t k = m.row_offsets[r]; k < m.row_offsets[r + 1]; ++k) {
            out[m.col_indices[k]] += m.values[k] * x;
        }
    }
}

double TransitionOverlay::dangling_mass(std::span<const double> p) const {
    double mass = 0.0;
    for (const std::uint32_t row : dangling_) {
        mass += p[row];
    }
    return mass;
}

void dump_transition_tsv(std::ostream& out, const TransitionMatrix& transition) {
    const SparseMatrix& m = transition.matrix;
    for (std::size_t r = 0; r < m.n_rows; ++r) {
        for (std::size_t k = m.row_offsets[r]; k < m.row_offsets[r + 1]; ++k) {
            out << r << '\t' << m.col_indices[k] << '\t' << format_score(m.values[k]) << '\n';
        }
    }
}

} // namespace uniwalk
