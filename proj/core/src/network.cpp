#include "uniwalk/network.hpp"

#include <algorithm>

#include "uniwalk/errors.hpp"

namespace uniwalk {

std::vector<Edge> canonical_edges(std::vector<Edge> edges, bool weighted) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    std::vector<Edge> merged;
    merged.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size();) {
        Edge e = edges[i];
        ++i;
        while (i < edges.size() && edges[i].source == e.source && edges[i].target == e.target) {
            if (weighted) {
                e.weight += edges[i].weight;
            }
            ++i;
        }
        if (!weighted) {
            e.weight = 1.0;
        }
        merged.push_back(e);
    }
    return merged;
}

namespace {

SparseMatrix adjacency_from_edges(const std::vector<Edge>& edges, std::size_t n_rows,
                                  std::size_t n_cols) {
    SparseMatrix m(n_rows, n_cols);
    for (const Edge& e : edges) {
        if (e.source >= n_rows || e.target >= n_cols) {
            throw Error("edge endpoint out of range");
        }
        m.row_offsets[e.source + 1]++;
    }
    for (std::size_t r = 0; r < n_rows; ++r) {
        m.row_offsets[r + 1] += m.row_offsets[r];
    }
    m.col_indices.reserve(edges.size());
    m.values.reserve(edges.size());
    for (const Edge& e : edges) {  // edges are sorted by (source, target)
        m.col_indices.push_back(e.target);
        m.values.push_back(e.weight);
    }
    return m;
}

std::vector<double> row_sums(const SparseMatrix& m) {
    std::vector<double> sums(m.n_rows, 0.0);
    for (std::size_t r = 0; r < m.n_rows; ++r) {
        double s = 0.0;
        for (std::size_t k = m.row_offsets[r]; k < m.row_offsets[r + 1]; ++k) {
            s += m.values[k];
        }
        sums[r] = s;
    }
    return sums;
}

} // namespace

void MultiplexNetwork::finalize() {
    const std::size_t n = nodes.size();
    if (layers.empty()) {
        throw Error("multiplex network needs at least one layer");
    }
    if (layer_count() == 1) {
        delta = 0.0;  // no layer jumps exist
    }
    if (tau.empty()) {
        tau.assign(layer_count(), 1.0 / static_cast<double>(layer_count()));
    }
    for (Layer& layer : layers) {
        layer.adjacency = adjacency_from_edges(layer.edges, n, n);
        layer.out_weight = row_sums(layer.adjacency);
    }
}

void BipartiteNetwork::finalize(std::size_t n_source, std::size_t n_target) {
    forward = adjacency_from_edges(edges, n_source, n_target);
    forward_row_sum = row_sums(forward);
    if (!directed) {
        std::vector<Edge> flipped;
        flipped.reserve(edges.size());
        for (const Edge& e : edges) {
            flipped.push_back({e.target, e.source, e.weight});
        }
        std::sort(flipped.begin(), flipped.end(), [](const Edge& a, const Edge& b) {
            return a.source != b.source ? a.source < b.source : a.target < b.target;
        });
        reverse = adjacency_from_edges(flipped, n_target, n_source);
        reverse_row_sum = row_sums(reverse);
    } else {
        reverse = SparseMatrix(n_target, n_source);
        reverse_row_sum.assign(n_target, 0.0);
    }
}

void MultilayerNetwork::finalize() {
    const std::size_t n_mux = multiplexes.size();
    if (n_mux == 0) {
        throw Error("multilayer network needs at least one multiplex");
    }
    for (MultiplexNetwork& m : multiplexes) {
        m.finalize();
    }

    view_index_.assign(n_mux * n_mux, -1);
    view_transposed_.assign(n_mux * n_mux, 0);

    for (std::size_t b = 0; b < bipartites.size(); ++b) {
        BipartiteNetwork& bp = bipartites[b];
        if (bp.source_type >= n_mux || bp.target_type >= n_mux) {
            throw Error("bipartite references unknown multiplex index");
        }
        if (bp.source_type == bp.target_type) {
            throw Error("bipartite must connect two distinct multiplexes");
        }
        bp.finalize(multiplexes[bp.source_type].node_count(),
                    multiplexes[bp.target_type].node_count());

        auto claim = [&](std::size_t src, std::size_t dst, bool transposed) {
            const std::size_t slot = src * n_mux + dst;
            if (view_index_[slot] >= 0) {
                throw Error("more than one bipartite network for ordered pair (" +
                            std::to_string(src) + "," + std::to_string(dst) + ")");
            }
            view_index_[slot] = static_cast<std::int32_t>(b);
            view_transposed_[slot] = transposed ? 1 : 0;
        };
        claim(bp.source_type, bp.target_type, false);
        if (!bp.directed) {
            claim(bp.target_type, bp.source_type, true);
        }
    }
}

std::optional<BipartiteView> MultilayerNetwork::bipartite_view(std::size_t source,
                                                               std::size_t target) const {
    const std::size_t n_mux = multiplexes.size();
    if (source >= n_mux || target >= n_mux || view_index_.empty()) {
        return std::nullopt;
    }
    const std::size_t slot = source * n_mux + target;
    if (view_index_[slot] < 0) {
        return std::nullopt;
    }
    return BipartiteView{&bipartites[static_cast<std::size_t>(view_index_[slot])],
                         view_transposed_[slot] != 0};
}

std::vector<std::uint32_t> MultilayerNetwork::outgoing_partners(std::size_t alpha,
                                                                NodeId node) const {
    std::vector<std::uint32_t> partners;
    for (std::size_t beta = 0; beta < multiplexes.size(); ++beta) {
        if (beta == alpha) {
            continue;
        }
        const auto view = bipartite_view(alpha, beta);
        if (view && view->row_sums()[node] > 0.0) {
            partners.push_back(static_cast<std::uint32_t>(beta));
        }
    }
    return partners;
}

std::size_t MultilayerNetwork::edge_count(std::size_t multiplex) const {
    std::size_t count = 0;
    for (const Layer& layer : multiplexes.at(multiplex).layers) {
        count += layer.edges.size();
    }
    return count;
}

} // namespace uniwalk
