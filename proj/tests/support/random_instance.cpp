#include "random_instance.hpp"

#include <algorithm>

namespace uniwalk::testing {

namespace {

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> uniform(0.05, 1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
        x = uniform(rng);
        sum += x;
    }
    for (double& x : v) {
        x /= sum;
    }
    return v;
}

} // namespace

RandomInstance make_random_instance(std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    RandomInstance instance;

    const std::size_t n_mux = 1 + rng() % 3;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.1, 2.0);

    for (std::size_t k = 0; k < n_mux; ++k) {
        MultiplexNetwork mux;
        const std::size_t n = 2 + rng() % 29;  // <= 30 nodes
        for (std::size_t i = 0; i < n; ++i) {
            mux.nodes.intern("m" + std::to_string(k) + "n" + std::to_string(i));
        }
        const std::size_t n_layers = 1 + rng() % 3;
        for (std::size_t l = 0; l < n_layers; ++l) {
            Layer layer;
            layer.directed = unit(rng) < 0.5;
            layer.weighted = unit(rng) < 0.5;
            std::vector<Edge> edges;
            const std::size_t m = n + rng() % (2 * n);
            for (std::size_t e = 0; e < m; ++e) {
                const NodeId u = static_cast<NodeId>(rng() % n);
                const NodeId v = static_cast<NodeId>(rng() % n);
                edges.push_back({u, v, layer.weighted ? weight(rng) : 1.0});
                if (!layer.directed && u != v) {
                    edges.push_back({v, u, edges.back().weight});
                }
            }
            layer.edges = canonical_edges(std::move(edges), layer.weighted);
            mux.layers.push_back(std::move(layer));
        }
        mux.delta = unit(rng);
        mux.tau = random_simplex(rng, n_layers);
        instance.network.multiplexes.push_back(std::move(mux));
    }

    for (std::size_t i = 0; i < n_mux; ++i) {
        for (std::size_t j = i + 1; j < n_mux; ++j) {
            if (unit(rng) > 0.7) {
                continue;  // partial coverage: some pairs stay unconnected
            }
            BipartiteNetwork bp;
            const bool flip = unit(rng) < 0.3;
            bp.source_type = static_cast<std::uint32_t>(flip ? j : i);
            bp.target_type = static_cast<std::uint32_t>(flip ? i : j);
            bp.directed = unit(rng) < 0.4;
            const std::size_t n_src =
                instance.network.multiplexes[bp.source_type].node_count();
            const std::size_t n_dst =
                instance.network.multiplexes[bp.target_type].node_count();
            std::vector<Edge> edges;
            const std::size_t m = 1 + rng() % (2 * std::min(n_src, n_dst));
            for (std::size_t e = 0; e < m; ++e) {
                edges.push_back({static_cast<NodeId>(rng() % n_src),
                                 static_cast<NodeId>(rng() % n_dst),
                                 unit(rng) < 0.5 ? 1.0 : weight(rng)});
            }
            bp.edges = canonical_edges(std::move(edges), /*weighted=*/true);
            instance.network.bipartites.push_back(std::move(bp));
        }
    }

    instance.network.finalize();

    // lambda: random row-stochastic with support on the diagonal and the
    // actually connected pairs.
    instance.config.lambda.assign(n_mux, std::vector<double>(n_mux, 0.0));
    for (std::size_t a = 0; a < n_mux; ++a) {
        std::vector<std::size_t> support{a};
        for (std::size_t b = 0; b < n_mux; ++b) {
            if (a != b && instance.network.bipartite_view(a, b)) {
                support.push_back(b);
            }
        }
        const std::vector<double> weights = random_simplex(rng, support.size());
        for (std::size_t s = 0; s < support.size(); ++s) {
            instance.config.lambda[a][support[s]] = weights[s];
        }
    }
    instance.config.r = 0.1 + 0.85 * unit(rng);

    // 1..3 seeds anywhere
    instance.seeds.per_multiplex.resize(n_mux);
    const std::size_t n_seeds = 1 + rng() % 3;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        const std::size_t k = rng() % n_mux;
        const NodeId id =
            static_cast<NodeId>(rng() % instance.network.multiplexes[k].node_count());
        instance.seeds.per_multiplex[k].push_back(id);
    }
    for (auto& ids : instance.seeds.per_multiplex) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }

    // eta: automatic half the time, explicit over seeded multiplexes otherwise
    if (unit(rng) < 0.5) {
        std::vector<std::size_t> seeded;
        for (std::size_t k = 0; k < n_mux; ++k) {
            if (!instance.seeds.per_multiplex[k].empty()) {
                seeded.push_back(k);
            }
        }
        const std::vector<double> weights = random_simplex(rng, seeded.size());
        std::vector<double> eta(n_mux, 0.0);
        for (std::size_t s = 0; s < seeded.size(); ++s) {
            eta[seeded[s]] = weights[s];
        }
        instance.config.eta = eta;
    }

    return instance;
}

} // namespace uniwalk::testing
