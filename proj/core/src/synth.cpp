#include "uniwalk/synth.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"

namespace uniwalk {

namespace {

std::string node_name(std::size_t type, std::size_t index) {
    std::string name(1, static_cast<char>('a' + type % 26));
    return name + std::to_string(index);
}

void fill_names(NodeTable& table, std::size_t type, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        table.intern(node_name(type, i));
    }
}

void symmetrize_and_store(Layer& layer, std::vector<Edge> edges) {
    if (!layer.directed) {
        const std::size_t original = edges.size();
        for (std::size_t i = 0; i < original; ++i) {
            if (edges[i].source != edges[i].target) {
                edges.push_back({edges[i].target, edges[i].source, edges[i].weight});
            }
        }
    }
    layer.edges = canonical_edges(std::move(edges), layer.weighted);
}

} // namespace

SynthBundle generate_random(const RandomNetworkSpec& spec, std::uint64_t rng_seed) {
    const std::size_t n_mux = spec.layers_per_multiplex.size();
    if (n_mux == 0 || spec.nodes_per_multiplex.size() != n_mux ||
        spec.edges_per_layer.size() != n_mux) {
        throw ConfigError("random network spec: per-multiplex lists must share one length");
    }
    std::mt19937_64 rng(rng_seed);

    SynthBundle bundle;
    for (std::size_t k = 0; k < n_mux; ++k) {
        MultiplexNetwork mux;
        const std::size_t n = spec.nodes_per_multiplex[k];
        if (n < 2) {
            throw ConfigError("random network spec: each multiplex needs >= 2 nodes");
        }
        fill_names(mux.nodes, k, n);
        std::uniform_int_distribution<std::size_t> node(0, n - 1);
        std::uniform_real_distribution<double> weight(0.5, 1.5);
        for (std::size_t l = 0; l < spec.layers_per_multiplex[k]; ++l) {
            Layer layer;
            layer.directed = spec.directed;
            layer.weighted = spec.weighted;
            std::vector<Edge> edges;
            edges.reserve(spec.edges_per_layer[k]);
            for (std::size_t e = 0; e < spec.edges_per_layer[k]; ++e) {
                NodeId u = static_cast<NodeId>(node(rng));
                NodeId v = static_cast<NodeId>(node(rng));
                if (u == v) {
                    v = static_cast<NodeId>((v + 1) % n);
                }
                edges.push_back({u, v, spec.weighted ? weight(rng) : 1.0});
            }
            symmetrize_and_store(layer, std::move(edges));
            mux.layers.push_back(std::move(layer));
        }
        bundle.network.multiplexes.push_back(std::move(mux));
    }

    for (std::size_t i = 0; i < n_mux; ++i) {
        for (std::size_t j = i + 1; j < n_mux; ++j) {
            const std::size_t n_src = spec.nodes_per_multiplex[i];
            const std::size_t n_dst = spec.nodes_per_multiplex[j];
            const std::size_t covered =
                static_cast<std::size_t>(spec.overlap * static_cast<double>(n_src));
            std::vector<NodeId> sources(n_src);
            for (std::size_t s = 0; s < n_src; ++s) {
                sources[s] = static_cast<NodeId>(s);
            }
            std::shuffle(sources.begin(), sources.end(), rng);

            BipartiteNetwork bp;
            bp.source_type = static_cast<std::uint32_t>(i);
            bp.target_type = static_cast<std::uint32_t>(j);
            bp.directed = false;
            std::uniform_int_distribution<std::size_t> target(0, n_dst - 1);
            std::vector<Edge> edges;
            for (std::size_t s = 0; s < covered; ++s) {
                for (std::size_t d = 0; d < spec.bipartite_degree; ++d) {
                    edges.push_back({sources[s], static_cast<NodeId>(target(rng)), 1.0});
                }
            }
            bp.edges = canonical_edges(std::move(edges), /*weighted=*/true);
            bundle.network.bipartites.push_back(std::move(bp));
        }
    }

    bundle.network.finalize();
    bundle.config = default_rwr_config(bundle.network);
    bundle.seeds = {node_name(0, 0), node_name(0, 1)};
    return bundle;
}

SynthBundle generate_planted(const PlantedNetworkSpec& spec, std::uint64_t rng_seed) {
    const std::size_t n = spec.nodes_per_type;
    const std::size_t c = spec.communities;
    if (c == 0 || n < 2 * c) {
        throw ConfigError("planted network spec: need at least two nodes per community");
    }
    const std::size_t community_size = n / c;  // node i belongs to community i % c
    if (spec.associations_per_anchor + 1 > community_size) {
        throw ConfigError("planted network spec: communities too small for the requested "
                          "associations per anchor");
    }
    std::mt19937_64 rng(rng_seed);

    SynthBundle bundle;
    auto community_members = [&](std::size_t comm) {
        std::vector<NodeId> members;
        for (std::size_t i = comm; i < n; i += c) {
            members.push_back(static_cast<NodeId>(i));
        }
        return members;
    };

    auto community_layer = [&](std::size_t intra, std::size_t inter) {
        Layer layer;
        layer.directed = false;
        layer.weighted = false;
        std::vector<Edge> edges;
        std::uniform_int_distribution<std::size_t> any(0, n - 1);
        for (NodeId u = 0; u < n; ++u) {
            const auto members = community_members(u % c);
            std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
            for (std::size_t d = 0; d < intra; ++d) {
                NodeId v = members[pick(rng)];
                if (v == u) {
                    v = members[(pick(rng) + 1) % members.size()];
                }
                if (v != u) {
                    edges.push_back({u, v, 1.0});
                }
            }
            for (std::size_t d = 0; d < inter; ++d) {
                NodeId v = static_cast<NodeId>(any(rng));
                if (v % c != u % c) {
                    edges.push_back({u, v, 1.0});
                }
            }
        }
        symmetrize_and_store(layer, std::move(edges));
        return layer;
    };

    // type 0: two community-structured layers; type 1: one; type 2: two
    // sparse random layers.
    const std::size_t layer_counts[3] = {2, 1, 2};
    for (std::size_t type = 0; type < 3; ++type) {
        MultiplexNetwork mux;
        fill_names(mux.nodes, type, n);
        for (std::size_t l = 0; l < layer_counts[type]; ++l) {
            if (type < 2) {
                mux.layers.push_back(community_layer(spec.intra_degree, spec.inter_degree));
            } else {
                Layer layer;
                layer.directed = false;
                layer.weighted = false;
                std::vector<Edge> edges;
                std::uniform_int_distribution<std::size_t> any(0, n - 1);
                for (NodeId u = 0; u < n; ++u) {
                    for (std::size_t d = 0; d < 2; ++d) {
                        const NodeId v = static_cast<NodeId>(any(rng));
                        if (v != u) {
                            edges.push_back({u, v, 1.0});
                        }
                    }
                }
                symmetrize_and_store(layer, std::move(edges));
                mux.layers.push_back(std::move(layer));
            }
        }
        bundle.network.multiplexes.push_back(std::move(mux));
    }

    // Ground-truth associations: each type-1 anchor links to
    // associations_per_anchor distinct type-0 nodes of its own community.
    {
        BipartiteNetwork bp;
        bp.source_type = 0;
        bp.target_type = 1;
        bp.directed = false;
        std::vector<Edge> edges;
        for (NodeId a = 0; a < n; ++a) {
            auto members = community_members(a % c);
            std::shuffle(members.begin(), members.end(), rng);
            for (std::size_t d = 0; d < spec.associations_per_anchor; ++d) {
                edges.push_back({members[d], a, 1.0});
            }
        }
        bp.edges = canonical_edges(std::move(edges), /*weighted=*/true);
        bundle.network.bipartites.push_back(std::move(bp));
    }

    // Weak couplings through type 2, mirroring a low-overlap carrier:
    // exactly floor(coverage * n) distinct source nodes get one edge each.
    auto sparse_carrier = [&](std::uint32_t src, std::uint32_t dst) {
        BipartiteNetwork bp;
        bp.source_type = src;
        bp.target_type = dst;
        bp.directed = false;
        std::vector<Edge> edges;
        const std::size_t covered =
            static_cast<std::size_t>(spec.carrier_coverage * static_cast<double>(n));
        std::vector<NodeId> sources(n);
        for (std::size_t i = 0; i < n; ++i) {
            sources[i] = static_cast<NodeId>(i);
        }
        std::shuffle(sources.begin(), sources.end(), rng);
        std::uniform_int_distribution<std::size_t> any(0, n - 1);
        for (std::size_t s = 0; s < covered; ++s) {
            edges.push_back({sources[s], static_cast<NodeId>(any(rng)), 1.0});
        }
        bp.edges = canonical_edges(std::move(edges), /*weighted=*/true);
        return bp;
    };
    bundle.network.bipartites.push_back(sparse_carrier(0, 2));
    bundle.network.bipartites.push_back(sparse_carrier(2, 1));

    bundle.network.finalize();
    bundle.config = default_rwr_config(bundle.network);
    bundle.seeds = {node_name(0, 0), node_name(0, static_cast<std::size_t>(c))};
    return bundle;
}

std::vector<std::filesystem::path> write_bundle(const SynthBundle& bundle,
                                                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    const MultilayerNetwork& net = bundle.network;

    KeyValue config;
    for (std::size_t k = 0; k < net.multiplex_count(); ++k) {
        const MultiplexNetwork& mux = net.multiplexes[k];
        {
            // explicit node list: keeps ids stable and isolated nodes alive
            const std::string file = "nodes_" + std::to_string(k) + ".txt";
            std::ofstream out(out_dir / file, std::ios::binary);
            for (const std::string& name : mux.nodes.names()) {
                out << name << '\n';
            }
            written.push_back(out_dir / file);
            config.set_scalar("multiplex." + std::to_string(k) + ".nodes", file);
        }
        KeyValue::List layer_files;
        KeyValue::List directed;
        KeyValue::List weighted;
        for (std::size_t l = 0; l < mux.layer_count(); ++l) {
            const std::string file =
                "multiplex_" + std::to_string(k) + "_layer_" + std::to_string(l) + ".tsv";
            std::ofstream out(out_dir / file, std::ios::binary);
            serialize_edge_list(out, mux.layers[l], mux.nodes);
            written.push_back(out_dir / file);
            layer_files.push_back({file});
            directed.push_back({mux.layers[l].directed ? "true" : "false"});
            weighted.push_back({mux.layers[l].weighted ? "true" : "false"});
        }
        const std::string prefix = "multiplex." + std::to_string(k);
        config.set(prefix + ".layers", {std::move(layer_files)});
        config.set(prefix + ".directed", {std::move(directed)});
        config.set(prefix + ".weighted", {std::move(weighted)});
        config.set_scalar(prefix + ".delta", format_score(mux.delta));
        KeyValue::List tau;
        for (const double t : mux.tau) {
            tau.push_back({format_score(t)});
        }
        config.set(prefix + ".tau", {std::move(tau)});
    }

    for (const BipartiteNetwork& bp : net.bipartites) {
        const std::string pair =
            std::to_string(bp.source_type) + "_" + std::to_string(bp.target_type);
        const std::string file = "bipartite_" + pair + ".tsv";
        std::ofstream out(out_dir / file, std::ios::binary);
        serialize_bipartite_list(out, bp, net.multiplexes[bp.source_type].nodes,
                                 net.multiplexes[bp.target_type].nodes);
        written.push_back(out_dir / file);
        config.set_scalar("bipartite." + pair + ".path", file);
        config.set_scalar("bipartite." + pair + ".directed", bp.directed ? "true" : "false");
    }

    {
        std::ofstream out(out_dir / "seeds.txt", std::ios::binary);
        for (const std::string& s : bundle.seeds) {
            out << s << '\n';
        }
        written.push_back(out_dir / "seeds.txt");
        config.set_scalar("seeds", "seeds.txt");
    }

    config.set_scalar("r", format_score(bundle.config.r));
    KeyValue::List lambda_rows;
    for (const auto& row : bundle.config.lambda) {
        KeyValue::List r;
        for (const double v : row) {
            r.push_back({format_score(v)});
        }
        lambda_rows.push_back({std::move(r)});
    }
    config.set("lambda", {std::move(lambda_rows)});
    if (bundle.config.eta) {
        KeyValue::List eta;
        for (const double v : *bundle.config.eta) {
            eta.push_back({format_score(v)});
        }
        config.set("eta", {std::move(eta)});
    } else {
        config.set_scalar("eta", "auto");
    }

    {
        std::ofstream out(out_dir / "config.yml", std::ios::binary);
        out << config.to_text();
        written.push_back(out_dir / "config.yml");
    }
    return written;
}

} // namespace uniwalk
