#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uniwalk/config.hpp"
#include "uniwalk/network.hpp"

namespace uniwalk {

/// A generated network together with the parameters to walk it and a demo
/// seed list, writable as a self-contained config bundle.
struct SynthBundle {
    MultilayerNetwork network;
    RwrConfig config;
    std::vector<std::string> seeds;
};

/// Erdos-Renyi-style layers with random bipartite couplings. `overlap`
/// controls the fraction of source-type nodes covered by each bipartite
/// (the overlap analysis of sparse couplings).
struct RandomNetworkSpec {
    std::vector<std::size_t> layers_per_multiplex{2, 1};
    std::vector<std::size_t> nodes_per_multiplex{50, 40};
    std::vector<std::size_t> edges_per_layer{120, 100};  // per multiplex
    double overlap = 0.8;
    std::size_t bipartite_degree = 2;  // edges per covered source node
    bool directed = false;
    bool weighted = false;
};

SynthBundle generate_random(const RandomNetworkSpec& spec, std::uint64_t rng_seed);

/// Three multiplexes with a planted community structure: the (0,1) bipartite
/// associates anchors with nodes of their own community (ground truth for
/// the evaluation protocols), while the couplings through multiplex 2 are
/// deliberately sparse so transit augmentation has room to help.
struct PlantedNetworkSpec {
    std::size_t nodes_per_type = 40;
    std::size_t communities = 4;
    std::size_t associations_per_anchor = 4;
    std::size_t intra_degree = 3;   // same-community neighbors per node/layer
    std::size_t inter_degree = 1;   // cross-community neighbors per node/layer
    double carrier_coverage = 0.2;  // fraction of type-2 nodes with a coupling edge
};

SynthBundle generate_planted(const PlantedNetworkSpec& spec, std::uint64_t rng_seed);

/// Writes config.yml, per-layer and per-bipartite edge lists, and seeds.txt
/// into `out_dir`. The bundle is loadable with load_network.
std::vector<std::filesystem::path> write_bundle(const SynthBundle& bundle,
                                                const std::filesystem::path& out_dir);

} // namespace uniwalk
