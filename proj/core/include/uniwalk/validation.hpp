#pragma once

#include <string>
#include <vector>

#include "uniwalk/network.hpp"

namespace uniwalk {

/// Report-only structural check of a multilayer network: counts, bipartite
/// coverage, isolated nodes, and every invariant violation. The network is
/// valid iff no violations were found.
struct ValidationReport {
    struct MultiplexStats {
        std::size_t nodes = 0;
        std::size_t layers = 0;
        std::vector<std::size_t> edges_per_layer;  // stored orientations
        std::size_t isolated_nodes = 0;            // no edge in any layer
    };
    struct BipartiteStats {
        std::uint32_t source_type = 0;
        std::uint32_t target_type = 0;
        std::size_t edges = 0;
        double source_coverage = 0.0;  // % of source-type nodes with >= 1 edge
        double target_coverage = 0.0;
    };

    std::vector<MultiplexStats> multiplexes;
    std::vector<BipartiteStats> bipartites;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool valid() const { return violations.empty(); }
    std::string to_text() const;
};

ValidationReport validate(const MultilayerNetwork& network);

} // namespace uniwalk
