#include "uniwalk/validation.hpp"

#include <cmath>
#include <sstream>

namespace uniwalk {

namespace {

constexpr double kProbTol = 1e-12;

std::string pct(double value) {
    std::ostringstream out;
    out.precision(1);
    out << std::fixed << value << "%";
    return out.str();
}

} // namespace

ValidationReport validate(const MultilayerNetwork& network) {
    ValidationReport report;

    for (std::size_t k = 0; k < network.multiplex_count(); ++k) {
        const MultiplexNetwork& mux = network.multiplexes[k];
        ValidationReport::MultiplexStats stats;
        stats.nodes = mux.node_count();
        stats.layers = mux.layer_count();

        std::vector<bool> touched(mux.node_count(), false);
        for (const Layer& layer : mux.layers) {
            stats.edges_per_layer.push_back(layer.edges.size());
            for (const Edge& e : layer.edges) {
                if (e.source >= mux.node_count() || e.target >= mux.node_count()) {
                    report.violations.push_back("multiplex " + std::to_string(k) +
                                                ": edge endpoint out of range");
                    continue;
                }
                touched[e.source] = true;
                touched[e.target] = true;
                if (!layer.weighted && e.weight != 1.0) {
                    report.violations.push_back("multiplex " + std::to_string(k) +
                                                ": unweighted layer stores weight != 1");
                }
                if (e.weight < 0.0) {
                    report.violations.push_back("multiplex " + std::to_string(k) +
                                                ": negative edge weight");
                }
            }
            if (!layer.directed) {
                for (const Edge& e : layer.edges) {
                    if (layer.adjacency.at(e.target, e.source) != e.weight) {
                        report.violations.push_back("multiplex " + std::to_string(k) +
                                                    ": undirected layer is not symmetric");
                        break;
                    }
                }
            }
        }
        for (const bool t : touched) {
            if (!t) {
                ++stats.isolated_nodes;
            }
        }

        if (mux.delta < 0.0 || mux.delta > 1.0) {
            report.violations.push_back("multiplex " + std::to_string(k) +
                                        ": delta outside [0, 1]");
        }
        if (mux.tau.size() != mux.layer_count()) {
            report.violations.push_back("multiplex " + std::to_string(k) +
                                        ": tau length does not match layer count");
        } else {
            double sum = 0.0;
            bool negative = false;
            for (const double t : mux.tau) {
                sum += t;
                negative = negative || t < 0.0;
            }
            if (negative) {
                report.violations.push_back("multiplex " + std::to_string(k) +
                                            ": tau has negative entries");
            }
            if (std::abs(sum - 1.0) > kProbTol) {
                report.violations.push_back("multiplex " + std::to_string(k) +
                                            ": tau does not sum to 1");
            }
        }
        report.multiplexes.push_back(std::move(stats));
    }

    for (const BipartiteNetwork& bp : network.bipartites) {
        ValidationReport::BipartiteStats stats;
        stats.source_type = bp.source_type;
        stats.target_type = bp.target_type;
        stats.edges = bp.edges.size();

        if (bp.source_type == bp.target_type) {
            report.violations.push_back("bipartite connects a multiplex to itself");
            report.bipartites.push_back(std::move(stats));
            continue;
        }
        const std::size_t n_src = network.multiplexes[bp.source_type].node_count();
        const std::size_t n_dst = network.multiplexes[bp.target_type].node_count();
        std::vector<bool> src_seen(n_src, false);
        std::vector<bool> dst_seen(n_dst, false);
        for (const Edge& e : bp.edges) {
            if (e.source >= n_src || e.target >= n_dst) {
                report.violations.push_back("bipartite " + std::to_string(bp.source_type) + "_" +
                                            std::to_string(bp.target_type) +
                                            ": edge endpoint out of range");
                continue;
            }
            src_seen[e.source] = true;
            dst_seen[e.target] = true;
        }
        const auto coverage = [](const std::vector<bool>& seen) {
            if (seen.empty()) {
                return 0.0;
            }
            std::size_t hit = 0;
            for (const bool s : seen) {
                hit += s ? 1 : 0;
            }
            return 100.0 * static_cast<double>(hit) / static_cast<double>(seen.size());
        };
        stats.source_coverage = coverage(src_seen);
        stats.target_coverage = coverage(dst_seen);
        if (bp.edges.empty()) {
            report.warnings.push_back("bipartite " + std::to_string(bp.source_type) + "_" +
                                      std::to_string(bp.target_type) + " has no edges");
        }
        report.bipartites.push_back(std::move(stats));
    }

    return report;
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < multiplexes.size(); ++k) {
        const MultiplexStats& m = multiplexes[k];
        out << "multiplex " << k << ": " << m.nodes << " nodes, " << m.layers << " layers,"
            << " edges per layer [";
        for (std::size_t l = 0; l < m.edges_per_layer.size(); ++l) {
            out << (l ? ", " : "") << m.edges_per_layer[l];
        }
        out << "], " << m.isolated_nodes << " isolated nodes\n";
    }
    for (const BipartiteStats& b : bipartites) {
        out << "bipartite " << b.source_type << "_" << b.target_type << ": " << b.edges
            << " edges, source coverage " << pct(b.source_coverage) << ", target coverage "
            << pct(b.target_coverage) << "\n";
    }
    for (const std::string& w : warnings) {
        out << "warning: " << w << "\n";
    }
    for (const std::string& v : violations) {
        out << "violation: " << v << "\n";
    }
    out << (valid() ? "valid\n" : "invalid\n");
    return out.str();
}

} // namespace uniwalk
