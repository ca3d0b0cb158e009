#include "uniwalk/rwr.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"

namespace uniwalk {

std::size_t SeedSet::total() const {
    std::size_t n = 0;
    for (const auto& ids : per_multiplex) {
        n += ids.size();
    }
    return n;
}

SeedSet resolve_seeds(const MultilayerNetwork& network, const std::vector<std::string>& names) {
    SeedSet seeds;
    seeds.per_multiplex.resize(network.multiplex_count());
    for (const std::string& name : names) {
        std::size_t found_mux = 0;
        NodeId found_id = 0;
        std::size_t hits = 0;
        for (std::size_t k = 0; k < network.multiplex_count(); ++k) {
            if (const auto id = network.multiplexes[k].nodes.find(name)) {
                found_mux = k;
                found_id = *id;
                ++hits;
            }
        }
        if (hits == 0) {
            throw SeedError("seed '" + name + "' is not a node of any multiplex");
        }
        if (hits > 1) {
            throw SeedError("seed '" + name + "' is ambiguous: present in " +
                            std::to_string(hits) + " multiplexes");
        }
        seeds.per_multiplex[found_mux].push_back(found_id);
    }
    std::size_t total = 0;
    for (auto& ids : seeds.per_multiplex) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        total += ids.size();
    }
    if (total == 0) {
        throw SeedError("no seeds given");
    }
    return seeds;
}

RestartVector build_restart(const MultilayerNetwork& network, const RwrConfig& config,
                            const SeedSet& seeds, const BlockLayout& layout) {
    const std::size_t n_mux = network.multiplex_count();
    if (seeds.total() == 0) {
        throw SeedError("restart distribution needs at least one seed");
    }

    std::vector<double> eta;
    if (config.eta) {
        eta = *config.eta;
        for (std::size_t k = 0; k < n_mux; ++k) {
            if (eta[k] > 0.0 && !seeds.has_seed(k)) {
                throw SeedError("eta places restart mass on multiplex " + std::to_string(k) +
                                ", which has no seed");
            }
        }
    } else {
        std::size_t seeded = 0;
        for (std::size_t k = 0; k < n_mux; ++k) {
            if (seeds.has_seed(k)) {
                ++seeded;
            }
        }
        eta.assign(n_mux, 0.0);
        for (std::size_t k = 0; k < n_mux; ++k) {
            if (seeds.has_seed(k)) {
                eta[k] = 1.0 / static_cast<double>(seeded);
            }
        }
    }

    RestartVector restart;
    restart.p0.assign(layout.dim, 0.0);
    for (std::size_t k = 0; k < n_mux; ++k) {
        if (eta[k] == 0.0 || !seeds.has_seed(k)) {
            continue;
        }
        const auto& ids = seeds.per_multiplex[k];
        const MultiplexNetwork& mux = network.multiplexes[k];
        const double per_seed = eta[k] / static_cast<double>(ids.size());
        for (std::size_t layer = 0; layer < mux.layer_count(); ++layer) {
            const double mass = per_seed * mux.tau[layer];
            for (const NodeId id : ids) {
                restart.p0[layout.supra_index(k, layer, id)] = mass;
            }
        }
    }
    return restart;
}

ScoreResult solve(const TransitionMatrix& transition, const RestartVector& restart, double r,
                  double epsilon, std::size_t max_iter) {
    if (!(r > 0.0) || r > 1.0) {
        throw ConfigError("r must lie in (0, 1]");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("epsilon must be positive");
    }
    return detail::solve_impl(transition, restart, r, epsilon, max_iter);
}

ScoreResult solve(const TransitionOverlay& transition, const RestartVector& restart, double r,
                  double epsilon, std::size_t max_iter) {
    if (!(r > 0.0) || r > 1.0) {
        throw ConfigError("r must lie in (0, 1]");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("epsilon must be positive");
    }
    return detail::solve_impl(transition, restart, r, epsilon, max_iter);
}

namespace {

// Descending score, ties by ascending node name.
bool ranks_before(double score_a, const std::string& name_a, double score_b,
                  const std::string& name_b) {
    if (score_a != score_b) {
        return score_a > score_b;
    }
    return name_a < name_b;
}

} // namespace

std::vector<RankedNode> rank_nodes(const MultilayerNetwork& network, const ScoreResult& result,
                                   std::size_t multiplex, const std::set<NodeId>& exclude) {
    const auto& scores = result.per_multiplex.at(multiplex);
    const NodeTable& table = network.multiplexes[multiplex].nodes;
    std::vector<RankedNode> out;
    out.reserve(scores.size());
    for (NodeId i = 0; i < scores.size(); ++i) {
        if (exclude.count(i)) {
            continue;
        }
        out.push_back({table.name(i), scores[i], 0});
    }
    std::sort(out.begin(), out.end(), [](const RankedNode& a, const RankedNode& b) {
        return ranks_before(a.score, a.name, b.score, b.name);
    });
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].rank = i + 1;
    }
    return out;
}

std::size_t rank_of(const MultilayerNetwork& network, const ScoreResult& result,
                    std::size_t multiplex, NodeId target, const std::set<NodeId>& exclude) {
    const auto& scores = result.per_multiplex.at(multiplex);
    const NodeTable& table = network.multiplexes[multiplex].nodes;
    const double target_score = scores.at(target);
    const std::string& target_name = table.name(target);
    std::size_t rank = 1;
    for (NodeId i = 0; i < scores.size(); ++i) {
        if (i == target || exclude.count(i)) {
            continue;
        }
        if (ranks_before(scores[i], table.name(i), target_score, target_name)) {
            ++rank;
        }
    }
    return rank;
}

std::vector<SubnetworkEdge> extract_subnetwork(const MultilayerNetwork& network,
                                               const ScoreResult& result, const SeedSet& seeds,
                                               std::size_t k_per_type) {
    const std::size_t n_mux = network.multiplex_count();
    std::vector<std::set<NodeId>> keep(n_mux);

    for (std::size_t k = 0; k < n_mux; ++k) {
        std::set<NodeId> seed_ids;
        if (k < seeds.per_multiplex.size()) {
            seed_ids.insert(seeds.per_multiplex[k].begin(), seeds.per_multiplex[k].end());
        }
        keep[k] = seed_ids;
        const auto ranking = rank_nodes(network, result, k, seed_ids);
        for (std::size_t i = 0; i < ranking.size() && i < k_per_type; ++i) {
            keep[k].insert(*network.multiplexes[k].nodes.find(ranking[i].name));
        }
    }

    std::vector<SubnetworkEdge> out;
    for (std::size_t k = 0; k < n_mux; ++k) {
        const NodeTable& table = network.multiplexes[k].nodes;
        for (std::size_t l = 0; l < network.multiplexes[k].layer_count(); ++l) {
            const Layer& layer = network.multiplexes[k].layers[l];
            for (const Edge& e : layer.edges) {
                if (!layer.directed && e.source > e.target) {
                    continue;
                }
                if (keep[k].count(e.source) && keep[k].count(e.target)) {
                    out.push_back({table.name(e.source), table.name(e.target), e.weight,
                                   "multiplex_" + std::to_string(k) + "_layer_" +
                                       std::to_string(l)});
                }
            }
        }
    }
    for (const BipartiteNetwork& bp : network.bipartites) {
        const NodeTable& src = network.multiplexes[bp.source_type].nodes;
        const NodeTable& dst = network.multiplexes[bp.target_type].nodes;
        for (const Edge& e : bp.edges) {
            if (keep[bp.source_type].count(e.source) && keep[bp.target_type].count(e.target)) {
                out.push_back({src.name(e.source), dst.name(e.target), e.weight,
                               "bipartite_" + std::to_string(bp.source_type) + "_" +
                                   std::to_string(bp.target_type)});
            }
        }
    }
    return out;
}

void write_ranking_tsv(std::ostream& out, const std::vector<RankedNode>& ranking) {
    out << "node\tscore\trank\n";
    for (const RankedNode& r : ranking) {
        out << r.name << '\t' << format_score(r.score) << '\t' << r.rank << '\n';
    }
}

void write_subnetwork_tsv(std::ostream& out, const std::vector<SubnetworkEdge>& edges) {
    out << "source\ttarget\tweight\tcontext\n";
    for (const SubnetworkEdge& e : edges) {
        out << e.source << '\t' << e.target << '\t' << format_score(e.weight) << '\t' << e.context
            << '\n';
    }
}

} // namespace uniwalk
