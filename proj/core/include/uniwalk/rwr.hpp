#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "uniwalk/config.hpp"
#include "uniwalk/network.hpp"
#include "uniwalk/supra.hpp"

namespace uniwalk {

/// Seed node ids grouped by multiplex. At least one multiplex has a seed.
struct SeedSet {
    std::vector<std::vector<NodeId>> per_multiplex;  // sorted, unique

    std::size_t total() const;
    bool has_seed(std::size_t multiplex) const {
        return multiplex < per_multiplex.size() && !per_multiplex[multiplex].empty();
    }
};

/// Resolves seed names; every name must match exactly one (multiplex, node).
/// Throws SeedError on unknown or ambiguous names, or when empty.
SeedSet resolve_seeds(const MultilayerNetwork& network, const std::vector<std::string>& names);

/// Restart distribution over the supra space: the entry of replica
/// (multiplex k, layer j, seed i) is eta_k * tau_kj / |seeds in k|.
struct RestartVector {
    std::vector<double> p0;  // length D, sums to 1
};

/// Throws SeedError when an explicit eta places mass on a seedless multiplex
/// or no seeds exist. Automatic eta is uniform over seeded multiplexes.
RestartVector build_restart(const MultilayerNetwork& network, const RwrConfig& config,
                            const SeedSet& seeds, const BlockLayout& layout);

struct ScoreResult {
    std::vector<double> steady;                       // length D, sums to 1
    std::vector<std::vector<double>> per_multiplex;   // replica scores summed per node
    std::size_t iterations = 0;
    double residual = 0.0;                            // final L1 change
    std::vector<double> residual_history;             // one entry per iteration
    bool converged = false;
};

namespace detail {

template <typename Transition>
ScoreResult solve_impl(const Transition& transition, const RestartVector& restart, double r,
                       double epsilon, std::size_t max_iter) {
    const std::size_t dim = transition.dim();
    ScoreResult result;
    std::vector<double> p = restart.p0;
    std::vector<double> next(dim, 0.0);

    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        transition.apply_transpose(p, next);
        const double stray = transition.dangling_mass(p);
        const double keep = 1.0 - r;
        double change = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            // Dangling rows teleport to p0 inside the same step, so the total
            // mass stays exactly 1.
            const double v = keep * (next[i] + stray * restart.p0[i]) + r * restart.p0[i];
            change += std::abs(v - p[i]);
            next[i] = v;
        }
        std::swap(p, next);
        result.residual = change;
        result.residual_history.push_back(change);
        result.iterations = iter;
        if (change < epsilon) {
            result.converged = true;
            break;
        }
    }

    result.steady = std::move(p);
    const BlockLayout& layout = transition.block_layout();
    result.per_multiplex.resize(layout.multiplex_count());
    for (std::size_t k = 0; k < layout.multiplex_count(); ++k) {
        const auto& extent = layout.multiplexes[k];
        auto& scores = result.per_multiplex[k];
        scores.assign(extent.node_count, 0.0);
        for (std::size_t layer = 0; layer < extent.layer_count; ++layer) {
            const std::size_t base = extent.offset + layer * extent.node_count;
            for (std::size_t i = 0; i < extent.node_count; ++i) {
                scores[i] += result.steady[base + i];
            }
        }
    }
    return result;
}

} // namespace detail

/// Power iteration of p <- (1-r) S^T p + (1-r) (dangling mass) p0 + r p0
/// from p = p0 until the L1 change drops below epsilon. Non-convergence is
/// reported through `converged`, not an exception.
ScoreResult solve(const TransitionMatrix& transition, const RestartVector& restart, double r,
                  double epsilon = 1e-10, std::size_t max_iter = 1000);

ScoreResult solve(const TransitionOverlay& transition, const RestartVector& restart, double r,
                  double epsilon = 1e-10, std::size_t max_iter = 1000);

struct RankedNode {
    std::string name;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based
};

/// Aggregated scores of one multiplex sorted by descending score, ties broken
/// by ascending node name; `exclude` ids are omitted.
std::vector<RankedNode> rank_nodes(const MultilayerNetwork& network, const ScoreResult& result,
                                   std::size_t multiplex, const std::set<NodeId>& exclude = {});

/// 1-based rank `target` would get among the non-excluded nodes of the
/// multiplex (same ordering as rank_nodes, without materializing it).
std::size_t rank_of(const MultilayerNetwork& network, const ScoreResult& result,
                    std::size_t multiplex, NodeId target, const std::set<NodeId>& exclude = {});

struct SubnetworkEdge {
    std::string source;
    std::string target;
    double weight = 0.0;
    std::string context;  // multiplex_<k>_layer_<l> or bipartite_<i>_<j>
};

/// Induced subgraph on the union of the seeds and the top-k non-seed nodes of
/// each multiplex, with every intra-layer and bipartite edge among them.
std::vector<SubnetworkEdge> extract_subnetwork(const MultilayerNetwork& network,
                                               const ScoreResult& result, const SeedSet& seeds,
                                               std::size_t k_per_type);

/// `node<TAB>score<TAB>rank` with scores at 17 significant digits.
void write_ranking_tsv(std::ostream& out, const std::vector<RankedNode>& ranking);

void write_subnetwork_tsv(std::ostream& out, const std::vector<SubnetworkEdge>& edges);

} // namespace uniwalk
