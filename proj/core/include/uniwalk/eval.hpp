#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "uniwalk/config.hpp"
#include "uniwalk/network.hpp"

namespace uniwalk {

enum class EvalProtocol { Loocv, LinkPrediction };

/// Patched: rebuild only the supra rows touched by the removed edge
/// (normalization is row-local, so this matches a full rebuild exactly).
/// Full: remove the edge from a network copy and renormalize everything.
enum class RebuildStrategy { Patched, Full };

struct EvalTask {
    std::uint32_t left_out_type = 0;  // type of the ranked (left-out) nodes
    std::uint32_t anchor_type = 0;    // type of the seed-side nodes
    EvalProtocol protocol = EvalProtocol::Loocv;
    std::size_t min_degree = 2;       // anchors below this degree are skipped
    bool seed_anchor = true;          // LOOCV only: the anchor joins the seeds
    RebuildStrategy rebuild = RebuildStrategy::Patched;
};

struct EvalRecord {
    std::string left_out;
    std::string anchor;
    std::size_t rank = 0;
    std::size_t pool = 0;  // candidate-pool size (left-out type minus seeds)
};

struct EvalOutcome {
    std::vector<EvalRecord> records;
    std::vector<std::pair<std::size_t, double>> cdf;  // (K, fraction of ranks <= K)
    std::size_t skipped_anchors = 0;
};

struct EvalOptions {
    double epsilon = 1e-10;
    std::size_t max_iter = 1000;
    std::size_t workers = 1;
    std::size_t resume_from = 0;  // records already on disk, skipped entirely
    /// Called once per computed record, in task order.
    std::function<void(const EvalRecord&, std::size_t done, std::size_t total)> on_record;
};

/// Leave-one-out cross-validation over the (left_out_type, anchor_type)
/// bipartite: each association (g, a) is removed in turn, the walk restarts
/// on the anchor's remaining associates (plus the anchor itself), and the
/// rank of g among the non-seed nodes of its type is recorded.
EvalOutcome run_loocv(const MultilayerNetwork& network, const RwrConfig& config,
                      const EvalTask& task, const EvalOptions& options = {});

/// Link-prediction protocol: each bipartite edge (g, a) is removed in turn
/// and g is ranked using the anchor alone as seed.
EvalOutcome run_link_prediction(const MultilayerNetwork& network, const RwrConfig& config,
                                const EvalTask& task, const EvalOptions& options = {});

std::vector<std::pair<std::size_t, double>> compute_cdf(const std::vector<EvalRecord>& records);

/// Mean of CDF(K) over K = 1..max pool; 1.0 means every left-out node ranked
/// first, higher is better.
double cdf_area(const std::vector<std::pair<std::size_t, double>>& cdf);

/// For each edge (g, a) of the (i, j) bipartite, adds `transit_count` fresh
/// nodes to multiplex `via` together with bipartite edges (g, d) and (d, a),
/// raising the connectivity of the (i, via) and (via, j) bipartites. The
/// input network is untouched; a modified copy is returned. Transit nodes
/// are isolated inside `via` unless `transit_self_loops` is set.
MultilayerNetwork augment_transit(const MultilayerNetwork& network, std::size_t via,
                                  std::uint32_t left_out_type, std::uint32_t anchor_type,
                                  std::size_t transit_count, std::uint64_t rng_seed,
                                  bool transit_self_loops = false);

/// Shuffles the target endpoints of a `fraction` share of the bipartite's
/// edges among themselves via pairwise swaps, keeping both degree sequences
/// and edge simplicity exact. Deterministic given the rng seed.
MultilayerNetwork randomize_bipartite(const MultilayerNetwork& network, std::uint32_t source_type,
                                      std::uint32_t target_type, double fraction,
                                      std::uint64_t rng_seed);

/// `left_out<TAB>anchor<TAB>rank<TAB>pool`.
void write_records_tsv(std::ostream& out, const std::vector<EvalRecord>& records);

/// `K<TAB>fraction`, one row per K (gnuplot-ready).
void write_cdf_tsv(std::ostream& out, const std::vector<std::pair<std::size_t, double>>& cdf);

std::vector<EvalRecord> read_records_tsv(const std::filesystem::path& path);

} // namespace uniwalk
