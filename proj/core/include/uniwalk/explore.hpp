#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uniwalk/config.hpp"
#include "uniwalk/keyval.hpp"
#include "uniwalk/network.hpp"
#include "uniwalk/rwr.hpp"

namespace uniwalk {

using Matrix = std::vector<std::vector<double>>;

/// One named parameter set: the base configuration with a few overridden
/// keys (r, lambda, eta, multiplex.<k>.delta, multiplex.<k>.tau).
struct ParameterVariant {
    std::string name;
    RwrConfig config;
    std::vector<double> delta;               // per multiplex
    std::vector<std::vector<double>> tau;    // per multiplex
};

struct ParameterGrid {
    std::vector<ParameterVariant> variants;
};

/// Grid file syntax: `variant.<name>.<key>: value` lines, where <key> is any
/// of the parameter keys above; `variant.<name>:` alone declares a variant
/// with no overrides. Unlisted keys inherit the base configuration. Names
/// are restricted to [A-Za-z0-9_-] and must be unique.
ParameterGrid parse_grid(const KeyValue& doc, const MultilayerNetwork& network,
                         const RwrConfig& base);

struct GridOptions {
    double epsilon = 1e-10;
    std::size_t max_iter = 1000;
    std::size_t workers = 1;
    /// When set, per-variant scores are cached here as `<name>.tsv` and
    /// reused on rerun.
    std::optional<std::filesystem::path> cache_dir;
    std::function<void(const std::string& variant, std::size_t done, std::size_t total)>
        on_variant;
};

struct GridResult {
    std::vector<std::string> names;        // converged variants, grid order
    std::vector<ScoreResult> results;      // parallel to names
    std::vector<std::string> failed;       // variants that did not converge
};

/// One solve per variant with the shared seed set. Failed (non-converged)
/// variants are excluded from `results` and listed in `failed`.
GridResult score_grid(const MultilayerNetwork& network, const ParameterGrid& grid,
                      const SeedSet& seeds, const GridOptions& options = {});

/// Output-similarity of two per-multiplex score vectors: both vectors are
/// read in each other's descending-score node order, the per-position
/// euclidean displacement is accumulated, and the total is normalized by the
/// squared mean score. Zero for identical vectors, exactly symmetric.
/// Throws Error when the scores are all zero (degenerate).
double similarity(const std::vector<double>& scores_a, const std::vector<double>& scores_b);

/// P x P similarity matrix over all variant pairs for one multiplex.
Matrix similarity_matrix(const GridResult& grid, std::size_t multiplex);

/// Consensus over node types: entrywise sqrt(sum_i S_i^2 / m_i).
Matrix consensus(const std::vector<Matrix>& per_multiplex, const std::vector<std::size_t>& sizes);

struct ExplorationReport {
    std::vector<std::array<double, 2>> coordinates;    // P x 2 PCA projection
    std::array<double, 2> explained_variance{0.0, 0.0};
    std::array<std::vector<double>, 2> components;     // principal directions
    std::vector<std::size_t> labels;                   // k-means cluster per variant
    double inertia = 0.0;
    std::vector<double> inertia_trace;                 // winning run, one entry per round
    std::vector<std::pair<std::size_t, double>> silhouettes;  // (k, mean silhouette)
};

/// Rows of the consensus matrix are treated as feature vectors, column
/// centered and projected onto the top-2 principal components (power method
/// with deflation); k-means with k-means++ seeding, 100 restarts, best
/// inertia kept. Deterministic given the rng seed. Throws Error when k > P.
ExplorationReport project_and_cluster(const Matrix& consensus_matrix, std::size_t k,
                                      std::uint64_t rng_seed);

struct OverlapEntry {
    std::string node;
    std::size_t count = 0;  // number of variants ranking the node in their top k
    bool in_all = false;
};

/// Union of the per-variant top-k node sets of one multiplex with occurrence
/// counts; nodes present in every variant's top k are flagged.
std::vector<OverlapEntry> topk_overlap(const MultilayerNetwork& network, const GridResult& grid,
                                       const std::vector<std::size_t>& variant_subset,
                                       std::size_t k, std::size_t multiplex);

/// Labeled square matrix: header row + one labeled row per variant.
void write_matrix_tsv(std::ostream& out, const std::vector<std::string>& names, const Matrix& m);

/// `variant<TAB>pc1<TAB>pc2<TAB>cluster`.
void write_pca_tsv(std::ostream& out, const std::vector<std::string>& names,
                   const ExplorationReport& report);

} // namespace uniwalk
