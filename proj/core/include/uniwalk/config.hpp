#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uniwalk/keyval.hpp"
#include "uniwalk/network.hpp"

namespace uniwalk {

/// The full parameter vector of the walk: restart probability r, the
/// multiplex-jump matrix lambda (row-stochastic, one row per source
/// multiplex), and the restart-multiplex distribution eta (nullopt means
/// automatic: uniform over the multiplexes that contain at least one seed).
/// delta and tau live on each MultiplexNetwork.
struct RwrConfig {
    double r = 0.7;
    std::vector<std::vector<double>> lambda;
    std::optional<std::vector<double>> eta;
};

/// Documented defaults: r = 0.7; lambda[a][a] = lambda[a][b] =
/// 1 / (1 + number of multiplexes reachable from a); eta automatic.
RwrConfig default_rwr_config(const MultilayerNetwork& network);

/// Throws ConfigError when r is out of (0,1], a lambda row does not sum to 1
/// (1e-12), lambda places mass on a pair with no bipartite network, or an
/// explicit eta is not a probability vector.
void check_rwr_config(const MultilayerNetwork& network, const RwrConfig& config);

/// Builds the multilayer network described by a config document. Relative
/// file paths are resolved against `base_dir`. Keys:
///   multiplex.<k>.layers / .directed / .weighted / .delta / .tau / .self_loops
///   multiplex.<k>.nodes (optional explicit node list, one name per line)
///   bipartite.<i>_<j>.path / .directed
///   seeds, r, lambda, eta, self_loops
MultilayerNetwork load_network(const KeyValue& doc, const std::filesystem::path& base_dir);

/// Reads r / lambda / eta from the document, falling back to the defaults.
RwrConfig load_rwr_config(const KeyValue& doc, const MultilayerNetwork& network);

/// Path of the seeds file declared in the document (resolved), if any.
std::optional<std::filesystem::path> seeds_path(const KeyValue& doc,
                                                const std::filesystem::path& base_dir);

/// One node name per line; comments and blank lines ignored.
std::vector<std::string> load_seed_names(const std::filesystem::path& path);

/// Effective parameters after defaults, as a document (for manifests).
KeyValue effective_params(const MultilayerNetwork& network, const RwrConfig& config);

} // namespace uniwalk
