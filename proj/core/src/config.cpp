#include "uniwalk/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"

namespace uniwalk {

namespace {

constexpr double kProbTol = 1e-12;

std::string mux_key(std::size_t k, const char* field) {
    return "multiplex." + std::to_string(k) + "." + field;
}

SelfLoopPolicy parse_self_loops(const std::string& s, const std::string& key) {
    if (s == "keep") {
        return SelfLoopPolicy::Keep;
    }
    if (s == "drop") {
        return SelfLoopPolicy::Drop;
    }
    throw ConfigError("key '" + key + "': expected keep or drop, got '" + s + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base_dir / p;
}

// Broadcasts a scalar flag or checks the list length against the layer count.
std::vector<bool> layer_flags(const KeyValue& doc, const std::string& key, std::size_t n_layers,
                              bool fallback) {
    if (!doc.has(key)) {
        return std::vector<bool>(n_layers, fallback);
    }
    std::vector<bool> flags = doc.get_bool_list(key);
    if (flags.size() == 1 && n_layers > 1) {
        return std::vector<bool>(n_layers, flags.front());
    }
    if (flags.size() != n_layers) {
        throw ConfigError("key '" + key + "': expected " + std::to_string(n_layers) + " flags");
    }
    return flags;
}

} // namespace

MultilayerNetwork load_network(const KeyValue& doc, const std::filesystem::path& base_dir) {
    MultilayerNetwork network;

    // Multiplex indices must be contiguous from 0.
    std::size_t n_mux = 0;
    while (doc.has(mux_key(n_mux, "layers"))) {
        ++n_mux;
    }
    if (n_mux == 0) {
        throw ConfigError("config declares no multiplex networks (multiplex.0.layers missing)");
    }
    for (const auto& [key, value] : doc.entries()) {
        if (key.rfind("multiplex.", 0) == 0) {
            const std::size_t dot = key.find('.', 10);
            const std::string idx = key.substr(10, dot - 10);
            if (std::stoul(idx) >= n_mux) {
                throw ConfigError("multiplex indices must be contiguous from 0; key '" + key +
                                  "' skips an index");
            }
        }
    }

    const SelfLoopPolicy global_loops =
        doc.has("self_loops") ? parse_self_loops(doc.get_string("self_loops"), "self_loops")
                              : SelfLoopPolicy::Keep;

    for (std::size_t k = 0; k < n_mux; ++k) {
        MultiplexNetwork mux;
        if (doc.has(mux_key(k, "nodes"))) {
            // Explicit node list: pins the id order and carries nodes that
            // appear in no layer (e.g. transit nodes).
            for (const std::string& name :
                 load_seed_names(resolve(base_dir, doc.get_string(mux_key(k, "nodes"))))) {
                mux.nodes.intern(name);
            }
        }
        const std::vector<std::string> layer_paths = doc.get_string_list(mux_key(k, "layers"));
        if (layer_paths.empty()) {
            throw ConfigError(mux_key(k, "layers") + " is empty");
        }
        const std::vector<bool> directed =
            layer_flags(doc, mux_key(k, "directed"), layer_paths.size(), false);
        const std::vector<bool> weighted =
            layer_flags(doc, mux_key(k, "weighted"), layer_paths.size(), false);

        std::vector<SelfLoopPolicy> loops(layer_paths.size(), global_loops);
        if (doc.has(mux_key(k, "self_loops"))) {
            const auto values = doc.get_string_list(mux_key(k, "self_loops"));
            if (values.size() == 1) {
                loops.assign(layer_paths.size(),
                             parse_self_loops(values.front(), mux_key(k, "self_loops")));
            } else if (values.size() == layer_paths.size()) {
                for (std::size_t l = 0; l < values.size(); ++l) {
                    loops[l] = parse_self_loops(values[l], mux_key(k, "self_loops"));
                }
            } else {
                throw ConfigError(mux_key(k, "self_loops") + ": expected one flag per layer");
            }
        }

        for (std::size_t l = 0; l < layer_paths.size(); ++l) {
            mux.layers.push_back(load_edge_list(resolve(base_dir, layer_paths[l]), directed[l],
                                                weighted[l], mux.nodes, loops[l]));
        }
        if (doc.has(mux_key(k, "delta"))) {
            mux.delta = doc.get_double(mux_key(k, "delta"));
        }
        if (doc.has(mux_key(k, "tau"))) {
            mux.tau = doc.get_double_list(mux_key(k, "tau"));
            if (mux.tau.size() != mux.layers.size()) {
                throw ConfigError(mux_key(k, "tau") + ": expected one value per layer");
            }
        }
        network.multiplexes.push_back(std::move(mux));
    }

    for (const auto& [key, value] : doc.entries()) {
        if (key.rfind("bipartite.", 0) != 0 || key.size() < 11) {
            continue;
        }
        const std::size_t dot = key.find('.', 10);
        if (dot == std::string::npos || key.substr(dot + 1) != "path") {
            continue;
        }
        const std::string pair = key.substr(10, dot - 10);
        const std::size_t underscore = pair.find('_');
        if (underscore == std::string::npos) {
            throw ConfigError("bad bipartite key '" + key + "' (expected bipartite.<i>_<j>.path)");
        }
        const std::size_t i = std::stoul(pair.substr(0, underscore));
        const std::size_t j = std::stoul(pair.substr(underscore + 1));
        if (i >= n_mux || j >= n_mux) {
            throw ConfigError("bipartite." + pair + " references unknown multiplex index");
        }
        const std::string dir_key = "bipartite." + pair + ".directed";
        const bool directed = doc.has(dir_key) ? doc.get_bool(dir_key) : false;
        network.bipartites.push_back(load_bipartite_list(
            resolve(base_dir, value.scalar()), directed, static_cast<std::uint32_t>(i),
            static_cast<std::uint32_t>(j), network.multiplexes[i].nodes,
            network.multiplexes[j].nodes));
    }

    network.finalize();
    return network;
}

RwrConfig default_rwr_config(const MultilayerNetwork& network) {
    RwrConfig config;
    const std::size_t n_mux = network.multiplex_count();
    config.lambda.assign(n_mux, std::vector<double>(n_mux, 0.0));
    for (std::size_t a = 0; a < n_mux; ++a) {
        std::vector<std::size_t> partners;
        for (std::size_t b = 0; b < n_mux; ++b) {
            if (a != b && network.bipartite_view(a, b)) {
                partners.push_back(b);
            }
        }
        const double share = 1.0 / static_cast<double>(1 + partners.size());
        config.lambda[a][a] = share;
        for (const std::size_t b : partners) {
            config.lambda[a][b] = share;
        }
    }
    return config;
}

void check_rwr_config(const MultilayerNetwork& network, const RwrConfig& config) {
    const std::size_t n_mux = network.multiplex_count();
    if (!(config.r > 0.0) || config.r > 1.0) {
        throw ConfigError("r must lie in (0, 1]");
    }
    if (config.lambda.size() != n_mux) {
        throw ConfigError("lambda must have one row per multiplex");
    }
    for (std::size_t a = 0; a < n_mux; ++a) {
        if (config.lambda[a].size() != n_mux) {
            throw ConfigError("lambda row " + std::to_string(a) + " has wrong length");
        }
        double sum = 0.0;
        for (std::size_t b = 0; b < n_mux; ++b) {
            const double v = config.lambda[a][b];
            if (v < 0.0) {
                throw ConfigError("lambda must be nonnegative");
            }
            if (v > 0.0 && a != b && !network.bipartite_view(a, b)) {
                throw ConfigError("lambda[" + std::to_string(a) + "][" + std::to_string(b) +
                                  "] > 0 but no bipartite network connects multiplex " +
                                  std::to_string(a) + " to " + std::to_string(b));
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            throw ConfigError("lambda row " + std::to_string(a) + " must sum to 1");
        }
    }
    if (config.eta) {
        if (config.eta->size() != n_mux) {
            throw ConfigError("eta must have one entry per multiplex");
        }
        double sum = 0.0;
        for (const double v : *config.eta) {
            if (v < 0.0) {
                throw ConfigError("eta must be nonnegative");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            throw ConfigError("eta must sum to 1");
        }
    }
}

RwrConfig load_rwr_config(const KeyValue& doc, const MultilayerNetwork& network) {
    RwrConfig config = default_rwr_config(network);
    if (doc.has("r")) {
        config.r = doc.get_double("r");
    }
    if (doc.has("lambda")) {
        config.lambda = doc.get_matrix("lambda", network.multiplex_count());
    }
    if (doc.has("eta")) {
        const KeyValue::Value& v = doc.get("eta");
        if (v.is_scalar() && v.scalar() == "auto") {
            config.eta.reset();
        } else {
            config.eta = doc.get_double_list("eta");
        }
    }
    check_rwr_config(network, config);
    return config;
}

std::optional<std::filesystem::path> seeds_path(const KeyValue& doc,
                                                const std::filesystem::path& base_dir) {
    if (!doc.has("seeds")) {
        return std::nullopt;
    }
    return resolve(base_dir, doc.get_string("seeds"));
}

std::vector<std::string> load_seed_names(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open seeds file " + path.string());
    }
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        names.push_back(line);
    }
    return names;
}

KeyValue effective_params(const MultilayerNetwork& network, const RwrConfig& config) {
    KeyValue doc;
    doc.set_scalar("r", format_score(config.r));

    KeyValue::List lambda_rows;
    for (const auto& row : config.lambda) {
        KeyValue::List r;
        for (const double v : row) {
            r.push_back({format_score(v)});
        }
        lambda_rows.push_back({std::move(r)});
    }
    doc.set("lambda", {std::move(lambda_rows)});

    if (config.eta) {
        KeyValue::List eta;
        for (const double v : *config.eta) {
            eta.push_back({format_score(v)});
        }
        doc.set("eta", {std::move(eta)});
    } else {
        doc.set_scalar("eta", "auto");
    }

    for (std::size_t k = 0; k < network.multiplex_count(); ++k) {
        const MultiplexNetwork& mux = network.multiplexes[k];
        doc.set_scalar(mux_key(k, "delta"), format_score(mux.delta));
        KeyValue::List tau;
        for (const double v : mux.tau) {
            tau.push_back({format_score(v)});
        }
        doc.set(mux_key(k, "tau"), {std::move(tau)});
    }
    return doc;
}

} // namespace uniwalk
