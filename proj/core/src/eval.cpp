#include "uniwalk/eval.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <thread>
#include <unordered_set>

#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"
#include "uniwalk/rwr.hpp"
#include "uniwalk/supra.hpp"

namespace uniwalk {

namespace {

// The declared bipartite covering the unordered type pair, or null.
const BipartiteNetwork* find_declared(const MultilayerNetwork& network, std::uint32_t a,
                                      std::uint32_t b, std::size_t* index = nullptr) {
    for (std::size_t i = 0; i < network.bipartites.size(); ++i) {
        const BipartiteNetwork& bp = network.bipartites[i];
        if ((bp.source_type == a && bp.target_type == b) ||
            (bp.source_type == b && bp.target_type == a)) {
            if (index) {
                *index = i;
            }
            return &bp;
        }
    }
    return nullptr;
}

struct LeftOutCase {
    NodeId left_out = 0;  // node of left_out_type
    NodeId anchor = 0;    // node of anchor_type
    MaskedEdge mask;
};

// One record per (anchor, associate) pair, anchors and associates in id
// order. Anchors below min_degree contribute no cases.
std::vector<LeftOutCase> enumerate_cases(const MultilayerNetwork& network, const EvalTask& task,
                                         std::size_t& skipped_anchors) {
    const BipartiteNetwork* bp = find_declared(network, task.left_out_type, task.anchor_type);
    if (!bp) {
        throw ConfigError("no bipartite network between multiplex " +
                          std::to_string(task.left_out_type) + " and " +
                          std::to_string(task.anchor_type));
    }
    if (bp->edges.empty()) {
        throw ConfigError("target bipartite has no edges");
    }
    const bool forward = bp->source_type == task.left_out_type;

    // anchor id -> associates, in id order
    std::map<NodeId, std::vector<std::pair<NodeId, MaskedEdge>>> by_anchor;
    for (const Edge& e : bp->edges) {
        const NodeId g = forward ? e.source : e.target;
        const NodeId a = forward ? e.target : e.source;
        MaskedEdge mask{bp->source_type, bp->target_type, e.source, e.target, !bp->directed};
        by_anchor[a].emplace_back(g, mask);
    }

    std::vector<LeftOutCase> cases;
    skipped_anchors = 0;
    for (const auto& [anchor, associates] : by_anchor) {
        if (associates.size() < task.min_degree) {
            ++skipped_anchors;
            continue;
        }
        for (const auto& [g, mask] : associates) {
            cases.push_back({g, anchor, mask});
        }
    }
    return cases;
}

SeedSet make_seeds(const MultilayerNetwork& network, const EvalTask& task,
                   const std::vector<LeftOutCase>& cases, const LeftOutCase& c) {
    SeedSet seeds;
    seeds.per_multiplex.resize(network.multiplex_count());
    if (task.protocol == EvalProtocol::Loocv) {
        for (const LeftOutCase& other : cases) {
            if (other.anchor == c.anchor && other.left_out != c.left_out) {
                seeds.per_multiplex[task.left_out_type].push_back(other.left_out);
            }
        }
        auto& ids = seeds.per_multiplex[task.left_out_type];
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (task.seed_anchor) {
            seeds.per_multiplex[task.anchor_type].push_back(c.anchor);
        }
    } else {
        seeds.per_multiplex[task.anchor_type].push_back(c.anchor);
    }
    return seeds;
}

// Removes the masked edge from a copy of the network (full-rebuild path).
MultilayerNetwork without_edge(const MultilayerNetwork& network, const MaskedEdge& mask) {
    MultilayerNetwork copy = network;
    std::size_t index = 0;
    find_declared(copy, mask.source_mux, mask.target_mux, &index);
    auto& edges = copy.bipartites[index].edges;
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](const Edge& e) {
                                   return e.source == mask.source && e.target == mask.target;
                               }),
                edges.end());
    copy.finalize();
    return copy;
}

void run_ordered(std::size_t count, std::size_t workers,
                 const std::function<EvalRecord(std::size_t)>& compute,
                 const std::function<void(std::size_t, const EvalRecord&)>& emit) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            emit(i, compute(i));
        }
        return;
    }

    std::mutex mutex;
    std::condition_variable ready;
    std::map<std::size_t, EvalRecord> done;
    std::atomic<std::size_t> next_task{0};
    std::exception_ptr failure;

    auto work = [&]() {
        while (true) {
            const std::size_t i = next_task.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                EvalRecord record = compute(i);
                std::lock_guard lock(mutex);
                done.emplace(i, std::move(record));
                ready.notify_one();
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next_task.store(count);
                ready.notify_one();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }

    std::size_t emitted = 0;
    {
        std::unique_lock lock(mutex);
        while (emitted < count && !failure) {
            ready.wait(lock, [&] { return failure || done.count(emitted) > 0; });
            while (done.count(emitted) > 0) {
                EvalRecord record = std::move(done.at(emitted));
                done.erase(emitted);
                lock.unlock();
                emit(emitted, record);
                lock.lock();
                ++emitted;
            }
        }
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

EvalOutcome run_protocol(const MultilayerNetwork& network, const RwrConfig& config,
                         const EvalTask& task, const EvalOptions& options) {
    EvalOutcome outcome;
    std::vector<LeftOutCase> cases = enumerate_cases(network, task, outcome.skipped_anchors);
    if (cases.empty()) {
        throw ConfigError("no anchor reaches the minimum degree of " +
                          std::to_string(task.min_degree));
    }

    std::optional<TransitionMatrix> base;
    if (task.rebuild == RebuildStrategy::Patched) {
        base = normalize(network, config);
    }
    const NodeTable& left_names = network.multiplexes[task.left_out_type].nodes;
    const NodeTable& anchor_names = network.multiplexes[task.anchor_type].nodes;

    auto compute = [&](std::size_t index) -> EvalRecord {
        const LeftOutCase& c = cases[index + options.resume_from];
        const SeedSet seeds = make_seeds(network, task, cases, c);
        std::set<NodeId> exclude(seeds.per_multiplex[task.left_out_type].begin(),
                                 seeds.per_multiplex[task.left_out_type].end());

        ScoreResult result;
        if (task.rebuild == RebuildStrategy::Patched) {
            const TransitionOverlay overlay(network, config, *base, c.mask);
            const RestartVector p0 = build_restart(network, config, seeds, base->layout);
            result = solve(overlay, p0, config.r, options.epsilon, options.max_iter);
        } else {
            const MultilayerNetwork reduced = without_edge(network, c.mask);
            const TransitionMatrix full = normalize(reduced, config);
            const RestartVector p0 = build_restart(reduced, config, seeds, full.layout);
            result = solve(full, p0, config.r, options.epsilon, options.max_iter);
        }

        EvalRecord record;
        record.left_out = left_names.name(c.left_out);
        record.anchor = anchor_names.name(c.anchor);
        record.rank = rank_of(network, result, task.left_out_type, c.left_out, exclude);
        record.pool = network.multiplexes[task.left_out_type].node_count() - exclude.size();
        return record;
    };

    if (options.resume_from >= cases.size()) {
        return outcome;  // nothing left to compute; caller merges prior records
    }
    const std::size_t todo = cases.size() - options.resume_from;
    outcome.records.resize(todo);
    run_ordered(todo, options.workers, compute, [&](std::size_t i, const EvalRecord& record) {
        outcome.records[i] = record;
        if (options.on_record) {
            options.on_record(record, options.resume_from + i + 1, cases.size());
        }
    });
    outcome.cdf = compute_cdf(outcome.records);
    return outcome;
}

} // namespace

EvalOutcome run_loocv(const MultilayerNetwork& network, const RwrConfig& config,
                      const EvalTask& task, const EvalOptions& options) {
    EvalTask t = task;
    t.protocol = EvalProtocol::Loocv;
    if (t.min_degree < 1) {
        t.min_degree = 1;
    }
    if (t.min_degree < 2 && !t.seed_anchor) {
        throw ConfigError("loocv with min_degree 1 needs the anchor as seed");
    }
    return run_protocol(network, config, t, options);
}

EvalOutcome run_link_prediction(const MultilayerNetwork& network, const RwrConfig& config,
                                const EvalTask& task, const EvalOptions& options) {
    EvalTask t = task;
    t.protocol = EvalProtocol::LinkPrediction;
    return run_protocol(network, config, t, options);
}

std::vector<std::pair<std::size_t, double>> compute_cdf(const std::vector<EvalRecord>& records) {
    std::vector<std::pair<std::size_t, double>> cdf;
    if (records.empty()) {
        return cdf;
    }
    std::size_t pool_max = 0;
    for (const EvalRecord& r : records) {
        pool_max = std::max(pool_max, r.pool);
    }
    std::vector<std::size_t> hits(pool_max + 1, 0);
    for (const EvalRecord& r : records) {
        hits.at(std::min(r.rank, pool_max)) += 1;
    }
    cdf.reserve(pool_max);
    std::size_t cumulative = 0;
    for (std::size_t k = 1; k <= pool_max; ++k) {
        cumulative += hits[k];
        cdf.emplace_back(k, static_cast<double>(cumulative) / static_cast<double>(records.size()));
    }
    return cdf;
}

double cdf_area(const std::vector<std::pair<std::size_t, double>>& cdf) {
    if (cdf.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& [k, fraction] : cdf) {
        sum += fraction;
    }
    return sum / static_cast<double>(cdf.size());
}

namespace {

// Finds a declared bipartite usable to add edges from type `from` to type
// `to`; creates an undirected one when the pair is untouched. Returns the
// bipartite index and whether (from, to) maps to its declared orientation.
std::pair<std::size_t, bool> carrier_bipartite(MultilayerNetwork& network, std::uint32_t from,
                                               std::uint32_t to) {
    for (std::size_t i = 0; i < network.bipartites.size(); ++i) {
        const BipartiteNetwork& bp = network.bipartites[i];
        if (bp.source_type == from && bp.target_type == to) {
            return {i, true};
        }
        if (bp.source_type == to && bp.target_type == from && !bp.directed) {
            return {i, false};
        }
    }
    BipartiteNetwork fresh;
    fresh.source_type = from;
    fresh.target_type = to;
    fresh.directed = false;
    network.bipartites.push_back(std::move(fresh));
    return {network.bipartites.size() - 1, true};
}

} // namespace

MultilayerNetwork augment_transit(const MultilayerNetwork& network, std::size_t via,
                                  std::uint32_t left_out_type, std::uint32_t anchor_type,
                                  std::size_t transit_count, std::uint64_t /*rng_seed*/,
                                  bool transit_self_loops) {
    if (via >= network.multiplex_count() || left_out_type >= network.multiplex_count() ||
        anchor_type >= network.multiplex_count()) {
        throw ConfigError("augment_transit: multiplex index out of range");
    }
    if (via == left_out_type || via == anchor_type) {
        throw ConfigError("augment_transit: transit multiplex must differ from the pair");
    }

    MultilayerNetwork copy = network;
    if (transit_count == 0) {
        return copy;
    }

    const BipartiteNetwork* target = find_declared(copy, left_out_type, anchor_type);
    if (!target) {
        throw ConfigError("augment_transit: no bipartite between the given pair");
    }
    const bool forward = target->source_type == left_out_type;
    std::vector<std::pair<NodeId, NodeId>> associations;  // (g, a)
    for (const Edge& e : target->edges) {
        associations.emplace_back(forward ? e.source : e.target, forward ? e.target : e.source);
    }

    const auto [in_idx, in_fwd] =
        carrier_bipartite(copy, left_out_type, static_cast<std::uint32_t>(via));
    const auto [out_idx, out_fwd] =
        carrier_bipartite(copy, static_cast<std::uint32_t>(via), anchor_type);

    MultiplexNetwork& via_mux = copy.multiplexes[via];
    const std::string prefix = "__transit_" + std::to_string(left_out_type) + "_" +
                               std::to_string(anchor_type) + "_";
    for (std::size_t e = 0; e < associations.size(); ++e) {
        const auto [g, a] = associations[e];
        for (std::size_t m = 1; m <= transit_count; ++m) {
            const std::string name = prefix + std::to_string(e) + "_" + std::to_string(m);
            if (via_mux.nodes.find(name)) {
                throw Error("transit node name collision: " + name);
            }
            const NodeId d = via_mux.nodes.intern(name);
            if (in_fwd) {
                copy.bipartites[in_idx].edges.push_back({g, d, 1.0});
            } else {
                copy.bipartites[in_idx].edges.push_back({d, g, 1.0});
            }
            if (out_fwd) {
                copy.bipartites[out_idx].edges.push_back({d, a, 1.0});
            } else {
                copy.bipartites[out_idx].edges.push_back({a, d, 1.0});
            }
            if (transit_self_loops) {
                for (Layer& layer : via_mux.layers) {
                    layer.edges.push_back({d, d, 1.0});
                }
            }
        }
    }

    copy.bipartites[in_idx].edges =
        canonical_edges(std::move(copy.bipartites[in_idx].edges), /*weighted=*/true);
    copy.bipartites[out_idx].edges =
        canonical_edges(std::move(copy.bipartites[out_idx].edges), /*weighted=*/true);
    if (transit_self_loops) {
        for (Layer& layer : via_mux.layers) {
            layer.edges = canonical_edges(std::move(layer.edges), layer.weighted);
        }
    }
    copy.finalize();
    return copy;
}

MultilayerNetwork randomize_bipartite(const MultilayerNetwork& network, std::uint32_t source_type,
                                      std::uint32_t target_type, double fraction,
                                      std::uint64_t rng_seed) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw ConfigError("randomize_bipartite: fraction must lie in [0, 1]");
    }
    MultilayerNetwork copy = network;
    std::size_t index = 0;
    if (!find_declared(copy, source_type, target_type, &index)) {
        throw ConfigError("randomize_bipartite: no bipartite between the given pair");
    }
    BipartiteNetwork& bp = copy.bipartites[index];
    std::vector<Edge>& edges = bp.edges;
    const std::size_t n_chosen =
        static_cast<std::size_t>(fraction * static_cast<double>(edges.size()));
    if (n_chosen < 2) {
        copy.finalize();
        return copy;
    }

    std::mt19937_64 rng(rng_seed);

    // Uniform choice of the edges whose targets take part in the shuffle.
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    for (std::size_t i = 0; i < n_chosen; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
        std::swap(order[i], order[pick(rng)]);
    }
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_chosen));

    const std::size_t n_dst = copy.multiplexes[bp.target_type].node_count();
    auto key = [n_dst](const Edge& e) {
        return static_cast<std::uint64_t>(e.source) * n_dst + e.target;
    };
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
        present.insert(key(e));
    }

    // Pairwise target swaps keep both degree sequences and simplicity exact.
    std::uniform_int_distribution<std::size_t> pick(0, n_chosen - 1);
    const std::size_t attempts = 10 * n_chosen;
    for (std::size_t s = 0; s < attempts; ++s) {
        const std::size_t u = chosen[pick(rng)];
        const std::size_t v = chosen[pick(rng)];
        if (u == v) {
            continue;
        }
        Edge& eu = edges[u];
        Edge& ev = edges[v];
        if (eu.target == ev.target) {
            continue;
        }
        const std::uint64_t old_u = key(eu);
        const std::uint64_t old_v = key(ev);
        const Edge new_u{eu.source, ev.target, eu.weight};
        const Edge new_v{ev.source, eu.target, ev.weight};
        present.erase(old_u);
        present.erase(old_v);
        if (present.count(key(new_u)) || present.count(key(new_v))) {
            present.insert(old_u);
            present.insert(old_v);
            continue;
        }
        present.insert(key(new_u));
        present.insert(key(new_v));
        eu = new_u;
        ev = new_v;
    }

    edges = canonical_edges(std::move(edges), /*weighted=*/true);
    copy.finalize();
    return copy;
}

void write_records_tsv(std::ostream& out, const std::vector<EvalRecord>& records) {
    out << "left_out\tanchor\trank\tpool\n";
    for (const EvalRecord& r : records) {
        out << r.left_out << '\t' << r.anchor << '\t' << r.rank << '\t' << r.pool << '\n';
    }
}

void write_cdf_tsv(std::ostream& out, const std::vector<std::pair<std::size_t, double>>& cdf) {
    out << "K\tfraction\n";
    for (const auto& [k, fraction] : cdf) {
        out << k << '\t' << format_score(fraction) << '\n';
    }
}

std::vector<EvalRecord> read_records_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::vector<EvalRecord> records;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (first) {
            first = false;
            if (line.rfind("left_out\t", 0) == 0) {
                continue;
            }
        }
        EvalRecord r;
        std::size_t start = 0;
        std::vector<std::string> fields;
        while (true) {
            const std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() != 4) {
            throw ParseError(path.string() + ": malformed record line");
        }
        r.left_out = fields[0];
        r.anchor = fields[1];
        r.rank = std::stoul(fields[2]);
        r.pool = std::stoul(fields[3]);
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace uniwalk
