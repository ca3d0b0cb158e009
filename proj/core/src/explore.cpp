#include "uniwalk/explore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"
#include "uniwalk/supra.hpp"

namespace uniwalk {

namespace {

bool valid_variant_name(const std::string& name) {
    if (name.empty()) {
        return false;
    }
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

} // namespace

ParameterGrid parse_grid(const KeyValue& doc, const MultilayerNetwork& network,
                         const RwrConfig& base) {
    ParameterGrid grid;
    std::vector<std::pair<std::string, KeyValue>> overrides;  // per variant, in file order

    auto variant_slot = [&](const std::string& name) -> KeyValue& {
        for (auto& [n, kv] : overrides) {
            if (n == name) {
                return kv;
            }
        }
        if (!valid_variant_name(name)) {
            throw ConfigError("bad variant name '" + name +
                              "' (allowed characters: letters, digits, _ and -)");
        }
        overrides.emplace_back(name, KeyValue{});
        return overrides.back().second;
    };

    for (const auto& [key, value] : doc.entries()) {
        if (key.rfind("variant.", 0) != 0) {
            throw ConfigError("grid file: unexpected key '" + key + "'");
        }
        const std::string rest = key.substr(8);
        const std::size_t dot = rest.find('.');
        const std::string name = rest.substr(0, dot);
        KeyValue& slot = variant_slot(name);
        if (dot != std::string::npos) {
            slot.set(rest.substr(dot + 1), value);
        }
    }
    if (overrides.empty()) {
        throw ConfigError("grid file declares no variants");
    }

    const std::size_t n_mux = network.multiplex_count();
    for (auto& [name, kv] : overrides) {
        ParameterVariant v;
        v.name = name;
        v.config = base;
        for (std::size_t k = 0; k < n_mux; ++k) {
            v.delta.push_back(network.multiplexes[k].delta);
            v.tau.push_back(network.multiplexes[k].tau);
        }
        for (const auto& [key, value] : kv.entries()) {
            if (key == "r") {
                v.config.r = KeyValue::to_double(value, key);
            } else if (key == "lambda") {
                v.config.lambda = kv.get_matrix("lambda", n_mux);
            } else if (key == "eta") {
                if (value.is_scalar() && value.scalar() == "auto") {
                    v.config.eta.reset();
                } else {
                    v.config.eta = kv.get_double_list("eta");
                }
            } else if (key.rfind("multiplex.", 0) == 0) {
                const std::size_t dot = key.find('.', 10);
                if (dot == std::string::npos) {
                    throw ConfigError("grid file: bad override key '" + key + "'");
                }
                const std::size_t mux = std::stoul(key.substr(10, dot - 10));
                if (mux >= n_mux) {
                    throw ConfigError("grid file: multiplex index out of range in '" + key + "'");
                }
                const std::string field = key.substr(dot + 1);
                if (field == "delta") {
                    v.delta[mux] = KeyValue::to_double(value, key);
                } else if (field == "tau") {
                    v.tau[mux] = kv.get_double_list(key);
                    if (v.tau[mux].size() != network.multiplexes[mux].layer_count()) {
                        throw ConfigError("grid file: '" + key + "' needs one value per layer");
                    }
                } else {
                    throw ConfigError("grid file: unknown override '" + key + "'");
                }
            } else {
                throw ConfigError("grid file: unknown override '" + key + "'");
            }
        }
        check_rwr_config(network, v.config);
        grid.variants.push_back(std::move(v));
    }
    return grid;
}

namespace {

// Cache format: one comment header line, then `multiplex<TAB>node<TAB>score`.
void write_cache(const std::filesystem::path& path, const ScoreResult& result) {
    std::ofstream out(path, std::ios::binary);
    out << "# converged=" << (result.converged ? 1 : 0) << " iterations=" << result.iterations
        << " residual=" << format_score(result.residual) << "\n";
    for (std::size_t k = 0; k < result.per_multiplex.size(); ++k) {
        const auto& scores = result.per_multiplex[k];
        for (std::size_t i = 0; i < scores.size(); ++i) {
            out << k << '\t' << i << '\t' << format_score(scores[i]) << '\n';
        }
    }
}

std::optional<ScoreResult> read_cache(const std::filesystem::path& path,
                                      const MultilayerNetwork& network) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    ScoreResult result;
    result.per_multiplex.resize(network.multiplex_count());
    for (std::size_t k = 0; k < network.multiplex_count(); ++k) {
        result.per_multiplex[k].assign(network.multiplexes[k].node_count(), 0.0);
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("# converged=", 0) != 0) {
        return std::nullopt;
    }
    int converged = 0;
    unsigned long iterations = 0;
    double residual = 0.0;
    if (std::sscanf(line.c_str(), "# converged=%d iterations=%lu residual=%lf", &converged,
                    &iterations, &residual) != 3) {
        return std::nullopt;
    }
    result.converged = converged != 0;
    result.iterations = iterations;
    result.residual = residual;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        unsigned long mux = 0;
        unsigned long node = 0;
        double score = 0.0;
        if (std::sscanf(line.c_str(), "%lu\t%lu\t%lf", &mux, &node, &score) != 3) {
            return std::nullopt;
        }
        if (mux >= result.per_multiplex.size() || node >= result.per_multiplex[mux].size()) {
            return std::nullopt;
        }
        result.per_multiplex[mux][node] = score;
    }
    return result;
}

} // namespace

GridResult score_grid(const MultilayerNetwork& network, const ParameterGrid& grid,
                      const SeedSet& seeds, const GridOptions& options) {
    if (grid.variants.empty()) {
        throw ConfigError("parameter grid is empty");
    }
    {
        std::set<std::string> names;
        for (const ParameterVariant& v : grid.variants) {
            if (!names.insert(v.name).second) {
                throw ConfigError("duplicate variant name '" + v.name + "'");
            }
        }
    }
    if (options.cache_dir) {
        std::filesystem::create_directories(*options.cache_dir);
    }

    const std::size_t count = grid.variants.size();
    std::vector<ScoreResult> results(count);
    std::vector<std::uint8_t> ok(count, 0);

    std::mutex progress_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};

    auto run_one = [&](std::size_t i) {
        const ParameterVariant& v = grid.variants[i];
        const std::filesystem::path cache_path =
            options.cache_dir ? *options.cache_dir / (v.name + ".tsv") : std::filesystem::path();

        std::optional<ScoreResult> cached;
        if (options.cache_dir) {
            cached = read_cache(cache_path, network);
        }
        if (cached) {
            results[i] = std::move(*cached);
        } else {
            MultilayerNetwork work = network;  // delta/tau carriers; edges shared semantics
            for (std::size_t k = 0; k < work.multiplex_count(); ++k) {
                work.multiplexes[k].delta = v.delta[k];
                work.multiplexes[k].tau = v.tau[k];
            }
            const TransitionMatrix t = normalize(work, v.config);
            const RestartVector p0 = build_restart(work, v.config, seeds, t.layout);
            results[i] = solve(t, p0, v.config.r, options.epsilon, options.max_iter);
            if (options.cache_dir) {
                write_cache(cache_path, results[i]);
            }
        }
        ok[i] = results[i].converged ? 1 : 0;
        const std::size_t finished = done.fetch_add(1) + 1;
        if (options.on_variant) {
            std::lock_guard lock(progress_mutex);
            options.on_variant(v.name, finished, count);
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, options.workers);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            run_one(i);
        }
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    run_one(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next.store(count);
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (std::thread& t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    GridResult out;
    for (std::size_t i = 0; i < count; ++i) {
        if (ok[i]) {
            out.names.push_back(grid.variants[i].name);
            out.results.push_back(std::move(results[i]));
        } else {
            out.failed.push_back(grid.variants[i].name);
        }
    }
    return out;
}

double similarity(const std::vector<double>& scores_a, const std::vector<double>& scores_b) {
    if (scores_a.size() != scores_b.size()) {
        throw Error("similarity: score vectors differ in length");
    }
    const std::size_t m = scores_a.size();
    if (m == 0) {
        throw Error("similarity: empty score vectors");
    }

    auto order_of = [m](const std::vector<double>& scores) {
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
        });
        return order;
    };
    const std::vector<std::size_t> order_a = order_of(scores_a);
    const std::vector<std::size_t> order_b = order_of(scores_b);

    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double da = scores_a[order_a[j]] - scores_b[order_a[j]];
        const double db = scores_b[order_b[j]] - scores_a[order_b[j]];
        sum += std::sqrt(da * da + db * db);
    }

    const double mean_a = std::accumulate(scores_a.begin(), scores_a.end(), 0.0) /
                          static_cast<double>(m);
    const double mean_b = std::accumulate(scores_b.begin(), scores_b.end(), 0.0) /
                          static_cast<double>(m);
    const double mean = (mean_a + mean_b) / 2.0;
    if (mean <= 0.0) {
        throw Error("similarity: degenerate all-zero scores");
    }
    return sum / (mean * mean);
}

Matrix similarity_matrix(const GridResult& grid, std::size_t multiplex) {
    const std::size_t p = grid.results.size();
    Matrix m(p, std::vector<double>(p, 0.0));
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            const double s = similarity(grid.results[a].per_multiplex.at(multiplex),
                                        grid.results[b].per_multiplex.at(multiplex));
            m[a][b] = s;
            m[b][a] = s;
        }
    }
    return m;
}

Matrix consensus(const std::vector<Matrix>& per_multiplex, const std::vector<std::size_t>& sizes) {
    if (per_multiplex.empty() || per_multiplex.size() != sizes.size()) {
        throw Error("consensus: need one similarity matrix per multiplex");
    }
    const std::size_t p = per_multiplex.front().size();
    Matrix out(p, std::vector<double>(p, 0.0));
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < per_multiplex.size(); ++i) {
                if (per_multiplex[i].size() != p) {
                    throw Error("consensus: similarity matrices differ in size");
                }
                const double s = per_multiplex[i][a][b];
                acc += s * s / static_cast<double>(sizes[i]);
            }
            out[a][b] = std::sqrt(acc);
        }
    }
    return out;
}

namespace {

using Point = std::array<double, 2>;

double sq_dist(const Point& a, const Point& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

struct KmeansRun {
    std::vector<std::size_t> labels;
    double inertia = 0.0;
    std::vector<double> inertia_trace;
};

KmeansRun lloyd(const std::vector<Point>& points, std::vector<Point> centers) {
    const std::size_t n = points.size();
    const std::size_t k = centers.size();
    std::vector<std::size_t> labels(n, 0);
    std::vector<double> trace;

    for (std::size_t round = 0; round < 100; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = sq_dist(points[i], centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = sq_dist(points[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }
        // Recompute centers; an empty cluster steals the point farthest from
        // its current center (lowest index on ties).
        std::vector<Point> sums(k, {0.0, 0.0});
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[labels[i]][0] += points[i][0];
            sums[labels[i]][1] += points[i][1];
            counts[labels[i]] += 1;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (counts[labels[i]] <= 1) {
                        continue;
                    }
                    const double d = sq_dist(points[i], centers[labels[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                counts[labels[far]] -= 1;
                sums[labels[far]][0] -= points[far][0];
                sums[labels[far]][1] -= points[far][1];
                labels[far] = c;
                counts[c] = 1;
                sums[c] = points[far];
                changed = true;
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            centers[c][0] = sums[c][0] / static_cast<double>(counts[c]);
            centers[c][1] = sums[c][1] / static_cast<double>(counts[c]);
        }
        double round_inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            round_inertia += sq_dist(points[i], centers[labels[i]]);
        }
        trace.push_back(round_inertia);
        if (!changed) {
            break;
        }
    }

    KmeansRun run;
    run.labels = std::move(labels);
    run.inertia_trace = std::move(trace);
    for (std::size_t i = 0; i < n; ++i) {
        run.inertia += sq_dist(points[i], centers[run.labels[i]]);
    }
    return run;
}

KmeansRun kmeans(const std::vector<Point>& points, std::size_t k, std::mt19937_64& rng,
                 std::size_t restarts) {
    const std::size_t n = points.size();
    KmeansRun best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (std::size_t attempt = 0; attempt < restarts; ++attempt) {
        // k-means++ seeding
        std::vector<Point> centers;
        std::uniform_int_distribution<std::size_t> first(0, n - 1);
        centers.push_back(points[first(rng)]);
        std::vector<double> d2(n, 0.0);
        while (centers.size() < k) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double nearest = sq_dist(points[i], centers[0]);
                for (std::size_t c = 1; c < centers.size(); ++c) {
                    nearest = std::min(nearest, sq_dist(points[i], centers[c]));
                }
                d2[i] = nearest;
                total += nearest;
            }
            std::size_t chosen = 0;
            if (total > 0.0) {
                std::uniform_real_distribution<double> pick(0.0, total);
                double target = pick(rng);
                for (std::size_t i = 0; i < n; ++i) {
                    target -= d2[i];
                    if (target <= 0.0) {
                        chosen = i;
                        break;
                    }
                }
            } else {
                chosen = first(rng);
            }
            centers.push_back(points[chosen]);
        }

        KmeansRun run = lloyd(points, std::move(centers));
        if (run.inertia < best.inertia) {
            best = std::move(run);
        }
    }
    return best;
}

double mean_silhouette(const std::vector<Point>& points, const std::vector<std::size_t>& labels,
                       std::size_t k) {
    const std::size_t n = points.size();
    std::vector<std::size_t> counts(k, 0);
    for (const std::size_t l : labels) {
        counts[l] += 1;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[labels[i]] <= 1) {
            continue;  // silhouette of a singleton is 0
        }
        std::vector<double> mean_dist(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            mean_dist[labels[j]] += std::sqrt(sq_dist(points[i], points[j]));
        }
        const double a = mean_dist[labels[i]] / static_cast<double>(counts[labels[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == labels[i] || counts[c] == 0) {
                continue;
            }
            b = std::min(b, mean_dist[c] / static_cast<double>(counts[c]));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0 && std::isfinite(b)) {
            total += (b - a) / denom;
        }
    }
    return total / static_cast<double>(n);
}

// Leading eigenvector of a symmetric PSD matrix by power iteration.
std::vector<double> power_component(const Matrix& c, double& eigenvalue) {
    const std::size_t p = c.size();
    std::vector<double> v(p);
    for (std::size_t i = 0; i < p; ++i) {
        v[i] = 1.0 + 1e-3 * static_cast<double>(i + 1);  // deterministic, non-symmetric start
    }
    auto normalize_vec = [&](std::vector<double>& x) {
        double norm = 0.0;
        for (const double xi : x) {
            norm += xi * xi;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& xi : x) {
                xi /= norm;
            }
        }
        return norm;
    };
    normalize_vec(v);
    std::vector<double> next(p, 0.0);
    for (std::size_t iter = 0; iter < 10000; ++iter) {
        for (std::size_t i = 0; i < p; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                acc += c[i][j] * v[j];
            }
            next[i] = acc;
        }
        const double norm = normalize_vec(next);
        if (norm == 0.0) {
            eigenvalue = 0.0;
            return std::vector<double>(p, 0.0);
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            diff = std::max(diff, std::abs(next[i] - v[i]));
        }
        v = next;
        if (diff < 1e-14) {
            break;
        }
    }
    eigenvalue = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            acc += c[i][j] * v[j];
        }
        eigenvalue += v[i] * acc;
    }
    // canonical sign: largest-magnitude entry positive
    std::size_t arg = 0;
    for (std::size_t i = 1; i < p; ++i) {
        if (std::abs(v[i]) > std::abs(v[arg])) {
            arg = i;
        }
    }
    if (v[arg] < 0.0) {
        for (double& x : v) {
            x = -x;
        }
    }
    return v;
}

} // namespace

ExplorationReport project_and_cluster(const Matrix& consensus_matrix, std::size_t k,
                                      std::uint64_t rng_seed) {
    const std::size_t p = consensus_matrix.size();
    if (p == 0) {
        throw Error("project_and_cluster: empty consensus matrix");
    }
    if (k == 0 || k > p) {
        throw Error("project_and_cluster: need 1 <= k <= number of variants");
    }

    // Column-center the feature matrix (rows of the consensus matrix).
    Matrix x = consensus_matrix;
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            mean += x[i][j];
        }
        mean /= static_cast<double>(p);
        for (std::size_t i = 0; i < p; ++i) {
            x[i][j] -= mean;
        }
    }

    // Gram matrix and top-2 components by deflation.
    Matrix gram(p, std::vector<double>(p, 0.0));
    double trace = 0.0;
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a; b < p; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < p; ++i) {
                acc += x[i][a] * x[i][b];
            }
            gram[a][b] = acc;
            gram[b][a] = acc;
        }
        trace += gram[a][a];
    }

    double lambda1 = 0.0;
    const std::vector<double> v1 = power_component(gram, lambda1);
    Matrix deflated = gram;
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) {
            deflated[a][b] -= lambda1 * v1[a] * v1[b];
        }
    }
    double lambda2 = 0.0;
    const std::vector<double> v2 = power_component(deflated, lambda2);

    ExplorationReport report;
    report.components = {v1, v2};
    report.coordinates.assign(p, {0.0, 0.0});
    for (std::size_t i = 0; i < p; ++i) {
        double c1 = 0.0;
        double c2 = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            c1 += x[i][j] * v1[j];
            c2 += x[i][j] * v2[j];
        }
        report.coordinates[i] = {c1, c2};
    }
    if (trace > 0.0) {
        report.explained_variance = {std::clamp(lambda1 / trace, 0.0, 1.0),
                                     std::clamp(lambda2 / trace, 0.0, 1.0)};
    }

    std::mt19937_64 rng(rng_seed);
    KmeansRun run = kmeans(report.coordinates, k, rng, 100);
    report.labels = std::move(run.labels);
    report.inertia = run.inertia;
    report.inertia_trace = std::move(run.inertia_trace);

    for (std::size_t kk = 2; kk <= std::min<std::size_t>(12, p); ++kk) {
        std::mt19937_64 sil_rng(rng_seed + kk);
        const KmeansRun sil_run = kmeans(report.coordinates, kk, sil_rng, 20);
        report.silhouettes.emplace_back(kk,
                                        mean_silhouette(report.coordinates, sil_run.labels, kk));
    }
    return report;
}

std::vector<OverlapEntry> topk_overlap(const MultilayerNetwork& network, const GridResult& grid,
                                       const std::vector<std::size_t>& variant_subset,
                                       std::size_t k, std::size_t multiplex) {
    if (variant_subset.empty()) {
        throw Error("topk_overlap: empty variant subset");
    }
    std::map<std::string, std::size_t> counts;
    for (const std::size_t v : variant_subset) {
        const auto ranking = rank_nodes(network, grid.results.at(v), multiplex);
        for (std::size_t i = 0; i < ranking.size() && i < k; ++i) {
            counts[ranking[i].name] += 1;
        }
    }
    std::vector<OverlapEntry> out;
    out.reserve(counts.size());
    for (const auto& [node, count] : counts) {
        out.push_back({node, count, count == variant_subset.size()});
    }
    std::sort(out.begin(), out.end(), [](const OverlapEntry& a, const OverlapEntry& b) {
        return a.count != b.count ? a.count > b.count : a.node < b.node;
    });
    return out;
}

void write_matrix_tsv(std::ostream& out, const std::vector<std::string>& names, const Matrix& m) {
    out << "variant";
    for (const std::string& n : names) {
        out << '\t' << n;
    }
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << names.at(i);
        for (const double v : m[i]) {
            out << '\t' << format_score(v);
        }
        out << '\n';
    }
}

void write_pca_tsv(std::ostream& out, const std::vector<std::string>& names,
                   const ExplorationReport& report) {
    out << "variant\tpc1\tpc2\tcluster\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << names[i] << '\t' << format_score(report.coordinates[i][0]) << '\t'
            << format_score(report.coordinates[i][1]) << '\t' << report.labels[i] << '\n';
    }
}

} // namespace uniwalk
