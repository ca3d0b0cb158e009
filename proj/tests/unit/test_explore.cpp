#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "build.hpp"
#include "stats.hpp"
#include "temp_dir.hpp"
#include "uniwalk/errors.hpp"
#include "uniwalk/explore.hpp"

using namespace uniwalk;
using namespace uniwalk::testing;

namespace {

// Straight-from-formula reimplementation of the similarity measure, written
// independently of the library version (pair vectors + explicit loops).
double similarity_reference(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t m = a.size();
    std::vector<std::pair<double, std::size_t>> by_a;
    std::vector<std::pair<double, std::size_t>> by_b;
    for (std::size_t i = 0; i < m; ++i) {
        by_a.emplace_back(-a[i], i);
        by_b.emplace_back(-b[i], i);
    }
    std::sort(by_a.begin(), by_a.end());
    std::sort(by_b.begin(), by_b.end());

    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t na = by_a[j].second;
        const std::size_t nb = by_b[j].second;
        const double first = a[na] - b[na];
        const double second = b[nb] - a[nb];
        total += std::sqrt(first * first + second * second);
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean += a[i] + b[i];
    }
    mean /= 2.0 * static_cast<double>(m);
    return total / (mean * mean);
}

MultilayerNetwork grid_network() {
    MultilayerNetwork net;
    net.multiplexes.push_back(
        mux_of("g", 5, {{{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}}},
                        {{{0, 2, 1.0}, {1, 3, 1.0}}}}));
    net.multiplexes.push_back(mux_of("d", 3, {{{{0, 1, 1.0}, {1, 2, 1.0}}}}));
    net.bipartites.push_back(bip_of(0, 1, {{0, 0, 1.0}, {2, 1, 1.0}}));
    net.finalize();
    return net;
}

SeedSet grid_seeds(const MultilayerNetwork& net) {
    return resolve_seeds(net, {"g0"});
}

} // namespace

TEST_CASE("similarity is zero for identical scores and exactly symmetric") {
    const std::vector<double> a{0.4, 0.3, 0.2, 0.1};
    CHECK(similarity(a, a) == 0.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    for (int attempt = 0; attempt < 25; ++attempt) {
        std::vector<double> x(8);
        std::vector<double> y(8);
        for (std::size_t i = 0; i < 8; ++i) {
            x[i] = value(rng);
            y[i] = value(rng);
        }
        const double xy = similarity(x, y);
        const double yx = similarity(y, x);
        CHECK(xy == yx);  // exact
        CHECK(xy >= 0.0);
        CHECK(xy == doctest::Approx(similarity_reference(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("similarity rejects degenerate all-zero scores") {
    const std::vector<double> zero(4, 0.0);
    CHECK_THROWS_AS(similarity(zero, zero), Error);
}

TEST_CASE("consensus matches the closed forms") {
    SUBCASE("single multiplex of size 4 halves the matrix") {
        const Matrix s{{0.0, 2.0}, {2.0, 0.0}};
        const Matrix c = consensus({s}, {4});
        CHECK(c[0][1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(c[0][0] == 0.0);
    }
    SUBCASE("all-zero inputs stay zero") {
        const Matrix s{{0.0, 0.0}, {0.0, 0.0}};
        const Matrix c = consensus({s, s}, {3, 7});
        CHECK(c[0][1] == 0.0);
    }
    SUBCASE("random inputs match the direct formula") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> value(0.0, 3.0);
        const std::size_t p = 5;
        Matrix s1(p, std::vector<double>(p, 0.0));
        Matrix s2 = s1;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                s1[i][j] = value(rng);
                s2[i][j] = value(rng);
            }
        }
        const Matrix c = consensus({s1, s2}, {11, 4});
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                const double want =
                    std::sqrt(s1[i][j] * s1[i][j] / 11.0 + s2[i][j] * s2[i][j] / 4.0);
                CHECK(std::abs(c[i][j] - want) <= 1e-12);
            }
        }
    }
    SUBCASE("consensus is monotone in its inputs") {
        Matrix s{{0.0, 1.0}, {1.0, 0.0}};
        const Matrix before = consensus({s}, {4});
        s[0][1] = 2.0;
        const Matrix after = consensus({s}, {4});
        CHECK(after[0][1] > before[0][1]);
    }
}

TEST_CASE("projection and clustering") {
    SUBCASE("two distinct variants with k=2 become singletons") {
        const Matrix c{{0.0, 4.0}, {4.0, 0.0}};
        const ExplorationReport report = project_and_cluster(c, 2, 1);
        REQUIRE(report.labels.size() == 2);
        CHECK(report.labels[0] != report.labels[1]);
        CHECK(report.inertia == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("duplicated variants share coordinates and cluster") {
        // variants 2 and 3 are duplicates: zero similarity between them and
        // identical similarities to everyone else
        const Matrix c{{0.0, 0.1, 5.0, 5.0},
                       {0.1, 0.0, 5.1, 5.1},
                       {5.0, 5.1, 0.0, 0.0},
                       {5.0, 5.1, 0.0, 0.0}};
        const ExplorationReport report = project_and_cluster(c, 2, 1);
        CHECK(report.coordinates[2][0] == report.coordinates[3][0]);
        CHECK(report.coordinates[2][1] == report.coordinates[3][1]);
        CHECK(report.labels[2] == report.labels[3]);
        CHECK(report.labels[0] != report.labels[2]);
    }

    SUBCASE("three planted blobs are recovered with ARI 1") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> noise(-0.05, 0.05);
        const std::size_t per_blob = 8;
        const std::size_t p = 3 * per_blob;
        Matrix c(p, std::vector<double>(p, 0.0));
        std::vector<std::size_t> truth(p, 0);
        // blob centers far apart in feature space
        const double centers[3] = {0.0, 10.0, 20.0};
        for (std::size_t i = 0; i < p; ++i) {
            truth[i] = i / per_blob;
            for (std::size_t j = 0; j < p; ++j) {
                if (i == j) {
                    continue;
                }
                const bool same = truth[i] == j / per_blob;
                c[i][j] = (same ? 1.0 : 8.0 + std::abs(centers[truth[i]] - centers[j / per_blob])) +
                          noise(rng);
            }
        }
        const ExplorationReport report = project_and_cluster(c, 3, 4);
        CHECK(adjusted_rand_index(truth, report.labels) == 1.0);
        // deterministic rerun
        const ExplorationReport again = project_and_cluster(c, 3, 4);
        CHECK(report.labels == again.labels);
    }

    SUBCASE("PCA components are orthonormal and variance shares behave") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> value(0.0, 2.0);
        const std::size_t p = 12;
        Matrix c(p, std::vector<double>(p, 0.0));
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                c[i][j] = c[j][i] = value(rng);
            }
        }
        const ExplorationReport report = project_and_cluster(c, 3, 9);
        double norm1 = 0.0;
        double norm2 = 0.0;
        double dot = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            norm1 += report.components[0][i] * report.components[0][i];
            norm2 += report.components[1][i] * report.components[1][i];
            dot += report.components[0][i] * report.components[1][i];
        }
        CHECK(std::abs(norm1 - 1.0) <= 1e-10);
        CHECK(std::abs(norm2 - 1.0) <= 1e-10);
        CHECK(std::abs(dot) <= 1e-10);
        CHECK(report.explained_variance[0] >= report.explained_variance[1]);
        CHECK(report.explained_variance[0] <= 1.0);
        CHECK(report.explained_variance[1] >= 0.0);
        CHECK(report.explained_variance[0] + report.explained_variance[1] <= 1.0 + 1e-10);
        CHECK_FALSE(report.silhouettes.empty());

        // Lloyd inertia never increases across rounds
        REQUIRE_FALSE(report.inertia_trace.empty());
        for (std::size_t i = 1; i < report.inertia_trace.size(); ++i) {
            CHECK(report.inertia_trace[i] <= report.inertia_trace[i - 1] + 1e-12);
        }
        CHECK(report.inertia == report.inertia_trace.back());
    }

    SUBCASE("k larger than P is rejected") {
        const Matrix c{{0.0, 1.0}, {1.0, 0.0}};
        CHECK_THROWS_AS(project_and_cluster(c, 3, 1), Error);
    }
}

TEST_CASE("top-k overlap counting") {
    MultilayerNetwork net;
    net.multiplexes.push_back(mux_of("n", 4, {{{{0, 1, 1.0}}}}));
    net.finalize();

    GridResult grid;
    grid.names = {"v1", "v2"};
    ScoreResult a;
    a.per_multiplex = {{0.4, 0.3, 0.2, 0.1}};
    ScoreResult b;
    b.per_multiplex = {{0.1, 0.2, 0.3, 0.4}};
    grid.results = {a, b};

    SUBCASE("one variant flags everything") {
        const auto overlap = topk_overlap(net, grid, {0}, 2, 0);
        REQUIRE(overlap.size() == 2);
        CHECK(overlap[0].count == 1);
        CHECK(overlap[0].in_all);
    }
    SUBCASE("disjoint top-k gives 2k singles") {
        const auto overlap = topk_overlap(net, grid, {0, 1}, 2, 0);
        REQUIRE(overlap.size() == 4);
        for (const auto& entry : overlap) {
            CHECK(entry.count == 1);
            CHECK_FALSE(entry.in_all);
        }
    }
    SUBCASE("identical variants count everywhere") {
        GridResult twice;
        twice.names = {"v1", "v2"};
        twice.results = {a, a};
        const auto overlap = topk_overlap(net, twice, {0, 1}, 2, 0);
        REQUIRE(overlap.size() == 2);
        CHECK(overlap[0].count == 2);
        CHECK(overlap[0].in_all);
    }
}

TEST_CASE("grid parsing inherits the base and validates overrides") {
    const MultilayerNetwork net = grid_network();
    const RwrConfig base = default_rwr_config(net);

    const KeyValue doc = KeyValue::parse(
        "variant.base:\n"
        "variant.fast.r: 0.9\n"
        "variant.deep.multiplex.0.delta: 0.1\n"
        "variant.deep.multiplex.0.tau: [0.25, 0.75]\n");
    const ParameterGrid grid = parse_grid(doc, net, base);
    REQUIRE(grid.variants.size() == 3);
    CHECK(grid.variants[0].name == "base");
    CHECK(grid.variants[0].config.r == base.r);
    CHECK(grid.variants[1].config.r == 0.9);
    CHECK(grid.variants[2].delta[0] == 0.1);
    CHECK(grid.variants[2].tau[0] == std::vector<double>{0.25, 0.75});
    CHECK(grid.variants[2].config.r == base.r);

    CHECK_THROWS_AS(parse_grid(KeyValue::parse("other: 1\n"), net, base), ConfigError);
    CHECK_THROWS_AS(parse_grid(KeyValue::parse("variant.x.unknown: 1\n"), net, base),
                    ConfigError);
    CHECK_THROWS_AS(parse_grid(KeyValue::parse("variant.bad name.r: 0.5\n"), net, base),
                    ConfigError);
    CHECK_THROWS_AS(parse_grid(KeyValue::parse("variant.x.r: 2.0\n"), net, base), ConfigError);
}

TEST_CASE("score_grid solves each variant and caches to disk") {
    const MultilayerNetwork net = grid_network();
    const RwrConfig base = default_rwr_config(net);
    const SeedSet seeds = grid_seeds(net);

    const KeyValue doc = KeyValue::parse(
        "variant.a.r: 0.5\n"
        "variant.b.r: 0.5\n"
        "variant.c.r: 0.9\n");
    const ParameterGrid grid = parse_grid(doc, net, base);

    TempDir dir("gridcache");
    GridOptions options;
    options.cache_dir = dir.path() / "scores";
    const GridResult first = score_grid(net, grid, seeds, options);
    REQUIRE(first.names.size() == 3);
    CHECK(first.failed.empty());

    // identical parameter sets give identical results
    for (std::size_t i = 0; i < first.results[0].per_multiplex[0].size(); ++i) {
        CHECK(first.results[0].per_multiplex[0][i] == first.results[1].per_multiplex[0][i]);
    }
    CHECK(std::filesystem::exists(*options.cache_dir / "a.tsv"));
    CHECK(std::filesystem::exists(*options.cache_dir / "c.tsv"));

    // second run consumes the cache and reproduces the scores exactly
    const GridResult second = score_grid(net, grid, seeds, options);
    for (std::size_t v = 0; v < 3; ++v) {
        for (std::size_t k = 0; k < net.multiplex_count(); ++k) {
            CHECK(first.results[v].per_multiplex[k] == second.results[v].per_multiplex[k]);
        }
    }

    // parallel execution matches the serial one
    GridOptions parallel = options;
    parallel.cache_dir.reset();
    parallel.workers = 3;
    const GridResult third = score_grid(net, grid, seeds, parallel);
    for (std::size_t v = 0; v < 3; ++v) {
        CHECK(first.results[v].per_multiplex[0] == third.results[v].per_multiplex[0]);
    }
}

TEST_CASE("non-converged variants are excluded and reported") {
    const MultilayerNetwork net = grid_network();
    const RwrConfig base = default_rwr_config(net);
    const KeyValue doc = KeyValue::parse("variant.slow.r: 0.01\nvariant.ok.r: 0.99\n");
    const ParameterGrid grid = parse_grid(doc, net, base);

    GridOptions options;
    options.max_iter = 40;  // enough for r=0.99, hopeless for r=0.01
    const GridResult result = score_grid(net, grid, grid_seeds(net), options);
    REQUIRE(result.failed.size() == 1);
    CHECK(result.failed[0] == "slow");
    REQUIRE(result.names.size() == 1);
    CHECK(result.names[0] == "ok");
}
