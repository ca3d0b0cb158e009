#include <doctest.h>

#include <map>
#include <sstream>

#include "build.hpp"
#include "oracle.hpp"
#include "random_instance.hpp"
#include "uniwalk/errors.hpp"
#include "uniwalk/eval.hpp"
#include "uniwalk/rwr.hpp"
#include "uniwalk/supra.hpp"
#include "uniwalk/validation.hpp"

using namespace uniwalk;
using namespace uniwalk::testing;

namespace {

// Two monoplexes coupled by one association bipartite.
MultilayerNetwork eval_network() {
    MultilayerNetwork net;
    net.multiplexes.push_back(
        mux_of("g", 6, {{{{5, 1, 1.0}, {5, 2, 1.0}, {1, 4, 1.0}, {0, 3, 1.0}}}}));
    net.multiplexes.push_back(mux_of("d", 2, {{{{0, 1, 1.0}}}}));
    // anchor d0 is associated with g5, g1 and g2
    net.bipartites.push_back(bip_of(0, 1, {{5, 0, 1.0}, {1, 0, 1.0}, {2, 0, 1.0}}));
    net.finalize();
    return net;
}

std::multiset<std::string> edge_fingerprint(const MultilayerNetwork& net) {
    std::multiset<std::string> out;
    for (std::size_t k = 0; k < net.multiplex_count(); ++k) {
        for (std::size_t l = 0; l < net.multiplexes[k].layer_count(); ++l) {
            for (const Edge& e : net.multiplexes[k].layers[l].edges) {
                out.insert("m" + std::to_string(k) + "." + std::to_string(l) + ":" +
                           std::to_string(e.source) + ">" + std::to_string(e.target) + "@" +
                           std::to_string(e.weight));
            }
        }
    }
    for (const BipartiteNetwork& bp : net.bipartites) {
        for (const Edge& e : bp.edges) {
            out.insert("b" + std::to_string(bp.source_type) + "_" +
                       std::to_string(bp.target_type) + ":" + std::to_string(e.source) + ">" +
                       std::to_string(e.target) + "@" + std::to_string(e.weight));
        }
    }
    return out;
}

} // namespace

TEST_CASE("loocv produces one record per association of an eligible anchor") {
    MultilayerNetwork net;
    net.multiplexes.push_back(mux_of("g", 4, {{{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}}}));
    net.multiplexes.push_back(mux_of("d", 2, {{{{0, 1, 1.0}}}}));
    net.bipartites.push_back(bip_of(0, 1, {{0, 0, 1.0}, {1, 0, 1.0}, {3, 1, 1.0}}));
    net.finalize();
    const RwrConfig config = default_rwr_config(net);

    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;
    const EvalOutcome outcome = run_loocv(net, config, task);

    // d0 has two associates -> 2 records; d1 has one -> skipped
    REQUIRE(outcome.records.size() == 2);
    CHECK(outcome.skipped_anchors == 1);
    CHECK(outcome.records[0].left_out == "g0");
    CHECK(outcome.records[0].anchor == "d0");
    CHECK(outcome.records[1].left_out == "g1");
    // pool = 4 type-0 nodes minus the single seed associate
    CHECK(outcome.records[0].pool == 3);
    CHECK(outcome.records[1].pool == 3);
}

TEST_CASE("the unique common neighbor of all seeds ranks first") {
    const MultilayerNetwork net = eval_network();
    const RwrConfig config = default_rwr_config(net);
    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;
    const EvalOutcome outcome = run_loocv(net, config, task);

    for (const EvalRecord& r : outcome.records) {
        if (r.left_out == "g5") {
            CHECK(r.rank == 1);  // g5 neighbors both remaining seeds
        }
    }
}

TEST_CASE("loocv rank matches a dense from-scratch computation") {
    // left-out node isolated except for the removed edge; anchor of degree 1
    MultilayerNetwork net;
    net.multiplexes.push_back(mux_of("g", 4, {{{{1, 2, 1.0}, {2, 3, 1.0}}}}));
    net.multiplexes.push_back(mux_of("d", 2, {{{{0, 1, 1.0}}}}));
    net.bipartites.push_back(bip_of(0, 1, {{0, 0, 1.0}, {1, 1, 1.0}}));
    net.finalize();
    const RwrConfig config = default_rwr_config(net);

    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;
    task.min_degree = 1;  // anchors hold a single association here
    const EvalOutcome outcome = run_loocv(net, config, task);
    REQUIRE(outcome.records.size() == 2);

    // dense re-computation for the (g0, d0) removal
    MultilayerNetwork reduced = net;
    reduced.bipartites[0].edges.erase(reduced.bipartites[0].edges.begin());
    reduced.finalize();
    std::vector<double> p0(8, 0.0);
    p0[4] = 1.0;  // supra index of d0 (mux 1 offset = 4)
    const DenseMatrix dense = dense_effective(dense_transition(reduced, config), p0);
    const std::vector<double> steady = dense_steady_state(dense, p0, config.r);

    // rank g0 among all type-0 nodes (no type-0 seeds)
    std::size_t rank = 1;
    for (std::size_t i = 1; i < 4; ++i) {
        if (steady[i] > steady[0]) {
            ++rank;
        }
    }
    CHECK(outcome.records[0].left_out == "g0");
    CHECK(outcome.records[0].rank == rank);
    CHECK(outcome.records[0].pool == 4);
}

TEST_CASE("link prediction on a single-edge bipartite") {
    MultilayerNetwork net;
    net.multiplexes.push_back(mux_of("g", 1, {{{}}}));
    net.multiplexes.push_back(mux_of("d", 1, {{{}}}));
    net.bipartites.push_back(bip_of(0, 1, {{0, 0, 1.0}}));
    net.finalize();
    const RwrConfig config = default_rwr_config(net);

    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;
    task.min_degree = 1;
    const EvalOutcome outcome = run_link_prediction(net, config, task);
    REQUIRE(outcome.records.size() == 1);
    CHECK(outcome.records[0].rank == 1);  // pool of one
    CHECK(outcome.records[0].pool == 1);
    REQUIRE(outcome.cdf.size() == 1);
    CHECK(outcome.cdf[0].second == 1.0);  // CDF(pool) == 1
}

TEST_CASE("cdf is nondecreasing and ends at 1") {
    const MultilayerNetwork net = eval_network();
    const RwrConfig config = default_rwr_config(net);
    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;
    const EvalOutcome outcome = run_loocv(net, config, task);
    REQUIRE_FALSE(outcome.cdf.empty());
    for (std::size_t i = 1; i < outcome.cdf.size(); ++i) {
        CHECK(outcome.cdf[i].second >= outcome.cdf[i - 1].second);
    }
    CHECK(outcome.cdf.back().second == 1.0);
    CHECK(cdf_area(outcome.cdf) > 0.0);
    CHECK(cdf_area(outcome.cdf) <= 1.0);
}

TEST_CASE("protocols leave the network untouched and repeat identically") {
    const MultilayerNetwork net = eval_network();
    const RwrConfig config = default_rwr_config(net);
    const auto before = edge_fingerprint(net);

    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;
    const EvalOutcome first = run_loocv(net, config, task);
    CHECK(edge_fingerprint(net) == before);

    const EvalOutcome second = run_loocv(net, config, task);
    std::ostringstream a;
    std::ostringstream b;
    write_records_tsv(a, first.records);
    write_records_tsv(b, second.records);
    CHECK(a.str() == b.str());
    std::ostringstream ca;
    std::ostringstream cb;
    write_cdf_tsv(ca, first.cdf);
    write_cdf_tsv(cb, second.cdf);
    CHECK(ca.str() == cb.str());
}

TEST_CASE("worker fan-out yields the same outcome as a single worker") {
    const MultilayerNetwork net = eval_network();
    const RwrConfig config = default_rwr_config(net);
    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;

    EvalOptions serial;
    serial.workers = 1;
    EvalOptions parallel;
    parallel.workers = 4;
    const EvalOutcome a = run_loocv(net, config, task, serial);
    const EvalOutcome b = run_loocv(net, config, task, parallel);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].left_out == b.records[i].left_out);
        CHECK(a.records[i].rank == b.records[i].rank);
    }
}

TEST_CASE("patched rebuild equals full rebuild exactly") {
    for (std::uint64_t seed = 600; seed < 612; ++seed) {
        RandomInstance instance = make_random_instance(seed);
        // find a usable bipartite pair
        if (instance.network.bipartites.empty()) {
            continue;
        }
        instance.config.eta.reset();  // protocol seeds differ from the instance's
        const BipartiteNetwork& bp = instance.network.bipartites.front();
        if (bp.edges.empty()) {
            continue;
        }
        EvalTask task;
        task.left_out_type = bp.source_type;
        task.anchor_type = bp.target_type;
        task.min_degree = 1;

        EvalTask patched = task;
        patched.rebuild = RebuildStrategy::Patched;
        EvalTask full = task;
        full.rebuild = RebuildStrategy::Full;

        const EvalOutcome a = run_loocv(instance.network, instance.config, patched);
        const EvalOutcome b = run_loocv(instance.network, instance.config, full);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].left_out == b.records[i].left_out);
            CHECK(a.records[i].anchor == b.records[i].anchor);
            CHECK(a.records[i].rank == b.records[i].rank);
            CHECK(a.records[i].pool == b.records[i].pool);
        }
    }
}

TEST_CASE("resume_from skips already-computed records") {
    const MultilayerNetwork net = eval_network();
    const RwrConfig config = default_rwr_config(net);
    EvalTask task;
    task.left_out_type = 0;
    task.anchor_type = 1;
    const EvalOutcome all = run_loocv(net, config, task);
    REQUIRE(all.records.size() == 3);

    EvalOptions options;
    options.resume_from = 2;
    const EvalOutcome tail = run_loocv(net, config, task, options);
    REQUIRE(tail.records.size() == 1);
    CHECK(tail.records[0].left_out == all.records[2].left_out);
    CHECK(tail.records[0].rank == all.records[2].rank);
}

TEST_CASE("transit augmentation adds t nodes and 2t edges per association") {
    const MultilayerNetwork net = [] {
        MultilayerNetwork n;
        n.multiplexes.push_back(mux_of("g", 3, {{{{0, 1, 1.0}, {1, 2, 1.0}}}}));
        n.multiplexes.push_back(mux_of("d", 2, {{{{0, 1, 1.0}}}}));
        n.multiplexes.push_back(mux_of("x", 2, {{{{0, 1, 1.0}}}}));
        n.bipartites.push_back(bip_of(0, 1, {{0, 0, 1.0}, {1, 0, 1.0}, {2, 1, 1.0}}));
        n.finalize();
        return n;
    }();

    SUBCASE("t = 0 returns an identical copy") {
        const MultilayerNetwork out = augment_transit(net, 2, 0, 1, 0, 1);
        CHECK(edge_fingerprint(out) == edge_fingerprint(net));
        CHECK(out.multiplexes[2].node_count() == 2);
    }

    SUBCASE("t = 1 on three associations") {
        const MultilayerNetwork out = augment_transit(net, 2, 0, 1, 1, 1);
        CHECK(out.multiplexes[2].node_count() == 2 + 3);
        // fresh bipartites (0,2) and (2,1) appeared
        REQUIRE(out.bipartites.size() == 3);
        CHECK(out.bipartite_view(0, 2));
        CHECK(out.bipartite_view(2, 1));
        std::size_t new_edges = 0;
        for (const BipartiteNetwork& bp : out.bipartites) {
            if (bp.source_type != 0 || bp.target_type != 1) {
                new_edges += bp.edges.size();
            }
        }
        CHECK(new_edges == 2 * 3);
        // the original network is untouched
        CHECK(net.multiplexes[2].node_count() == 2);
        // transit nodes stay isolated inside the carrier multiplex
        const ValidationReport report = validate(out);
        CHECK(report.multiplexes[2].isolated_nodes == 3);
    }

    SUBCASE("t = 5 adds 5E nodes and 10E edges") {
        const MultilayerNetwork out = augment_transit(net, 2, 0, 1, 5, 1);
        CHECK(out.multiplexes[2].node_count() == 2 + 5 * 3);
        std::size_t new_edges = 0;
        for (const BipartiteNetwork& bp : out.bipartites) {
            if (bp.source_type != 0 || bp.target_type != 1) {
                new_edges += bp.edges.size();
            }
        }
        CHECK(new_edges == 10 * 3);
    }

    SUBCASE("self-loop option keeps transit nodes non-isolated") {
        const MultilayerNetwork out = augment_transit(net, 2, 0, 1, 1, 1, true);
        const ValidationReport report = validate(out);
        CHECK(report.multiplexes[2].isolated_nodes == 0);
    }
}

TEST_CASE("bipartite randomization preserves both degree sequences exactly") {
    std::mt19937_64 rng(99);
    MultilayerNetwork net;
    net.multiplexes.push_back(mux_of("g", 10, {{{{0, 1, 1.0}}}}));
    net.multiplexes.push_back(mux_of("d", 8, {{{{0, 1, 1.0}}}}));
    std::vector<Edge> edges;
    for (int e = 0; e < 30; ++e) {
        edges.push_back({static_cast<NodeId>(rng() % 10), static_cast<NodeId>(rng() % 8), 1.0});
    }
    net.bipartites.push_back(bip_of(0, 1, std::move(edges)));
    net.finalize();

    const auto degrees = [](const BipartiteNetwork& bp) {
        std::map<NodeId, std::size_t> src;
        std::map<NodeId, std::size_t> dst;
        for (const Edge& e : bp.edges) {
            src[e.source] += 1;
            dst[e.target] += 1;
        }
        return std::make_pair(src, dst);
    };
    const auto [src_before, dst_before] = degrees(net.bipartites[0]);

    SUBCASE("fraction 0 is the identity") {
        const MultilayerNetwork out = randomize_bipartite(net, 0, 1, 0.0, 7);
        CHECK(edge_fingerprint(out) == edge_fingerprint(net));
    }

    SUBCASE("full randomization permutes targets") {
        const MultilayerNetwork out = randomize_bipartite(net, 0, 1, 1.0, 7);
        const auto [src_after, dst_after] = degrees(out.bipartites[0]);
        CHECK(src_after == src_before);
        CHECK(dst_after == dst_before);
        CHECK(out.bipartites[0].edges.size() == net.bipartites[0].edges.size());
        // target multiset is preserved
        std::multiset<NodeId> t_before;
        std::multiset<NodeId> t_after;
        for (const Edge& e : net.bipartites[0].edges) {
            t_before.insert(e.target);
        }
        for (const Edge& e : out.bipartites[0].edges) {
            t_after.insert(e.target);
        }
        CHECK(t_before == t_after);
        // and the shuffle actually moved something
        CHECK(edge_fingerprint(out) != edge_fingerprint(net));
    }

    SUBCASE("deterministic given the seed") {
        const MultilayerNetwork a = randomize_bipartite(net, 0, 1, 0.5, 13);
        const MultilayerNetwork b = randomize_bipartite(net, 0, 1, 0.5, 13);
        const MultilayerNetwork c = randomize_bipartite(net, 0, 1, 0.5, 14);
        CHECK(edge_fingerprint(a) == edge_fingerprint(b));
        CHECK(edge_fingerprint(a) != edge_fingerprint(c));
    }
}

TEST_CASE("records TSV round trip") {
    std::vector<EvalRecord> records{{"g1", "d1", 3, 10}, {"g2", "d1", 1, 10}};
    std::ostringstream out;
    write_records_tsv(out, records);
    CHECK(out.str() == "left_out\tanchor\trank\tpool\ng1\td1\t3\t10\ng2\td1\t1\t10\n");
}
