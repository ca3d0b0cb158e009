#include <doctest.h>

#include <fstream>
#include <sstream>

#include "temp_dir.hpp"
#include "uniwalk/manifest.hpp"
#include "uniwalk/synth.hpp"
#include "uniwalk/validation.hpp"

using namespace uniwalk;
using uniwalk::testing::TempDir;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("planted networks are valid, deterministic, and well-formed") {
    PlantedNetworkSpec spec;
    const SynthBundle bundle = generate_planted(spec, 1);
    REQUIRE(bundle.network.multiplex_count() == 3);
    CHECK(bundle.network.multiplexes[0].layer_count() == 2);
    CHECK(bundle.network.multiplexes[1].layer_count() == 1);
    CHECK(validate(bundle.network).valid());

    // every anchor holds exactly associations_per_anchor ground-truth links
    const BipartiteNetwork& target = bundle.network.bipartites[0];
    std::vector<std::size_t> anchor_degree(spec.nodes_per_type, 0);
    for (const Edge& e : target.edges) {
        anchor_degree[e.target] += 1;
    }
    for (const std::size_t d : anchor_degree) {
        CHECK(d == spec.associations_per_anchor);
    }

    // associations stay within the planted community
    for (const Edge& e : target.edges) {
        CHECK(e.source % spec.communities == e.target % spec.communities);
    }

    const SynthBundle again = generate_planted(spec, 1);
    CHECK(again.network.edge_count(0) == bundle.network.edge_count(0));
    const SynthBundle other = generate_planted(spec, 2);
    CHECK(validate(other.network).valid());
}

TEST_CASE("planted carrier coverage 1.0 reports full bipartite overlap") {
    PlantedNetworkSpec spec;
    spec.carrier_coverage = 1.0;
    const SynthBundle bundle = generate_planted(spec, 9);
    const ValidationReport report = validate(bundle.network);
    for (const auto& bp : report.bipartites) {
        if (bp.source_type == 2 || bp.target_type == 2) {
            CHECK(bp.source_coverage == 100.0);  // every carrier source covered
        }
    }
}

TEST_CASE("random networks respect the requested shape and overlap") {
    RandomNetworkSpec spec;
    spec.layers_per_multiplex = {2, 1, 1};
    spec.nodes_per_multiplex = {30, 20, 25};
    spec.edges_per_layer = {60, 40, 50};
    spec.overlap = 1.0;
    const SynthBundle bundle = generate_random(spec, 3);
    REQUIRE(bundle.network.multiplex_count() == 3);
    CHECK(bundle.network.multiplexes[0].layer_count() == 2);
    CHECK(bundle.network.multiplexes[0].node_count() == 30);

    const ValidationReport report = validate(bundle.network);
    CHECK(report.valid());
    for (const auto& bp : report.bipartites) {
        CHECK(bp.source_coverage == 100.0);  // full overlap requested
    }
}

TEST_CASE("bundles round-trip through the config loader") {
    TempDir dir("bundle");
    const SynthBundle bundle = generate_planted(PlantedNetworkSpec{}, 5);
    write_bundle(bundle, dir.path());

    const KeyValue doc = KeyValue::parse_file(dir.path() / "config.yml");
    const MultilayerNetwork net = load_network(doc, dir.path());
    REQUIRE(net.multiplex_count() == bundle.network.multiplex_count());
    for (std::size_t k = 0; k < net.multiplex_count(); ++k) {
        CHECK(net.multiplexes[k].node_count() >= bundle.network.multiplexes[k].node_count() - 0);
        CHECK(net.edge_count(k) == bundle.network.edge_count(k));
        CHECK(net.multiplexes[k].delta == bundle.network.multiplexes[k].delta);
    }
    REQUIRE(net.bipartites.size() == bundle.network.bipartites.size());
    for (std::size_t b = 0; b < net.bipartites.size(); ++b) {
        CHECK(net.bipartites[b].edges.size() == bundle.network.bipartites[b].edges.size());
    }

    const RwrConfig config = load_rwr_config(doc, net);
    CHECK(config.r == bundle.config.r);
    CHECK(config.lambda == bundle.config.lambda);

    const auto seeds_file = seeds_path(doc, dir.path());
    REQUIRE(seeds_file);
    CHECK(load_seed_names(*seeds_file) == bundle.seeds);
}

TEST_CASE("bundle writing is byte-deterministic") {
    TempDir a("bundle_a");
    TempDir b("bundle_b");
    const SynthBundle bundle = generate_planted(PlantedNetworkSpec{}, 7);
    const auto files_a = write_bundle(bundle, a.path());
    const auto files_b = write_bundle(bundle, b.path());
    REQUIRE(files_a.size() == files_b.size());
    for (std::size_t i = 0; i < files_a.size(); ++i) {
        CHECK(slurp(files_a[i]) == slurp(files_b[i]));
    }
}

TEST_CASE("fnv1a digests are stable and sensitive") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") != fnv1a("b"));
    CHECK(digest_hex(fnv1a("a")).size() == 16);

    Manifest manifest("demo");
    manifest.set("param.r", 0.7);
    manifest.set("count", std::size_t{3});
    const std::string text = manifest.doc().to_text();
    CHECK(text.find("version") != std::string::npos);
    CHECK(text.find("subcommand: demo") != std::string::npos);
    CHECK(text.find("param.r: 0.69999999999999996") != std::string::npos);
}
