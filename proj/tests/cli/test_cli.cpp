#include <doctest.h>

#include <cmath>
#include <fstream>

#include "subprocess.hpp"
#include "temp_dir.hpp"

using namespace uniwalk::testing;

namespace {

std::string cli() { return cli_path_from_env(); }

void write_path_bundle(const std::filesystem::path& dir) {
    std::ofstream(dir / "layer.tsv") << "a\tb\n";
    std::ofstream(dir / "seeds.txt") << "a\n";
    std::ofstream(dir / "config.yml") << "multiplex.0.layers: [layer.tsv]\n"
                                         "seeds: seeds.txt\n"
                                         "r: 0.5\n";
}

double ranking_score(const std::filesystem::path& file, const std::string& node) {
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = line.find('\t', tab1 + 1);
        if (line.substr(0, tab1) == node) {
            return std::stod(line.substr(tab1 + 1, tab2 - tab1 - 1));
        }
    }
    return -1.0;
}

} // namespace

TEST_CASE("rank reproduces the closed-form two-node scores") {
    TempDir dir("cli_rank");
    write_path_bundle(dir.path());
    const auto out = dir.path() / "out";

    const RunResult result = run_process({cli(), "rank", "--config",
                                          (dir.path() / "config.yml").string(), "--out",
                                          out.string(), "--quiet"});
    CHECK(result.exit_code == 0);
    REQUIRE(std::filesystem::exists(out / "ranking_0.tsv"));
    REQUIRE(std::filesystem::exists(out / "manifest.yml"));
    CHECK(std::abs(ranking_score(out / "ranking_0.tsv", "a") - 2.0 / 3.0) < 1e-10);
    CHECK(std::abs(ranking_score(out / "ranking_0.tsv", "b") - 1.0 / 3.0) < 1e-10);

    // manifest echoes effective defaults
    std::ifstream manifest(out / "manifest.yml");
    std::string text((std::istreambuf_iterator<char>(manifest)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("subcommand: rank") != std::string::npos);
    CHECK(text.find("param.eta: auto") != std::string::npos);
    CHECK(text.find("result.converged: true") != std::string::npos);
}

TEST_CASE("rank with r = 1 leaves only restart mass") {
    TempDir dir("cli_r1");
    write_path_bundle(dir.path());
    std::ofstream(dir.path() / "config.yml") << "multiplex.0.layers: [layer.tsv]\n"
                                                "seeds: seeds.txt\n"
                                                "r: 1\n";
    const auto out = dir.path() / "out";
    const RunResult result = run_process(
        {cli(), "rank", "--config", (dir.path() / "config.yml").string(), "--out", out.string(),
         "--quiet"});
    CHECK(result.exit_code == 0);
    CHECK(ranking_score(out / "ranking_0.tsv", "a") == 1.0);
    CHECK(ranking_score(out / "ranking_0.tsv", "b") == 0.0);
}

TEST_CASE("exit codes distinguish config, seed and convergence failures") {
    TempDir dir("cli_codes");
    write_path_bundle(dir.path());

    SUBCASE("broken config exits 1") {
        std::ofstream(dir.path() / "bad.yml") << "multiplex.0.layers: [missing.tsv]\n";
        const RunResult result =
            run_process({cli(), "rank", "--config", (dir.path() / "bad.yml").string(), "--out",
                         (dir.path() / "out").string(), "--quiet"});
        CHECK(result.exit_code == 1);
    }
    SUBCASE("unresolvable seeds exit 2") {
        std::ofstream(dir.path() / "seeds.txt") << "nosuchnode\n";
        const RunResult result =
            run_process({cli(), "rank", "--config", (dir.path() / "config.yml").string(),
                         "--out", (dir.path() / "out").string(), "--quiet"});
        CHECK(result.exit_code == 2);
    }
    SUBCASE("non-convergence exits 3 but still writes outputs") {
        const auto out = dir.path() / "out";
        const RunResult result =
            run_process({cli(), "rank", "--config", (dir.path() / "config.yml").string(),
                         "--out", out.string(), "--max-iter", "1", "--quiet"});
        CHECK(result.exit_code == 3);
        CHECK(std::filesystem::exists(out / "ranking_0.tsv"));
        std::ifstream manifest(out / "manifest.yml");
        std::string text((std::istreambuf_iterator<char>(manifest)),
                         std::istreambuf_iterator<char>());
        CHECK(text.find("result.converged: false") != std::string::npos);
    }
}

TEST_CASE("synth bundles validate cleanly and are deterministic") {
    TempDir dir("cli_synth");
    const auto bundle_a = dir.path() / "a";
    const auto bundle_b = dir.path() / "b";
    for (const auto& out : {bundle_a, bundle_b}) {
        const RunResult result = run_process({cli(), "synth", "--kind", "planted", "--nodes",
                                              "24", "--out", out.string(), "--quiet"});
        REQUIRE(result.exit_code == 0);
    }
    CHECK(snapshot_dir(bundle_a) == snapshot_dir(bundle_b));

    const RunResult validated =
        run_process({cli(), "validate", "--config", (bundle_a / "config.yml").string(), "--out",
                     (dir.path() / "val").string(), "--quiet"});
    CHECK(validated.exit_code == 0);
}

TEST_CASE("loocv writes streamed records, a cdf, and supports resume") {
    TempDir dir("cli_loocv");
    const auto bundle = dir.path() / "net";
    REQUIRE(run_process({cli(), "synth", "--kind", "planted", "--nodes", "16", "--communities",
                         "2", "--associations", "2", "--out", bundle.string(), "--quiet"})
                .exit_code == 0);

    const auto out = dir.path() / "out";
    const RunResult result =
        run_process({cli(), "loocv", "--config", (bundle / "config.yml").string(), "--out",
                     out.string(), "--workers", "2", "--quiet"});
    REQUIRE(result.exit_code == 0);
    REQUIRE(std::filesystem::exists(out / "records.tsv"));
    REQUIRE(std::filesystem::exists(out / "cdf.tsv"));

    const auto full = snapshot_dir(out);

    // truncate records.tsv to half and resume
    {
        std::istringstream all(full.at("records.tsv"));
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(all, line)) {
            lines.push_back(line);
        }
        REQUIRE(lines.size() > 4);
        std::ofstream partial(out / "records.tsv", std::ios::binary);
        for (std::size_t i = 0; i < lines.size() / 2; ++i) {
            partial << lines[i] << '\n';
        }
    }
    const RunResult resumed =
        run_process({cli(), "loocv", "--config", (bundle / "config.yml").string(), "--out",
                     out.string(), "--resume", "--quiet"});
    REQUIRE(resumed.exit_code == 0);
    CHECK(snapshot_dir(out) == full);
}

TEST_CASE("explore produces the documented outputs") {
    TempDir dir("cli_explore");
    const auto bundle = dir.path() / "net";
    REQUIRE(run_process({cli(), "synth", "--kind", "planted", "--nodes", "16", "--communities",
                         "2", "--associations", "2", "--out", bundle.string(), "--quiet"})
                .exit_code == 0);
    std::ofstream(dir.path() / "grid.yml") << "variant.a.r: 0.3\n"
                                              "variant.b.r: 0.5\n"
                                              "variant.c.r: 0.7\n"
                                              "variant.d.r: 0.9\n";
    const auto out = dir.path() / "out";
    const RunResult result = run_process(
        {cli(), "explore", "--config", (bundle / "config.yml").string(), "--grid",
         (dir.path() / "grid.yml").string(), "--out", out.string(), "--k", "2", "--top", "5",
         "--quiet"});
    REQUIRE(result.exit_code == 0);
    for (const char* file : {"similarity_0.tsv", "similarity_1.tsv", "similarity_2.tsv",
                             "consensus.tsv", "pca.tsv", "topk_overlap.tsv", "silhouette.tsv",
                             "manifest.yml"}) {
        CHECK(std::filesystem::exists(out / file));
    }
    CHECK(std::filesystem::exists(out / "scores" / "a.tsv"));
}

TEST_CASE("augment and randomize write loadable bundles") {
    TempDir dir("cli_aug");
    const auto bundle = dir.path() / "net";
    REQUIRE(run_process({cli(), "synth", "--kind", "planted", "--nodes", "16", "--communities",
                         "2", "--associations", "2", "--out", bundle.string(), "--quiet"})
                .exit_code == 0);

    const auto augmented = dir.path() / "augmented";
    REQUIRE(run_process({cli(), "augment", "--config", (bundle / "config.yml").string(), "--via",
                         "2", "--transit-count", "1", "--out", augmented.string(), "--quiet"})
                .exit_code == 0);
    CHECK(run_process({cli(), "validate", "--config", (augmented / "config.yml").string(),
                       "--out", (dir.path() / "val1").string(), "--quiet"})
              .exit_code == 0);

    const auto randomized = dir.path() / "randomized";
    REQUIRE(run_process({cli(), "randomize", "--config", (augmented / "config.yml").string(),
                         "--source-type", "0", "--target-type", "2", "--fraction", "0.5", "--out",
                         randomized.string(), "--quiet"})
                .exit_code == 0);
    CHECK(run_process({cli(), "validate", "--config", (randomized / "config.yml").string(),
                       "--out", (dir.path() / "val2").string(), "--quiet"})
              .exit_code == 0);
}
