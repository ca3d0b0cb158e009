#pragma once

#include <cstdint>
#include <string>

namespace uniwalk::cli {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t rng_seed = 42;  // fixed default: deterministic by default
    std::size_t workers = 0;      // 0 = available parallelism
    bool quiet = false;
};

struct RankArgs {
    CommonArgs common;
    std::string seeds_path;  // overrides the config's seeds key
    std::size_t subnetwork_k = 0;
    bool exclude_seeds = false;
    bool dump_transition = false;
    double epsilon = 1e-10;
    std::size_t max_iter = 1000;
};

struct EvalArgs {
    CommonArgs common;
    std::uint32_t left_out_type = 0;
    std::uint32_t anchor_type = 1;
    std::size_t min_degree = 2;
    bool no_seed_anchor = false;
    bool full_rebuild = false;
    bool resume = false;
    double epsilon = 1e-10;
    std::size_t max_iter = 1000;
};

struct AugmentArgs {
    CommonArgs common;
    std::uint32_t left_out_type = 0;
    std::uint32_t anchor_type = 1;
    std::uint32_t via = 2;
    std::size_t transit_count = 1;
    bool transit_self_loops = false;
};

struct RandomizeArgs {
    CommonArgs common;
    std::uint32_t source_type = 0;
    std::uint32_t target_type = 1;
    double fraction = 1.0;
};

struct ExploreArgs {
    CommonArgs common;
    std::string grid_path;
    std::string seeds_path;
    std::size_t k = 8;
    std::size_t top = 100;
    double epsilon = 1e-10;
    std::size_t max_iter = 1000;
};

struct SynthArgs {
    CommonArgs common;
    std::string kind = "planted";
    // planted
    std::size_t nodes = 40;
    std::size_t communities = 4;
    std::size_t associations = 4;
    double carrier_coverage = 0.2;
    // random
    std::size_t multiplexes = 2;
    std::size_t layers = 2;
    std::size_t edges = 120;
    double overlap = 0.8;
    bool directed = false;
    bool weighted = false;
};

int cmd_validate(const CommonArgs& args);
int cmd_rank(const RankArgs& args);
int cmd_loocv(const EvalArgs& args);
int cmd_linkpred(const EvalArgs& args);
int cmd_augment(const AugmentArgs& args);
int cmd_randomize(const RandomizeArgs& args);
int cmd_explore(const ExploreArgs& args);
int cmd_synth(const SynthArgs& args);

} // namespace uniwalk::cli
