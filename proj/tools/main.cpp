#include <CLI11.hpp>

#include "commands.hpp"
#include "uniwalk/version.hpp"

namespace {

using namespace uniwalk::cli;

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
    if (needs_config) {
        cmd->add_option("--config", args.config_path, "Config file (YAML key-value document)")
            ->required();
    }
    cmd->add_option("--out", args.out_dir, "Output directory (created if absent)")->required();
    cmd->add_option("--rng-seed", args.rng_seed, "Random seed (default 42)");
    cmd->add_option("--workers", args.workers, "Worker threads (0 = available parallelism)");
    cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
}

void add_pair(CLI::App* cmd, std::uint32_t& left, std::uint32_t& right, const char* help) {
    cmd->add_option("--left-out-type", left, help);
    cmd->add_option("--anchor-type", right, "Multiplex index of the seed-side (anchor) nodes");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random walk with restart on universal multilayer networks"};
    app.set_version_flag("--version", uniwalk::kVersion);
    app.require_subcommand(1);

    CommonArgs validate_args;
    CLI::App* validate = app.add_subcommand("validate", "Check a network bundle and report stats");
    add_common(validate, validate_args);

    RankArgs rank_args;
    CLI::App* rank = app.add_subcommand("rank", "Score and rank all nodes against the seeds");
    add_common(rank, rank_args.common);
    rank->add_option("--seeds", rank_args.seeds_path, "Seeds file (overrides the config)");
    rank->add_option("--subnetwork", rank_args.subnetwork_k,
                     "Also extract the top-K induced subnetwork");
    rank->add_flag("--exclude-seeds", rank_args.exclude_seeds,
                   "Drop the seeds from the rankings");
    rank->add_flag("--dump-transition", rank_args.dump_transition,
                   "Dump the transition matrix as TSV triplets");
    rank->add_option("--epsilon", rank_args.epsilon, "L1 convergence threshold");
    rank->add_option("--max-iter", rank_args.max_iter, "Iteration cap");

    EvalArgs loocv_args;
    CLI::App* loocv = app.add_subcommand("loocv", "Leave-one-out cross-validation over a bipartite");
    add_common(loocv, loocv_args.common);
    add_pair(loocv, loocv_args.left_out_type, loocv_args.anchor_type,
             "Multiplex index of the ranked (left-out) nodes");
    loocv->add_option("--min-degree", loocv_args.min_degree, "Skip anchors below this degree");
    loocv->add_flag("--no-seed-anchor", loocv_args.no_seed_anchor,
                    "Do not add the anchor to the seeds");
    loocv->add_flag("--full-rebuild", loocv_args.full_rebuild,
                    "Rebuild the whole transition matrix per left-out edge");
    loocv->add_flag("--resume", loocv_args.resume, "Continue from an existing records.tsv");
    loocv->add_option("--epsilon", loocv_args.epsilon, "L1 convergence threshold");
    loocv->add_option("--max-iter", loocv_args.max_iter, "Iteration cap");

    EvalArgs linkpred_args;
    linkpred_args.min_degree = 1;
    CLI::App* linkpred =
        app.add_subcommand("linkpred", "Link prediction: rank the far end of each removed edge");
    add_common(linkpred, linkpred_args.common);
    add_pair(linkpred, linkpred_args.left_out_type, linkpred_args.anchor_type,
             "Multiplex index of the ranked (left-out) nodes");
    linkpred->add_option("--min-degree", linkpred_args.min_degree,
                         "Skip anchors below this degree");
    linkpred->add_flag("--full-rebuild", linkpred_args.full_rebuild,
                       "Rebuild the whole transition matrix per removed edge");
    linkpred->add_flag("--resume", linkpred_args.resume, "Continue from an existing records.tsv");
    linkpred->add_option("--epsilon", linkpred_args.epsilon, "L1 convergence threshold");
    linkpred->add_option("--max-iter", linkpred_args.max_iter, "Iteration cap");

    AugmentArgs augment_args;
    CLI::App* augment =
        app.add_subcommand("augment", "Add transit nodes bridging a bipartite through a multiplex");
    add_common(augment, augment_args.common);
    add_pair(augment, augment_args.left_out_type, augment_args.anchor_type,
             "Multiplex index of the association sources");
    augment->add_option("--via", augment_args.via, "Multiplex receiving the transit nodes")
        ->required();
    augment->add_option("--transit-count", augment_args.transit_count,
                        "Transit nodes per association");
    augment->add_flag("--transit-self-loops", augment_args.transit_self_loops,
                      "Give transit nodes a self-loop in every layer");

    RandomizeArgs randomize_args;
    CLI::App* randomize =
        app.add_subcommand("randomize", "Shuffle a fraction of a bipartite's target endpoints");
    add_common(randomize, randomize_args.common);
    randomize->add_option("--source-type", randomize_args.source_type,
                          "Multiplex index of the bipartite sources");
    randomize->add_option("--target-type", randomize_args.target_type,
                          "Multiplex index of the bipartite targets");
    randomize->add_option("--fraction", randomize_args.fraction,
                          "Share of edges to shuffle, in [0, 1]");

    ExploreArgs explore_args;
    CLI::App* explore =
        app.add_subcommand("explore", "Parameter-space exploration over a variant grid");
    add_common(explore, explore_args.common);
    explore->add_option("--grid", explore_args.grid_path, "Grid file of parameter variants")
        ->required();
    explore->add_option("--seeds", explore_args.seeds_path, "Seeds file (overrides the config)");
    explore->add_option("--k", explore_args.k, "Cluster count (default 8)");
    explore->add_option("--top", explore_args.top, "Top-k size for overlap tables");
    explore->add_option("--epsilon", explore_args.epsilon, "L1 convergence threshold");
    explore->add_option("--max-iter", explore_args.max_iter, "Iteration cap");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic network bundle");
    add_common(synth, synth_args.common, /*needs_config=*/false);
    synth->add_option("--kind", synth_args.kind, "planted or random");
    synth->add_option("--nodes", synth_args.nodes, "Nodes per multiplex");
    synth->add_option("--communities", synth_args.communities, "Planted community count");
    synth->add_option("--associations", synth_args.associations,
                      "Planted associations per anchor");
    synth->add_option("--carrier-coverage", synth_args.carrier_coverage,
                      "Planted coverage of the carrier bipartites");
    synth->add_option("--multiplexes", synth_args.multiplexes, "Random: multiplex count");
    synth->add_option("--layers", synth_args.layers, "Random: layers per multiplex");
    synth->add_option("--edges", synth_args.edges, "Random: edges per layer");
    synth->add_option("--overlap", synth_args.overlap, "Random: bipartite source coverage");
    synth->add_flag("--directed", synth_args.directed, "Random: directed layers");
    synth->add_flag("--weighted", synth_args.weighted, "Random: weighted layers");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        return cmd_validate(validate_args);
    }
    if (rank->parsed()) {
        return cmd_rank(rank_args);
    }
    if (loocv->parsed()) {
        return cmd_loocv(loocv_args);
    }
    if (linkpred->parsed()) {
        return cmd_linkpred(linkpred_args);
    }
    if (augment->parsed()) {
        return cmd_augment(augment_args);
    }
    if (randomize->parsed()) {
        return cmd_randomize(randomize_args);
    }
    if (explore->parsed()) {
        return cmd_explore(explore_args);
    }
    if (synth->parsed()) {
        return cmd_synth(synth_args);
    }
    return 1;
}
