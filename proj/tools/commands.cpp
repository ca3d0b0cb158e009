#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "uniwalk/config.hpp"
#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"
#include "uniwalk/eval.hpp"
#include "uniwalk/explore.hpp"
#include "uniwalk/manifest.hpp"
#include "uniwalk/rwr.hpp"
#include "uniwalk/supra.hpp"
#include "uniwalk/synth.hpp"
#include "uniwalk/validation.hpp"

namespace uniwalk::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSeeds = 2;
constexpr int kExitNoConvergence = 3;

struct Bundle {
    KeyValue doc;
    fs::path base_dir;
    MultilayerNetwork network;
    RwrConfig config;
};

Bundle load_bundle(const std::string& config_path) {
    Bundle bundle;
    const fs::path path(config_path);
    bundle.doc = KeyValue::parse_file(path);
    bundle.base_dir = path.parent_path();
    bundle.network = load_network(bundle.doc, bundle.base_dir);
    bundle.config = load_rwr_config(bundle.doc, bundle.network);
    return bundle;
}

std::size_t effective_workers(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

fs::path prepare_out_dir(const CommonArgs& args) {
    const fs::path out(args.out_dir);
    fs::create_directories(out);
    return out;
}

void digest_config_inputs(Manifest& manifest, const Bundle& bundle,
                          const std::string& config_path) {
    manifest.set("config_path", config_path);
    manifest.set("config_digest", digest_hex(fnv1a_file(config_path)));
    for (const auto& [key, value] : bundle.doc.entries()) {
        const bool is_layers = key.rfind("multiplex.", 0) == 0 &&
                               key.size() > 7 && key.substr(key.size() - 7) == ".layers";
        const bool is_nodes = key.rfind("multiplex.", 0) == 0 &&
                              key.size() > 6 && key.substr(key.size() - 6) == ".nodes";
        const bool is_bip_path = key.rfind("bipartite.", 0) == 0 &&
                                 key.size() > 5 && key.substr(key.size() - 5) == ".path";
        if (is_nodes) {
            fs::path p(value.scalar());
            if (!p.is_absolute()) {
                p = bundle.base_dir / p;
            }
            manifest.set_input(key, p);
        } else if (is_layers) {
            const auto files = bundle.doc.get_string_list(key);
            for (std::size_t l = 0; l < files.size(); ++l) {
                fs::path p(files[l]);
                if (!p.is_absolute()) {
                    p = bundle.base_dir / p;
                }
                manifest.set_input(key + "." + std::to_string(l), p);
            }
        } else if (is_bip_path) {
            fs::path p(value.scalar());
            if (!p.is_absolute()) {
                p = bundle.base_dir / p;
            }
            manifest.set_input(key, p);
        }
    }
}

void digest_outputs(Manifest& manifest, const fs::path& out_dir,
                    const std::vector<std::string>& files) {
    for (const std::string& file : files) {
        manifest.set("output." + file + ".digest", digest_hex(fnv1a_file(out_dir / file)));
    }
}

void common_manifest_fields(Manifest& manifest, const CommonArgs& args) {
    manifest.set("rng_seed", std::size_t{args.rng_seed});
    manifest.set("workers", effective_workers(args.workers));
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const SeedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSeeds;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

SeedSet seeds_for(const Bundle& bundle, const std::string& override_path,
                  fs::path* used_path = nullptr) {
    fs::path path;
    if (!override_path.empty()) {
        path = override_path;
    } else if (const auto declared = seeds_path(bundle.doc, bundle.base_dir)) {
        path = *declared;
    } else {
        throw SeedError("no seeds: pass --seeds or declare a seeds file in the config");
    }
    if (used_path) {
        *used_path = path;
    }
    return resolve_seeds(bundle.network, load_seed_names(path));
}

EvalTask make_task(const EvalArgs& args, EvalProtocol protocol) {
    EvalTask task;
    task.left_out_type = args.left_out_type;
    task.anchor_type = args.anchor_type;
    task.protocol = protocol;
    task.min_degree = args.min_degree;
    task.seed_anchor = !args.no_seed_anchor;
    task.rebuild = args.full_rebuild ? RebuildStrategy::Full : RebuildStrategy::Patched;
    return task;
}

int run_eval(const EvalArgs& args, EvalProtocol protocol, const char* name) {
    return run_guarded([&]() {
        const Bundle bundle = load_bundle(args.common.config_path);
        const fs::path out = prepare_out_dir(args.common);
        const EvalTask task = make_task(args, protocol);

        EvalOptions options;
        options.epsilon = args.epsilon;
        options.max_iter = args.max_iter;
        options.workers = effective_workers(args.common.workers);

        std::vector<EvalRecord> prior;
        const fs::path records_path = out / "records.tsv";
        if (args.resume && fs::exists(records_path)) {
            prior = read_records_tsv(records_path);
            options.resume_from = prior.size();
        }

        std::ofstream records_out(records_path,
                                  args.resume && options.resume_from > 0
                                      ? std::ios::binary | std::ios::app
                                      : std::ios::binary);
        if (options.resume_from == 0) {
            records_out << "left_out\tanchor\trank\tpool\n";
        }
        options.on_record = [&](const EvalRecord& r, std::size_t done, std::size_t total) {
            records_out << r.left_out << '\t' << r.anchor << '\t' << r.rank << '\t' << r.pool
                        << '\n';
            records_out.flush();  // streamed per left-out edge
            if (!args.common.quiet && (done % 25 == 0 || done == total)) {
                std::cout << name << ": " << done << "/" << total << " records\n";
            }
        };

        EvalOutcome outcome =
            protocol == EvalProtocol::Loocv
                ? run_loocv(bundle.network, bundle.config, task, options)
                : run_link_prediction(bundle.network, bundle.config, task, options);
        records_out.close();

        std::vector<EvalRecord> all = std::move(prior);
        all.insert(all.end(), outcome.records.begin(), outcome.records.end());
        const auto cdf = compute_cdf(all);
        {
            std::ofstream cdf_out(out / "cdf.tsv", std::ios::binary);
            write_cdf_tsv(cdf_out, cdf);
        }

        Manifest manifest(name);
        common_manifest_fields(manifest, args.common);
        digest_config_inputs(manifest, bundle, args.common.config_path);
        manifest.merge(effective_params(bundle.network, bundle.config), "param.");
        manifest.set("task.left_out_type", std::size_t{args.left_out_type});
        manifest.set("task.anchor_type", std::size_t{args.anchor_type});
        manifest.set("task.min_degree", args.min_degree);
        manifest.set("task.seed_anchor", std::string(task.seed_anchor ? "true" : "false"));
        manifest.set("task.rebuild",
                     std::string(task.rebuild == RebuildStrategy::Full ? "full" : "patched"));
        manifest.set("result.records", all.size());
        manifest.set("result.skipped_anchors", outcome.skipped_anchors);
        manifest.set("result.cdf_area", cdf_area(cdf));
        digest_outputs(manifest, out, {"records.tsv", "cdf.tsv"});
        manifest.write(out / "manifest.yml");

        if (!args.common.quiet) {
            std::cout << name << ": " << all.size() << " records, cdf area "
                      << format_score(cdf_area(cdf)) << "\n";
        }
        return kExitOk;
    });
}

int write_bundle_command(const char* name, const CommonArgs& common,
                         const MultilayerNetwork& network, const RwrConfig& config,
                         const std::vector<std::string>& seed_names,
                         const std::function<void(Manifest&)>& extra) {
    const fs::path out = prepare_out_dir(common);
    SynthBundle bundle;
    bundle.network = network;
    bundle.config = config;
    bundle.seeds = seed_names;
    const auto written = write_bundle(bundle, out);

    Manifest manifest(name);
    common_manifest_fields(manifest, common);
    manifest.merge(effective_params(network, config), "param.");
    extra(manifest);
    std::vector<std::string> names;
    for (const fs::path& p : written) {
        names.push_back(p.filename().string());
    }
    digest_outputs(manifest, out, names);
    manifest.write(out / "manifest.yml");
    return kExitOk;
}

std::vector<std::string> bundle_seed_names(const Bundle& bundle) {
    if (const auto declared = seeds_path(bundle.doc, bundle.base_dir)) {
        return load_seed_names(*declared);
    }
    return {};
}

} // namespace

int cmd_validate(const CommonArgs& args) {
    return run_guarded([&]() {
        const Bundle bundle = load_bundle(args.config_path);
        const fs::path out = prepare_out_dir(args);
        const ValidationReport report = validate(bundle.network);
        {
            std::ofstream report_out(out / "validation.txt", std::ios::binary);
            report_out << report.to_text();
        }
        Manifest manifest("validate");
        common_manifest_fields(manifest, args);
        digest_config_inputs(manifest, bundle, args.config_path);
        manifest.set("result.valid", std::string(report.valid() ? "true" : "false"));
        manifest.set("result.violations", report.violations.size());
        manifest.set("result.warnings", report.warnings.size());
        digest_outputs(manifest, out, {"validation.txt"});
        manifest.write(out / "manifest.yml");

        if (!args.quiet) {
            std::cout << report.to_text();
        }
        return report.valid() ? kExitOk : kExitConfig;
    });
}

int cmd_rank(const RankArgs& args) {
    return run_guarded([&]() {
        const Bundle bundle = load_bundle(args.common.config_path);
        const fs::path out = prepare_out_dir(args.common);

        fs::path seeds_file;
        const SeedSet seeds = seeds_for(bundle, args.seeds_path, &seeds_file);

        const TransitionMatrix transition = normalize(bundle.network, bundle.config);
        const RestartVector p0 =
            build_restart(bundle.network, bundle.config, seeds, transition.layout);
        const ScoreResult result =
            solve(transition, p0, bundle.config.r, args.epsilon, args.max_iter);

        std::vector<std::string> outputs;
        for (std::size_t k = 0; k < bundle.network.multiplex_count(); ++k) {
            std::set<NodeId> exclude;
            if (args.exclude_seeds && k < seeds.per_multiplex.size()) {
                exclude.insert(seeds.per_multiplex[k].begin(), seeds.per_multiplex[k].end());
            }
            const auto ranking = rank_nodes(bundle.network, result, k, exclude);
            const std::string file = "ranking_" + std::to_string(k) + ".tsv";
            std::ofstream ranking_out(out / file, std::ios::binary);
            write_ranking_tsv(ranking_out, ranking);
            outputs.push_back(file);
        }
        if (args.subnetwork_k > 0) {
            const auto edges =
                extract_subnetwork(bundle.network, result, seeds, args.subnetwork_k);
            std::ofstream sub_out(out / "subnetwork.tsv", std::ios::binary);
            write_subnetwork_tsv(sub_out, edges);
            outputs.push_back("subnetwork.tsv");
        }
        if (args.dump_transition) {
            std::ofstream dump_out(out / "transition.tsv", std::ios::binary);
            dump_transition_tsv(dump_out, transition);
            outputs.push_back("transition.tsv");
        }

        Manifest manifest("rank");
        common_manifest_fields(manifest, args.common);
        digest_config_inputs(manifest, bundle, args.common.config_path);
        manifest.set_input("seeds", seeds_file);
        manifest.merge(effective_params(bundle.network, bundle.config), "param.");
        manifest.set("param.epsilon", args.epsilon);
        manifest.set("param.max_iter", args.max_iter);
        manifest.set("param.exclude_seeds", std::string(args.exclude_seeds ? "true" : "false"));
        manifest.set("result.iterations", result.iterations);
        manifest.set("result.residual", result.residual);
        manifest.set("result.converged", std::string(result.converged ? "true" : "false"));
        digest_outputs(manifest, out, outputs);
        manifest.write(out / "manifest.yml");

        if (!args.common.quiet) {
            std::cout << "rank: " << (result.converged ? "converged" : "NOT converged") << " in "
                      << result.iterations << " iterations (residual "
                      << format_score(result.residual) << ")\n";
        }
        return result.converged ? kExitOk : kExitNoConvergence;
    });
}

int cmd_loocv(const EvalArgs& args) { return run_eval(args, EvalProtocol::Loocv, "loocv"); }

int cmd_linkpred(const EvalArgs& args) {
    return run_eval(args, EvalProtocol::LinkPrediction, "linkpred");
}

int cmd_augment(const AugmentArgs& args) {
    return run_guarded([&]() {
        const Bundle bundle = load_bundle(args.common.config_path);
        const MultilayerNetwork augmented =
            augment_transit(bundle.network, args.via, args.left_out_type, args.anchor_type,
                            args.transit_count, args.common.rng_seed, args.transit_self_loops);
        // lambda defaults may change when the augmentation creates new
        // bipartite pairs; recompute unless the config pinned lambda.
        RwrConfig config = bundle.config;
        if (!bundle.doc.has("lambda")) {
            config = default_rwr_config(augmented);
            config.r = bundle.config.r;
            config.eta = bundle.config.eta;
        }
        return write_bundle_command("augment", args.common, augmented, config,
                                    bundle_seed_names(bundle), [&](Manifest& manifest) {
                                        digest_config_inputs(manifest, bundle,
                                                             args.common.config_path);
                                        manifest.set("task.via", std::size_t{args.via});
                                        manifest.set("task.transit_count", args.transit_count);
                                    });
    });
}

int cmd_randomize(const RandomizeArgs& args) {
    return run_guarded([&]() {
        const Bundle bundle = load_bundle(args.common.config_path);
        const MultilayerNetwork randomized =
            randomize_bipartite(bundle.network, args.source_type, args.target_type,
                                args.fraction, args.common.rng_seed);
        return write_bundle_command("randomize", args.common, randomized, bundle.config,
                                    bundle_seed_names(bundle), [&](Manifest& manifest) {
                                        digest_config_inputs(manifest, bundle,
                                                             args.common.config_path);
                                        manifest.set("task.fraction", args.fraction);
                                    });
    });
}

int cmd_explore(const ExploreArgs& args) {
    return run_guarded([&]() {
        const Bundle bundle = load_bundle(args.common.config_path);
        const fs::path out = prepare_out_dir(args.common);

        fs::path seeds_file;
        const SeedSet seeds = seeds_for(bundle, args.seeds_path, &seeds_file);
        const ParameterGrid grid =
            parse_grid(KeyValue::parse_file(args.grid_path), bundle.network, bundle.config);

        GridOptions options;
        options.epsilon = args.epsilon;
        options.max_iter = args.max_iter;
        options.workers = effective_workers(args.common.workers);
        options.cache_dir = out / "scores";
        if (!args.common.quiet) {
            options.on_variant = [&](const std::string& name, std::size_t done,
                                     std::size_t total) {
                if (done % 10 == 0 || done == total) {
                    std::cout << "explore: " << done << "/" << total << " variants (" << name
                              << ")\n";
                }
            };
        }
        const GridResult scores = score_grid(bundle.network, grid, seeds, options);
        if (scores.names.empty()) {
            throw Error("explore: no variant converged");
        }

        std::vector<std::string> outputs;
        std::vector<Matrix> per_mux;
        std::vector<std::size_t> sizes;
        for (std::size_t k = 0; k < bundle.network.multiplex_count(); ++k) {
            per_mux.push_back(similarity_matrix(scores, k));
            sizes.push_back(bundle.network.multiplexes[k].node_count());
            const std::string file = "similarity_" + std::to_string(k) + ".tsv";
            std::ofstream sim_out(out / file, std::ios::binary);
            write_matrix_tsv(sim_out, scores.names, per_mux.back());
            outputs.push_back(file);
        }
        const Matrix cons = consensus(per_mux, sizes);
        {
            std::ofstream cons_out(out / "consensus.tsv", std::ios::binary);
            write_matrix_tsv(cons_out, scores.names, cons);
            outputs.push_back("consensus.tsv");
        }

        const ExplorationReport report =
            project_and_cluster(cons, std::min(args.k, scores.names.size()), args.common.rng_seed);
        {
            std::ofstream pca_out(out / "pca.tsv", std::ios::binary);
            write_pca_tsv(pca_out, scores.names, report);
            outputs.push_back("pca.tsv");
        }
        {
            std::ofstream sil_out(out / "silhouette.tsv", std::ios::binary);
            sil_out << "k\tscore\n";
            for (const auto& [k, score] : report.silhouettes) {
                sil_out << k << '\t' << format_score(score) << '\n';
            }
            outputs.push_back("silhouette.tsv");
        }

        // top-k overlap: all variants plus each cluster
        {
            std::ofstream overlap_out(out / "topk_overlap.tsv", std::ios::binary);
            overlap_out << "scope\tmultiplex\tnode\tcount\tin_all\n";
            const auto emit = [&](const std::string& scope,
                                  const std::vector<std::size_t>& subset) {
                for (std::size_t k = 0; k < bundle.network.multiplex_count(); ++k) {
                    for (const OverlapEntry& e :
                         topk_overlap(bundle.network, scores, subset, args.top, k)) {
                        overlap_out << scope << '\t' << k << '\t' << e.node << '\t' << e.count
                                    << '\t' << (e.in_all ? 1 : 0) << '\n';
                    }
                }
            };
            std::vector<std::size_t> all(scores.names.size());
            for (std::size_t i = 0; i < all.size(); ++i) {
                all[i] = i;
            }
            emit("all", all);
            const std::size_t n_clusters =
                *std::max_element(report.labels.begin(), report.labels.end()) + 1;
            for (std::size_t c = 0; c < n_clusters; ++c) {
                std::vector<std::size_t> subset;
                for (std::size_t i = 0; i < report.labels.size(); ++i) {
                    if (report.labels[i] == c) {
                        subset.push_back(i);
                    }
                }
                if (!subset.empty()) {
                    emit("cluster_" + std::to_string(c), subset);
                }
            }
            outputs.push_back("topk_overlap.tsv");
        }

        Manifest manifest("explore");
        common_manifest_fields(manifest, args.common);
        digest_config_inputs(manifest, bundle, args.common.config_path);
        manifest.set_input("seeds", seeds_file);
        manifest.set_input("grid", args.grid_path);
        manifest.merge(effective_params(bundle.network, bundle.config), "param.");
        manifest.set("grid.variants", grid.variants.size());
        manifest.set("grid.converged", scores.names.size());
        manifest.set("grid.failed", scores.failed.size());
        for (std::size_t i = 0; i < scores.failed.size(); ++i) {
            manifest.set("grid.failed." + std::to_string(i), scores.failed[i]);
        }
        manifest.set("pca.explained_variance_1", report.explained_variance[0]);
        manifest.set("pca.explained_variance_2", report.explained_variance[1]);
        manifest.set("kmeans.k", std::min(args.k, scores.names.size()));
        manifest.set("kmeans.inertia", report.inertia);
        digest_outputs(manifest, out, outputs);
        manifest.write(out / "manifest.yml");

        if (!args.common.quiet) {
            std::cout << "explore: " << scores.names.size() << " variants, "
                      << scores.failed.size() << " failed\n";
        }
        return kExitOk;
    });
}

int cmd_synth(const SynthArgs& args) {
    return run_guarded([&]() {
        SynthBundle bundle;
        if (args.kind == "planted") {
            PlantedNetworkSpec spec;
            spec.nodes_per_type = args.nodes;
            spec.communities = args.communities;
            spec.associations_per_anchor = args.associations;
            spec.carrier_coverage = args.carrier_coverage;
            bundle = generate_planted(spec, args.common.rng_seed);
        } else if (args.kind == "random") {
            RandomNetworkSpec spec;
            spec.layers_per_multiplex.assign(args.multiplexes, args.layers);
            spec.nodes_per_multiplex.assign(args.multiplexes, args.nodes);
            spec.edges_per_layer.assign(args.multiplexes, args.edges);
            spec.overlap = args.overlap;
            spec.directed = args.directed;
            spec.weighted = args.weighted;
            bundle = generate_random(spec, args.common.rng_seed);
        } else {
            throw ConfigError("synth kind must be planted or random");
        }
        return write_bundle_command("synth", args.common, bundle.network, bundle.config,
                                    bundle.seeds, [&](Manifest& manifest) {
                                        manifest.set("synth.kind", args.kind);
                                        manifest.set("synth.nodes", args.nodes);
                                    });
    });
}

} // namespace uniwalk::cli
