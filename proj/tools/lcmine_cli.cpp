#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "lcmine/error.hpp"
#include "lcmine/pipeline.hpp"
#include "lcmine/validation.hpp"

namespace {

using namespace lcmine;

struct CommonOpts {
    std::string input;
    std::uint64_t synth_seed = 0;
    bool use_synth = false;
    std::size_t synth_n = 3000;
    double synth_sigma = 0.3;
    std::vector<double> synth_means = {1.5, 3.0, 4.5};
    std::vector<double> synth_effects;
    std::vector<std::size_t> k_list = {2, 3};
    std::string metric = "classic";
    std::uint64_t seed = 0;
    std::string init = "random";
    std::size_t mtry = 4;
    std::size_t ntree = 500;
    double perplexity = 30.0;
    std::size_t tsne_iterations = 1000;
    bool no_tsne = false;
    std::string polarity = "low";
    std::string out = "out";
    bool figures = false;
    int threads = 0;
};

void add_dataset_options(CLI::App* cmd, CommonOpts& o, bool required) {
    auto* input = cmd->add_option("--input", o.input, "input CSV path");
    auto* synth = cmd->add_option("--synth-seed", o.synth_seed, "generate a synthetic dataset");
    input->excludes(synth);
    if (required) {
        // one of the two must be present; checked after parse
    }
    cmd->add_option("--synth-n", o.synth_n, "synthetic record count")->needs(synth);
    cmd->add_option("--synth-sigma", o.synth_sigma, "synthetic likert noise sigma")->needs(synth);
    cmd->add_option("--synth-means", o.synth_means,
                    "per-class likert means, 3 values")->needs(synth)->expected(3);
    cmd->add_option("--synth-effects", o.synth_effects,
                    "attribute effect strengths, 12 values")->needs(synth)->expected(12);
}

GeneratorSpec make_spec(const CommonOpts& o) {
    GeneratorSpec spec;
    spec.seed = o.synth_seed;
    spec.n = o.synth_n;
    spec.noise_sigma = o.synth_sigma;
    for (std::size_t c = 0; c < 3; ++c) spec.class_item_means[c].fill(o.synth_means[c]);
    if (!o.synth_effects.empty()) {
        std::copy(o.synth_effects.begin(), o.synth_effects.end(),
                  spec.attribute_effects.begin());
    }
    return spec;
}

Dataset resolve_dataset(const CLI::App* cmd, const CommonOpts& o) {
    const bool has_input = cmd->count("--input") > 0;
    const bool has_synth = cmd->count("--synth-seed") > 0;
    if (has_input == has_synth) {
        throw ArgumentError("exactly one of --input / --synth-seed is required");
    }
    return has_input ? load_dataset(o.input) : generate_survey(make_spec(o));
}

MetricMode parse_metric(const std::string& metric) {
    if (metric == "classic") return MetricMode::classic_euclidean;
    if (metric == "composite") return MetricMode::composite_medoid;
    throw ArgumentError("unknown metric '" + metric + "' (expected classic|composite)");
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    (void)threads;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"Likert survey mining: hybrid-dissimilarity clustering, silhouette/t-SNE "
                 "validation, random-forest importance"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override");

    CommonOpts o;

    // generate: synthetic dataset to CSV
    auto* generate = app.add_subcommand("generate", "emit a seeded synthetic survey CSV");
    generate->add_option("--synth-seed,--seed", o.synth_seed, "generator seed");
    generate->add_option("--synth-n,--n", o.synth_n, "record count");
    generate->add_option("--synth-sigma,--sigma", o.synth_sigma, "likert noise sigma");
    generate->add_option("--synth-means", o.synth_means, "per-class likert means")->expected(3);
    generate->add_option("--synth-effects", o.synth_effects, "attribute effect strengths")
        ->expected(12);
    std::string generate_out = "survey.csv";
    generate->add_option("--out", generate_out, "output CSV path");

    // cluster: fit K-means, write model JSON
    auto* cluster = app.add_subcommand("cluster", "fit K-means and write the model");
    add_dataset_options(cluster, o, true);
    std::size_t cluster_k = 3;
    cluster->add_option("--k", cluster_k, "cluster count");
    cluster->add_option("--metric", o.metric, "classic|composite");
    cluster->add_option("--seed", o.seed, "clustering seed");
    cluster->add_option("--init", o.init, "random|kmeanspp");
    cluster->add_option("--polarity", o.polarity, "low|high");
    cluster->add_option("--out", o.out, "output directory");
    cluster->add_option("--threads", o.threads, "worker cap");

    // validate: silhouette over candidate ks, optional t-SNE export
    auto* validate = app.add_subcommand("validate", "silhouette k selection and t-SNE check");
    add_dataset_options(validate, o, true);
    validate->add_option("--k-list", o.k_list, "candidate cluster counts")->delimiter(',');
    validate->add_option("--metric", o.metric, "classic|composite");
    validate->add_option("--seed", o.seed, "clustering seed");
    validate->add_option("--init", o.init, "random|kmeanspp");
    validate->add_option("--perplexity", o.perplexity, "t-SNE perplexity");
    validate->add_option("--tsne-iterations", o.tsne_iterations, "t-SNE iterations");
    validate->add_flag("--no-tsne", o.no_tsne, "skip the embedding");
    validate->add_option("--out", o.out, "output directory");
    validate->add_option("--threads", o.threads, "worker cap");

    // forest: train on a serialized cluster model
    auto* forest = app.add_subcommand("forest", "random forest on cluster labels");
    add_dataset_options(forest, o, true);
    std::string model_path;
    forest->add_option("--model", model_path, "cluster model JSON from the cluster subcommand")
        ->required();
    forest->add_option("--mtry", o.mtry, "features sampled per split");
    forest->add_option("--ntree", o.ntree, "tree count");
    forest->add_option("--seed", o.seed, "forest seed");
    forest->add_option("--out", o.out, "output directory");
    forest->add_option("--threads", o.threads, "worker cap");

    // pipeline: everything
    auto* pipeline = app.add_subcommand("pipeline", "full generate/ingest-to-report workflow");
    add_dataset_options(pipeline, o, true);
    pipeline->add_option("--k-list", o.k_list, "candidate cluster counts")->delimiter(',');
    pipeline->add_option("--metric", o.metric, "classic|composite");
    pipeline->add_option("--seed", o.seed, "clustering + forest seed");
    pipeline->add_option("--init", o.init, "random|kmeanspp");
    pipeline->add_option("--mtry", o.mtry, "features sampled per split");
    pipeline->add_option("--ntree", o.ntree, "tree count");
    pipeline->add_option("--perplexity", o.perplexity, "t-SNE perplexity");
    pipeline->add_option("--tsne-iterations", o.tsne_iterations, "t-SNE iterations");
    pipeline->add_flag("--no-tsne", o.no_tsne, "skip the embedding");
    pipeline->add_option("--polarity", o.polarity, "low|high");
    pipeline->add_option("--out", o.out, "output directory");
    pipeline->add_flag("--figures", o.figures, "emit SVG figures and data sidecars");
    pipeline->add_option("--threads", o.threads, "worker cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // --help and friends exit 0; anything else is a config problem
        return code == 0 ? 0 : 2;
    }
    apply_threads(o.threads);

    const Polarity polarity =
        o.polarity == "high" ? Polarity::high_is_strong : Polarity::low_is_strong;
    const InitMethod init =
        o.init == "kmeanspp" ? InitMethod::kmeans_pp : InitMethod::random_points;

    if (generate->parsed()) {
        const Dataset ds = generate_survey(make_spec(o));
        save_dataset(ds, generate_out);
        std::cout << "wrote " << ds.size() << " records to " << generate_out << "\n";
        return 0;
    }

    if (cluster->parsed()) {
        const Dataset ds = resolve_dataset(cluster, o);
        ClusterConfig cc{cluster_k, parse_metric(o.metric), o.seed, 300, init};
        ClusterModel model = label_clusters(kmeans_fit(ds, cc), polarity);
        std::filesystem::create_directories(o.out);
        write_file(o.out + "/model.json", cluster_model_to_json(model));
        std::cout << "k=" << cc.k << " objective=" << model.objective
                  << " iterations=" << model.iterations
                  << (model.converged ? "" : " (not converged)") << "\n";
        return 0;
    }

    if (validate->parsed()) {
        const Dataset ds = resolve_dataset(validate, o);
        ClusterConfig cc{3, parse_metric(o.metric), o.seed, 300, init};
        const KSelection sel = select_k(ds, o.k_list, cc);
        std::filesystem::create_directories(o.out);
        for (const auto& [k, sil] : sel.silhouettes) {
            std::cout << "k=" << k << " mean silhouette=" << sil.overall_mean << "\n";
        }
        std::cout << "best k=" << sel.best_k << "\n";
        if (!o.no_tsne) {
            TsneConfig tc;
            tc.perplexity = o.perplexity;
            tc.iterations = o.tsne_iterations;
            tc.seed = o.seed;
            const DissimilarityMatrix dist = dissimilarity_matrix(ds, MetricTag::euclidean);
            const EmbeddingResult emb = tsne_run(dist, tc);
            write_embedding_csv(emb, sel.models.at(sel.best_k), o.out + "/embedding.csv");
            std::cout << "t-SNE final KL=" << emb.final_kl << "\n";
        }
        return 0;
    }

    if (forest->parsed()) {
        const Dataset ds = resolve_dataset(forest, o);
        std::ifstream in(model_path);
        if (!in) throw DataError("cannot open model file: " + model_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const ClusterModel model = cluster_model_from_json(text);
        if (model.assignments.size() != ds.size()) {
            throw DataError("model assignments do not match dataset size");
        }
        ForestConfig fc;
        fc.mtry = o.mtry;
        fc.ntree = o.ntree;
        fc.seed = o.seed;
        const FeatureMatrix X = profile_features(ds);
        const std::vector<int> target = cluster_target_labels(model);
        const ForestModel fm = train_forest(X, target, fc);
        const ImportanceReport imp = permutation_importance(fm, X, target, 5, o.seed);
        std::filesystem::create_directories(o.out);
        {
            std::ostringstream csv;
            csv << "factor,MDecA\n";
            for (std::size_t f : imp.ranking) {
                csv << profile_field_infos()[f].name << "," << imp.mdeca[f] << "\n";
            }
            write_file(o.out + "/importance.csv", csv.str());
        }
        std::cout << "oob_error=" << fm.oob_error << "\n";
        for (const auto& [code, err] : fm.per_class_error) {
            std::cout << "class " << code << " error=" << err << "\n";
        }
        std::cout << "factor,MDecA\n";
        for (std::size_t f : imp.ranking) {
            std::cout << profile_field_infos()[f].name << "," << imp.mdeca[f] << "\n";
        }
        return 0;
    }

    // pipeline
    PipelineConfig pc;
    if (pipeline->count("--input") > 0) {
        pc.input_path = o.input;
    } else if (pipeline->count("--synth-seed") > 0) {
        pc.synth = make_spec(o);
    }
    pc.cluster = ClusterConfig{3, parse_metric(o.metric), o.seed, 300, init};
    pc.k_list = o.k_list;
    pc.forest.mtry = o.mtry;
    pc.forest.ntree = o.ntree;
    pc.forest.seed = o.seed;
    pc.tsne_enabled = !o.no_tsne;
    pc.tsne.perplexity = o.perplexity;
    pc.tsne.iterations = o.tsne_iterations;
    pc.tsne.seed = o.seed;
    pc.polarity = polarity;
    pc.out_dir = o.out;
    pc.emit_figures = o.figures;
    pc.threads = o.threads;

    const PipelineReport report = run_pipeline(pc);
    std::cout << "chosen k=" << report.chosen_k << ", report written to " << pc.out_dir
              << "/report.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const lcmine::ArgumentError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lcmine::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const lcmine::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
