#include "lcmine/pipeline.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "lcmine/error.hpp"
#include "lcmine/validation.hpp"

namespace lcmine {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json generator_spec_json(const GeneratorSpec& spec) {
    ordered_json j;
    j["n"] = spec.n;
    j["class_proportions"] = spec.class_proportions;
    ordered_json means = ordered_json::array();
    for (const auto& row : spec.class_item_means) {
        means.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["class_item_means"] = means;
    j["noise_sigma"] = spec.noise_sigma;
    j["attribute_effects"] = spec.attribute_effects;
    j["seed"] = spec.seed;
    return j;
}

} // namespace

std::string pipeline_config_to_json(const PipelineConfig& config) {
    ordered_json j;
    if (config.input_path) {
        j["input"] = *config.input_path;
    } else if (config.synth) {
        j["synth"] = generator_spec_json(*config.synth);
    }
    j["k_list"] = config.k_list;
    j["metric"] = metric_mode_name(config.cluster.metric_mode);
    j["cluster_seed"] = config.cluster.seed;
    j["max_iter"] = config.cluster.max_iter;
    j["init"] = config.cluster.init == InitMethod::kmeans_pp ? "kmeans_pp" : "random_points";
    j["forest_seed"] = config.forest.seed;
    j["mtry"] = config.forest.mtry;
    j["ntree"] = config.forest.ntree;
    j["min_leaf"] = config.forest.min_leaf;
    j["importance_repeats"] = config.importance_repeats;
    j["tsne_enabled"] = config.tsne_enabled;
    j["perplexity"] = config.tsne.perplexity;
    j["tsne_iterations"] = config.tsne.iterations;
    j["tsne_learning_rate"] = config.tsne.learning_rate;
    j["tsne_seed"] = config.tsne.seed;
    j["polarity"] = config.polarity == Polarity::low_is_strong ? "low" : "high";
    j["out"] = config.out_dir;
    j["figures"] = config.emit_figures;
    return j.dump();
}

FeatureMatrix profile_features(const Dataset& dataset) {
    FeatureMatrix X(dataset.size(), std::vector<int>(kProfileFields));
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (std::size_t f = 0; f < kProfileFields; ++f) {
            X[i][f] = dataset.records[i].profile.field(f);
        }
    }
    return X;
}

std::vector<int> cluster_target_labels(const ClusterModel& model) {
    std::vector<int> out(model.assignments.size());
    for (std::size_t i = 0; i < model.assignments.size(); ++i) {
        const std::size_t c = model.assignments[i];
        out[i] = model.labels_valid ? cluster_label_code(model.labels[c])
                                    : static_cast<int>(c) + 1;
    }
    return out;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
    if (config.input_path.has_value() == config.synth.has_value()) {
        throw ArgumentError("pipeline: exactly one of input path / generator spec required");
    }
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#endif

    PipelineReport report;
    report.config_json = pipeline_config_to_json(config);

    // stage: ingest / generate
    const Dataset dataset =
        config.input_path ? load_dataset(*config.input_path) : generate_survey(*config.synth);
    report.n = dataset.size();

    // stage: consistency
    try {
        const double alpha = cronbach_alpha_cause_items(dataset);
        report.cronbach_alpha = alpha;
        report.alpha_pass = alpha >= 0.7;
        if (!report.alpha_pass) {
            report.warnings.push_back("consistency: cronbach alpha below 0.7 gate");
        }
    } catch (const NumericalError& e) {
        report.warnings.push_back(std::string("consistency: ") + e.what());
    } catch (const ArgumentError& e) {
        // too few records/items for the statistic; the gate is advisory only
        report.warnings.push_back(std::string("consistency: ") + e.what());
    }

    // stage: clustering + k selection
    KSelection sel = select_k(dataset, config.k_list, config.cluster);
    report.chosen_k = sel.best_k;
    for (const auto& [k, sil] : sel.silhouettes) {
        report.silhouette_means[k] = sil.overall_mean;
    }
    report.chosen_silhouette = sel.silhouettes.at(sel.best_k);
    report.model = label_clusters(std::move(sel.models.at(sel.best_k)), config.polarity);
    if (!report.model.labels_valid) {
        report.warnings.push_back("labeling skipped: k not in {2,3}");
    }

    // stage: t-SNE verification
    if (config.tsne_enabled) {
        const DissimilarityMatrix dist = dissimilarity_matrix(dataset, MetricTag::euclidean);
        report.embedding = tsne_run(dist, config.tsne);
    }

    // stage: forest on the cluster labels
    const FeatureMatrix X = profile_features(dataset);
    const std::vector<int> target = cluster_target_labels(report.model);
    const bool single_class =
        std::all_of(target.begin(), target.end(), [&](int t) { return t == target.front(); });
    if (single_class) {
        report.warnings.push_back("forest skipped: single-cluster target");
    } else {
        const ForestModel forest = train_forest(X, target, config.forest);
        report.forest_oob_error = forest.oob_error;
        report.forest_per_class_error = forest.per_class_error;
        const ImportanceReport imp = permutation_importance(
            forest, X, target, config.importance_repeats, config.forest.seed);
        report.importance_mdeca = imp.mdeca;
        report.importance_ranking = imp.ranking;
    }

    // stage: planted-recovery metrics
    if (dataset.has_planted_labels()) {
        PlantedRecovery rec;
        std::vector<std::size_t> planted(dataset.size());
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            planted[i] = static_cast<std::size_t>(*dataset.records[i].planted_label - 1);
        }
        rec.ari = adjusted_rand_index(planted, report.model.assignments);
        if (config.synth && !report.importance_ranking.empty()) {
            // features with planted effects, strongest first
            std::vector<std::size_t> planted_feats;
            for (std::size_t f = 0; f < kProfileFields; ++f) {
                if (config.synth->attribute_effects[f] > 1e-12) planted_feats.push_back(f);
            }
            std::stable_sort(planted_feats.begin(), planted_feats.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return config.synth->attribute_effects[a] >
                                        config.synth->attribute_effects[b];
                             });
            if (!planted_feats.empty()) {
                for (std::size_t f : planted_feats) {
                    rec.planted_order.push_back(profile_field_infos()[f].name);
                }
                for (std::size_t r = 0;
                     r < planted_feats.size() && r < report.importance_ranking.size(); ++r) {
                    rec.recovered_order.push_back(
                        profile_field_infos()[report.importance_ranking[r]].name);
                }
                rec.order_matches = rec.planted_order == rec.recovered_order;
            }
        }
        report.planted = rec;
    }

    // stage: occupation histogram data
    {
        const auto& career_info = profile_field_infos()[4];
        report.career_by_cluster.assign(
            static_cast<std::size_t>(career_info.hi),
            std::vector<std::size_t>(report.model.config.k, 0));
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            const int career = dataset.records[i].profile.career;
            ++report.career_by_cluster[static_cast<std::size_t>(career - 1)]
                                      [report.model.assignments[i]];
        }
    }

    render_report(report, config.out_dir, config.emit_figures);
    return report;
}

} // namespace lcmine
