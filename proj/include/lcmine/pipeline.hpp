#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcmine/clustering.hpp"
#include "lcmine/forest.hpp"
#include "lcmine/report.hpp"
#include "lcmine/synth.hpp"
#include "lcmine/tsne.hpp"

namespace lcmine {

struct PipelineConfig {
    std::optional<std::string> input_path;
    std::optional<GeneratorSpec> synth; // exactly one of input_path / synth
    ClusterConfig cluster;              // k is taken from k_list
    std::vector<std::size_t> k_list = {2, 3};
    ForestConfig forest;
    std::size_t importance_repeats = 5;
    bool tsne_enabled = true;
    TsneConfig tsne;
    Polarity polarity = Polarity::low_is_strong;
    std::string out_dir = "out";
    bool emit_figures = false;
    int threads = 0; // 0 = runtime default
};

std::string pipeline_config_to_json(const PipelineConfig& config);

// Full workflow: ingest/generate, consistency check, k selection, semantic
// labeling, t-SNE verification, forest training on the cluster labels,
// permutation importance, report rendering.
PipelineReport run_pipeline(const PipelineConfig& config);

/// Profile fields of a dataset as the forest's n x 12 feature matrix.
FeatureMatrix profile_features(const Dataset& dataset);

/// Forest target: semantic label codes when available, else cluster index + 1.
std::vector<int> cluster_target_labels(const ClusterModel& model);

} // namespace lcmine
