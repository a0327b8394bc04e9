#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcmine/clustering.hpp"
#include "lcmine/forest.hpp"
#include "lcmine/tsne.hpp"
#include "lcmine/validation.hpp"

namespace lcmine {

inline constexpr const char* kToolVersion = "0.1.0";

struct PlantedRecovery {
    double ari = 0.0;
    std::vector<std::string> planted_order;   // features with planted effects, strongest first
    std::vector<std::string> recovered_order; // same features by recovered MDecA
    bool order_matches = false;
};

struct PipelineReport {
    std::string config_json;                  // fully resolved config, serialized
    std::size_t n = 0;
    std::optional<double> cronbach_alpha;     // unset when the statistic is undefined
    bool alpha_pass = false;                  // alpha >= 0.7 gate, reported non-blocking
    std::map<std::size_t, double> silhouette_means;
    std::size_t chosen_k = 0;
    ClusterModel model;                       // chosen-k fit, labeled when k in {2,3}
    SilhouetteResult chosen_silhouette;
    std::optional<EmbeddingResult> embedding;
    std::optional<double> forest_oob_error;
    std::map<int, double> forest_per_class_error;
    std::vector<double> importance_mdeca;     // per profile field
    std::vector<std::size_t> importance_ranking;
    std::optional<PlantedRecovery> planted;
    std::vector<std::string> warnings;
    // career category (1..14) x cluster counts, for the occupation histogram
    std::vector<std::vector<std::size_t>> career_by_cluster;
};

/// report.json content with stable key order.
std::string report_to_json(const PipelineReport& report);

std::string cluster_model_to_json(const ClusterModel& model);
ClusterModel cluster_model_from_json(const std::string& text);

// Writes report.json; with emit_figures also the SVG figures and their
// plain-text data sidecars.
void render_report(const PipelineReport& report, const std::string& out_dir, bool emit_figures);

void write_embedding_csv(const EmbeddingResult& embedding, const ClusterModel& model,
                         const std::string& path);

} // namespace lcmine
