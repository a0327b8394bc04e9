#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcmine/similarity.hpp"
#include "lcmine/survey.hpp"

namespace lcmine {

enum class MetricMode { classic_euclidean, composite_medoid };
enum class InitMethod { random_points, kmeans_pp };
enum class Polarity { low_is_strong, high_is_strong };
enum class ClusterLabel { Strong, Neutral, NotStrong };

std::string metric_mode_name(MetricMode mode);
std::string cluster_label_name(ClusterLabel label);

/// Intention coding: 1 strong, 2 neutral, 3 not strong.
int cluster_label_code(ClusterLabel label);

using Centroid = std::array<double, kLikertItems>;

struct ClusterConfig {
    std::size_t k = 3;
    MetricMode metric_mode = MetricMode::classic_euclidean;
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    InitMethod init = InitMethod::random_points;
};

struct ClusterModel {
    ClusterConfig config;
    std::vector<Centroid> centroids;          // both modes; medoid mode copies the medoid record
    std::vector<std::size_t> medoid_indices;  // medoid mode only
    std::vector<std::size_t> assignments;
    double objective = 0.0;
    std::vector<double> objective_history;    // one entry per iteration
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<ClusterLabel> labels;         // per cluster, set by label_clusters
    bool labels_valid = false;

    std::vector<std::size_t> cluster_sizes() const;
};

// Eq-style assignment: argmin over centroids of squared Euclidean distance,
// ties to the lowest cluster index.
std::size_t assign_point(const LikertVector& point, const std::vector<Centroid>& centroids);

/// Composite-metric assignment against medoid records.
std::size_t assign_point_medoid(const LikertVector& point,
                                const std::vector<LikertVector>& medoids);

/// Arithmetic-mean centroids; every cluster index 0..k-1 must be non-empty.
std::vector<Centroid> mean_centroids(const Dataset& dataset,
                                     const std::vector<std::size_t>& assignments,
                                     std::size_t k);

// Medoid of one cluster under the composite metric: member index minimizing
// summed dissimilarity to its co-members, ties to the lowest record index.
std::size_t medoid_of(const DissimilarityMatrix& matrix,
                      const std::vector<std::size_t>& members);

// Lloyd iteration until assignments are stable or max_iter is hit. The
// composite matrix is computed internally for medoid mode unless supplied.
ClusterModel kmeans_fit(const Dataset& dataset, const ClusterConfig& config,
                        const DissimilarityMatrix* composite_matrix = nullptr);

// Orders clusters by centroid mean score and assigns semantic labels along
// that order. k=3 gives Strong/Neutral/NotStrong, k=2 Strong/NotStrong;
// other k leaves labels_valid false.
ClusterModel label_clusters(ClusterModel model, Polarity polarity = Polarity::low_is_strong);

} // namespace lcmine
