#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "lcmine/clustering.hpp"
#include "lcmine/similarity.hpp"

namespace lcmine {

struct SilhouetteResult {
    std::size_t k = 0;
    std::vector<double> per_sample;      // each in [-1, 1]
    std::vector<double> per_cluster_mean;
    double overall_mean = 0.0;
};

// s(i) = (b - a) / max(a, b) from a precomputed dissimilarity matrix;
// singleton clusters score 0 by convention.
SilhouetteResult silhouette(const DissimilarityMatrix& matrix,
                            const std::vector<std::size_t>& assignments,
                            std::size_t k);

/// Single-threaded reference; kept for tests and benchmarks.
SilhouetteResult silhouette_serial(const DissimilarityMatrix& matrix,
                                   const std::vector<std::size_t>& assignments,
                                   std::size_t k);

struct KSelection {
    std::size_t best_k = 0;
    std::map<std::size_t, SilhouetteResult> silhouettes;
    std::map<std::size_t, ClusterModel> models;
};

// Fits K-means for each candidate k under the same config seed, scores each
// fit with the silhouette on the config's own metric, and keeps the k with
// the highest overall mean (ties to the smaller k).
KSelection select_k(const Dataset& dataset, const std::vector<std::size_t>& candidate_ks,
                    const ClusterConfig& config);

/// Chance-corrected partition agreement; 1 = identical clusterings.
double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

} // namespace lcmine
