#include "lcmine/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lcmine/error.hpp"
#include "lcmine/rng.hpp"

namespace lcmine {

std::string metric_mode_name(MetricMode mode) {
    return mode == MetricMode::classic_euclidean ? "classic_euclidean" : "composite_medoid";
}

std::string cluster_label_name(ClusterLabel label) {
    switch (label) {
        case ClusterLabel::Strong: return "Strong";
        case ClusterLabel::Neutral: return "Neutral";
        case ClusterLabel::NotStrong: return "NotStrong";
    }
    return "?";
}

int cluster_label_code(ClusterLabel label) {
    switch (label) {
        case ClusterLabel::Strong: return 1;
        case ClusterLabel::Neutral: return 2;
        case ClusterLabel::NotStrong: return 3;
    }
    return 0;
}

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
    std::vector<std::size_t> sizes(config.k, 0);
    for (std::size_t c : assignments) ++sizes[c];
    return sizes;
}

namespace {

double sq_euclidean(const LikertVector& p, const Centroid& c) {
    double ss = 0.0;
    for (std::size_t i = 0; i < kLikertItems; ++i) {
        const double d = static_cast<double>(p[i]) - c[i];
        ss += d * d;
    }
    return ss;
}

Centroid to_centroid(const LikertVector& v) {
    Centroid c;
    for (std::size_t i = 0; i < kLikertItems; ++i) c[i] = static_cast<double>(v[i]);
    return c;
}

// k distinct record indices via the seeded stream
std::vector<std::size_t> init_random_points(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
        picked.push_back(pool[i]);
    }
    return picked;
}

// k-means++ seeding with D^2 sampling under the mode's dissimilarity
std::vector<std::size_t> init_kmeans_pp(const Dataset& dataset, std::size_t k,
                                        MetricMode mode,
                                        const DissimilarityMatrix* matrix, Rng& rng) {
    const std::size_t n = dataset.size();
    std::vector<std::size_t> centers;
    centers.push_back(rng.next_index(n));
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    auto dist = [&](std::size_t i, std::size_t c) {
        if (mode == MetricMode::composite_medoid) return matrix->at(i, c);
        return sq_euclidean(dataset.records[i].likert, to_centroid(dataset.records[c].likert));
    };
    while (centers.size() < k) {
        const std::size_t last = centers.back();
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            best[i] = std::min(best[i], dist(i, last));
            total += best[i];
        }
        std::size_t next = 0;
        if (total <= 0.0) {
            next = rng.next_index(n); // all points coincide with a center
        } else {
            const double target = rng.next_double() * total;
            double acc = 0.0;
            next = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += best[i];
                if (acc >= target) { next = i; break; }
            }
        }
        centers.push_back(next);
    }
    return centers;
}

} // namespace

std::size_t assign_point(const LikertVector& point, const std::vector<Centroid>& centroids) {
    if (centroids.empty()) throw ArgumentError("assign_point: no centroids");
    std::size_t best = 0;
    double best_d = sq_euclidean(point, centroids[0]);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
        const double d = sq_euclidean(point, centroids[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

std::size_t assign_point_medoid(const LikertVector& point,
                                const std::vector<LikertVector>& medoids) {
    if (medoids.empty()) throw ArgumentError("assign_point_medoid: no medoids");
    std::size_t best = 0;
    double best_d = combined_dissimilarity(point, medoids[0]);
    for (std::size_t j = 1; j < medoids.size(); ++j) {
        const double d = combined_dissimilarity(point, medoids[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

std::vector<Centroid> mean_centroids(const Dataset& dataset,
                                     const std::vector<std::size_t>& assignments,
                                     std::size_t k) {
    std::vector<Centroid> out(k);
    std::vector<std::size_t> counts(k, 0);
    for (auto& c : out) c.fill(0.0);
    // index-ordered accumulation keeps the result thread-count independent
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const std::size_t c = assignments[i];
        if (c >= k) throw ArgumentError("mean_centroids: assignment out of range");
        for (std::size_t d = 0; d < kLikertItems; ++d) {
            out[c][d] += static_cast<double>(dataset.records[i].likert[d]);
        }
        ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) throw ArgumentError("mean_centroids: empty cluster " + std::to_string(c));
        for (std::size_t d = 0; d < kLikertItems; ++d) {
            out[c][d] /= static_cast<double>(counts[c]);
        }
    }
    return out;
}

std::size_t medoid_of(const DissimilarityMatrix& matrix,
                      const std::vector<std::size_t>& members) {
    if (members.empty()) throw ArgumentError("medoid_of: empty cluster");
    std::size_t best = members[0];
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t cand : members) {
        double sum = 0.0;
        for (std::size_t other : members) sum += matrix.at(cand, other);
        if (sum < best_sum || (sum == best_sum && cand < best)) {
            best_sum = sum;
            best = cand;
        }
    }
    return best;
}

ClusterModel kmeans_fit(const Dataset& dataset, const ClusterConfig& config,
                        const DissimilarityMatrix* composite_matrix) {
    const std::size_t n = dataset.size();
    const std::size_t k = config.k;
    if (k < 1) throw ArgumentError("kmeans_fit: k must be >= 1");
    if (k > n) {
        throw ArgumentError("kmeans_fit: k > n (" + std::to_string(k) + " > " +
                            std::to_string(n) + ")");
    }
    const bool medoid_mode = config.metric_mode == MetricMode::composite_medoid;

    DissimilarityMatrix local;
    const DissimilarityMatrix* matrix = composite_matrix;
    if (medoid_mode && matrix == nullptr) {
        local = dissimilarity_matrix(dataset, MetricTag::composite);
        matrix = &local;
    }

    Rng rng(config.seed);
    std::vector<std::size_t> center_ids =
        config.init == InitMethod::kmeans_pp
            ? init_kmeans_pp(dataset, k, config.metric_mode, matrix, rng)
            : init_random_points(n, k, rng);

    ClusterModel model;
    model.config = config;
    model.assignments.assign(n, 0);
    model.centroids.resize(k);
    if (medoid_mode) model.medoid_indices = center_ids;
    for (std::size_t c = 0; c < k; ++c) {
        model.centroids[c] = to_centroid(dataset.records[center_ids[c]].likert);
    }

    auto point_cost = [&](std::size_t i, std::size_t c) {
        if (medoid_mode) return matrix->at(i, model.medoid_indices[c]);
        return sq_euclidean(dataset.records[i].likert, model.centroids[c]);
    };

    std::vector<std::size_t> prev_assign(n, k); // sentinel: differs from any cluster
    for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
        // assignment step
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
            const auto i = static_cast<std::size_t>(ip);
            std::size_t best = 0;
            double best_d = point_cost(i, 0);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = point_cost(i, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            model.assignments[i] = best;
        }

        // empty-cluster repair: move the record farthest from its centroid
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t c : model.assignments) ++sizes[c];
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t worst = n;
            double worst_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[model.assignments[i]] <= 1) continue;
                const double d = point_cost(i, model.assignments[i]);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            if (worst == n) throw NumericalError("kmeans_fit: cannot repair empty cluster");
            --sizes[model.assignments[worst]];
            model.assignments[worst] = c;
            ++sizes[c];
        }

        // update step
        if (medoid_mode) {
            std::vector<std::vector<std::size_t>> members(k);
            for (std::size_t i = 0; i < n; ++i) members[model.assignments[i]].push_back(i);
            for (std::size_t c = 0; c < k; ++c) {
                model.medoid_indices[c] = medoid_of(*matrix, members[c]);
                model.centroids[c] = to_centroid(dataset.records[model.medoid_indices[c]].likert);
            }
        } else {
            model.centroids = mean_centroids(dataset, model.assignments, k);
        }

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) objective += point_cost(i, model.assignments[i]);
        model.objective = objective;
        model.objective_history.push_back(objective);
        model.iterations = iter + 1;

        if (model.assignments == prev_assign) {
            model.converged = true;
            break;
        }
        prev_assign = model.assignments;
    }
    return model;
}

ClusterModel label_clusters(ClusterModel model, Polarity polarity) {
    const std::size_t k = model.config.k;
    model.labels.clear();
    model.labels_valid = false;
    if (k != 2 && k != 3) return model;

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> means(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < kLikertItems; ++d) means[c] += model.centroids[c][d];
        means[c] /= static_cast<double>(kLikertItems);
    }
    // "strongest first" order; stable sort so equal means fall back to the
    // lowest cluster index
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return polarity == Polarity::low_is_strong ? means[a] < means[b] : means[a] > means[b];
    });

    model.labels.assign(k, ClusterLabel::Neutral);
    if (k == 2) {
        model.labels[order[0]] = ClusterLabel::Strong;
        model.labels[order[1]] = ClusterLabel::NotStrong;
    } else {
        model.labels[order[0]] = ClusterLabel::Strong;
        model.labels[order[1]] = ClusterLabel::Neutral;
        model.labels[order[2]] = ClusterLabel::NotStrong;
    }
    model.labels_valid = true;
    return model;
}

} // namespace lcmine
