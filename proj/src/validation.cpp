#include "lcmine/validation.hpp"

#include <algorithm>
#include <limits>

#include "lcmine/error.hpp"

namespace lcmine {

namespace {

double silhouette_sample(const DissimilarityMatrix& matrix,
                         const std::vector<std::size_t>& assignments,
                         const std::vector<std::size_t>& sizes,
                         std::size_t i, std::size_t k) {
    const std::size_t own = assignments[i];
    if (sizes[own] <= 1) return 0.0;

    std::vector<double> sums(k, 0.0);
    for (std::size_t j = 0; j < assignments.size(); ++j) {
        if (j == i) continue;
        sums[assignments[j]] += matrix.at(i, j);
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
        if (c == own || sizes[c] == 0) continue;
        b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    return denom > 0.0 ? (b - a) / denom : 0.0;
}

SilhouetteResult silhouette_impl(const DissimilarityMatrix& matrix,
                                 const std::vector<std::size_t>& assignments,
                                 std::size_t k, bool parallel) {
    const std::size_t n = assignments.size();
    if (k < 2) throw ArgumentError("silhouette: undefined for fewer than 2 clusters");
    if (n != matrix.size()) throw ArgumentError("silhouette: matrix/assignment size mismatch");

    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t c : assignments) {
        if (c >= k) throw ArgumentError("silhouette: assignment out of range");
        ++sizes[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] == 0) throw ArgumentError("silhouette: empty cluster " + std::to_string(c));
    }

    SilhouetteResult res;
    res.k = k;
    res.per_sample.assign(n, 0.0);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            res.per_sample[static_cast<std::size_t>(i)] =
                silhouette_sample(matrix, assignments, sizes, static_cast<std::size_t>(i), k);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            res.per_sample[i] = silhouette_sample(matrix, assignments, sizes, i, k);
        }
    }

    res.per_cluster_mean.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) res.per_cluster_mean[assignments[i]] += res.per_sample[i];
    for (std::size_t c = 0; c < k; ++c) {
        res.per_cluster_mean[c] /= static_cast<double>(sizes[c]);
    }
    double total = 0.0;
    for (double s : res.per_sample) total += s;
    res.overall_mean = total / static_cast<double>(n);
    return res;
}

} // namespace

SilhouetteResult silhouette(const DissimilarityMatrix& matrix,
                            const std::vector<std::size_t>& assignments,
                            std::size_t k) {
    return silhouette_impl(matrix, assignments, k, true);
}

SilhouetteResult silhouette_serial(const DissimilarityMatrix& matrix,
                                   const std::vector<std::size_t>& assignments,
                                   std::size_t k) {
    return silhouette_impl(matrix, assignments, k, false);
}

KSelection select_k(const Dataset& dataset, const std::vector<std::size_t>& candidate_ks,
                    const ClusterConfig& config) {
    if (candidate_ks.empty()) throw ArgumentError("select_k: no candidate k values");

    const MetricTag tag = config.metric_mode == MetricMode::composite_medoid
                              ? MetricTag::composite
                              : MetricTag::euclidean;
    const DissimilarityMatrix matrix = dissimilarity_matrix(dataset, tag);

    KSelection sel;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k : candidate_ks) {
        ClusterConfig c = config;
        c.k = k;
        ClusterModel model =
            kmeans_fit(dataset, c,
                       tag == MetricTag::composite ? &matrix : nullptr);
        SilhouetteResult sil = silhouette(matrix, model.assignments, k);
        if (sil.overall_mean > best_score ||
            (sil.overall_mean == best_score && k < sel.best_k)) {
            best_score = sil.overall_mean;
            sel.best_k = k;
        }
        sel.silhouettes.emplace(k, std::move(sil));
        sel.models.emplace(k, std::move(model));
    }
    return sel;
}

double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.size() != b.size()) throw ArgumentError("adjusted_rand_index: size mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw ArgumentError("adjusted_rand_index: need at least 2 samples");

    const std::size_t ka = 1 + *std::max_element(a.begin(), a.end());
    const std::size_t kb = 1 + *std::max_element(b.begin(), b.end());
    std::vector<std::size_t> table(ka * kb, 0), row(ka, 0), col(kb, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++table[a[i] * kb + b[i]];
        ++row[a[i]];
        ++col[b[i]];
    }
    auto choose2 = [](std::size_t m) {
        return static_cast<double>(m) * static_cast<double>(m ? m - 1 : 0) / 2.0;
    };
    double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (std::size_t c : table) sum_cells += choose2(c);
    for (std::size_t r : row) sum_rows += choose2(r);
    for (std::size_t c : col) sum_cols += choose2(c);
    const double total = choose2(n);
    const double expected = sum_rows * sum_cols / total;
    const double max_index = (sum_rows + sum_cols) / 2.0;
    if (max_index == expected) return 1.0; // both partitions trivial
    return (sum_cells - expected) / (max_index - expected);
}

} // namespace lcmine
