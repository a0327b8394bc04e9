#include "lcmine/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lcmine/error.hpp"

namespace lcmine {

std::string metric_tag_name(MetricTag tag) {
    switch (tag) {
        case MetricTag::levenshtein: return "levenshtein";
        case MetricTag::euclidean: return "euclidean";
        case MetricTag::composite: return "composite";
    }
    return "?";
}

int levenshtein(std::span<const int> a, std::span<const int> b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    // two-row DP; d[0][j] = j, d[i][0] = i
    std::vector<int> prev(n + 1), cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= n; ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

double euclidean(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ArgumentError("euclidean: dimension mismatch (" + std::to_string(x.size()) +
                            " vs " + std::to_string(y.size()) + ")");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double euclidean(const LikertVector& a, const LikertVector& b) {
    double ss = 0.0;
    for (std::size_t i = 0; i < kLikertItems; ++i) {
        const double d = static_cast<double>(a[i] - b[i]);
        ss += d * d;
    }
    return std::sqrt(ss);
}

double combined_dissimilarity(const LikertVector& a, const LikertVector& b) {
    const int edits = levenshtein(std::span<const int>(a), std::span<const int>(b));
    return (1.0 + static_cast<double>(edits)) * euclidean(a, b);
}

void DissimilarityMatrix::dump(std::ostream& out) const {
    out.precision(17);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (j) out << ' ';
            out << at(i, j);
        }
        out << '\n';
    }
}

namespace {

double pair_value(const LikertVector& a, const LikertVector& b, MetricTag tag) {
    switch (tag) {
        case MetricTag::levenshtein:
            return static_cast<double>(
                levenshtein(std::span<const int>(a), std::span<const int>(b)));
        case MetricTag::euclidean:
            return euclidean(a, b);
        case MetricTag::composite:
            return combined_dissimilarity(a, b);
    }
    return 0.0;
}

} // namespace

DissimilarityMatrix dissimilarity_matrix(const Dataset& dataset, MetricTag tag) {
    if (dataset.records.empty()) throw ArgumentError("dissimilarity_matrix: empty dataset");
    const std::size_t n = dataset.size();
    DissimilarityMatrix m(n, tag);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (std::size_t j = ui + 1; j < n; ++j) {
            m.set(ui, j, pair_value(dataset.records[ui].likert, dataset.records[j].likert, tag));
        }
    }
    return m;
}

DissimilarityMatrix dissimilarity_matrix_serial(const Dataset& dataset, MetricTag tag) {
    if (dataset.records.empty()) throw ArgumentError("dissimilarity_matrix: empty dataset");
    const std::size_t n = dataset.size();
    DissimilarityMatrix m(n, tag);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            m.set(i, j, pair_value(dataset.records[i].likert, dataset.records[j].likert, tag));
        }
    }
    return m;
}

} // namespace lcmine
