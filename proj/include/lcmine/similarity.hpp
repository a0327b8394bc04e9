#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lcmine/survey.hpp"

namespace lcmine {

enum class MetricTag { levenshtein, euclidean, composite };

std::string metric_tag_name(MetricTag tag);

/// Minimum insert/delete/substitute edits between two symbol sequences.
int levenshtein(std::span<const int> a, std::span<const int> b);

/// sqrt of the coordinate-wise squared difference sum; throws on dimension mismatch.
double euclidean(std::span<const double> x, std::span<const double> y);
double euclidean(const LikertVector& a, const LikertVector& b);

/// Hybrid dissimilarity (1 + edit distance) * euclidean distance.
double combined_dissimilarity(const LikertVector& a, const LikertVector& b);

// Dense symmetric pairwise dissimilarities. Entry (i,j) depends only on
// records i and j, so the parallel build is bit-identical for any thread
// count.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    DissimilarityMatrix(std::size_t n, MetricTag tag)
        : n_(n), tag_(tag), values_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    MetricTag tag() const { return tag_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        values_[i * n_ + j] = v;
        values_[j * n_ + i] = v;
    }

    /// Lower-triangular text dump, one row per line.
    void dump(std::ostream& out) const;

private:
    std::size_t n_ = 0;
    MetricTag tag_ = MetricTag::composite;
    std::vector<double> values_;
};

DissimilarityMatrix dissimilarity_matrix(const Dataset& dataset, MetricTag tag);

/// Single-threaded reference build; kept for tests and benchmarks.
DissimilarityMatrix dissimilarity_matrix_serial(const Dataset& dataset, MetricTag tag);

} // namespace lcmine
