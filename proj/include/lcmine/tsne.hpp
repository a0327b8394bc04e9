#pragma once

#include <cstdint>
#include <vector>

#include "lcmine/similarity.hpp"

namespace lcmine {

struct TsneConfig {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    std::uint64_t seed = 0;
    // early exaggeration x12 for the first 250 iterations; momentum 0.5
    // switching to 0.8 at iteration 250
    double exaggeration = 12.0;
    std::size_t exaggeration_until = 250;
    double momentum_initial = 0.5;
    double momentum_final = 0.8;
    std::size_t momentum_switch = 250;
};

struct EmbeddingResult {
    std::vector<double> coords; // n x 2, row-major
    double final_kl = 0.0;
    std::vector<double> kl_history; // per iteration, unexaggerated
    TsneConfig config;
    std::size_t n = 0;

    double x(std::size_t i) const { return coords[2 * i]; }
    double y(std::size_t i) const { return coords[2 * i + 1]; }
};

// Row-stochastic conditional affinities: per-row Gaussian bandwidths are
// bisected until each row's perplexity is within 1e-3 of the target.
// Row-major n x n, zero diagonal.
std::vector<double> tsne_conditionals(const DissimilarityMatrix& distances, double perplexity);

/// Symmetrized joint affinities P = (P_{j|i} + P_{i|j}) / (2n).
std::vector<double> tsne_affinities(const DissimilarityMatrix& distances, double perplexity);

/// KL(P||Q) with the Student-t (df=1) low-dimensional kernel.
double tsne_kl(const std::vector<double>& P, const std::vector<double>& coords, std::size_t n);

/// Analytic KL gradient with respect to the 2-D coordinates.
std::vector<double> tsne_gradient(const std::vector<double>& P,
                                  const std::vector<double>& coords, std::size_t n);

/// Single-threaded reference gradient; kept for tests and benchmarks.
std::vector<double> tsne_gradient_serial(const std::vector<double>& P,
                                         const std::vector<double>& coords, std::size_t n);

/// Momentum gradient descent on KL(P||Q).
EmbeddingResult tsne_embed(const std::vector<double>& P, std::size_t n, const TsneConfig& config);

/// Affinities + embedding from a Euclidean distance matrix.
EmbeddingResult tsne_run(const DissimilarityMatrix& distances, const TsneConfig& config);

} // namespace lcmine
