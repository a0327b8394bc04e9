// Serial reference kernels vs their OpenMP counterparts on synthetic data.

#include <benchmark/benchmark.h>

#include "lcmine/clustering.hpp"
#include "lcmine/rng.hpp"
#include "lcmine/similarity.hpp"
#include "lcmine/synth.hpp"
#include "lcmine/tsne.hpp"
#include "lcmine/validation.hpp"

using namespace lcmine;

namespace {

Dataset make_data(std::size_t n) {
    GeneratorSpec spec;
    spec.n = n;
    spec.noise_sigma = 0.5;
    spec.seed = 1;
    return generate_survey(spec);
}

void bm_dissimilarity_serial(benchmark::State& state) {
    const Dataset data = make_data(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dissimilarity_matrix_serial(data, MetricTag::composite));
    }
}

void bm_dissimilarity_parallel(benchmark::State& state) {
    const Dataset data = make_data(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dissimilarity_matrix(data, MetricTag::composite));
    }
}

struct SilhouetteInput {
    DissimilarityMatrix matrix;
    std::vector<std::size_t> assignments;
};

SilhouetteInput silhouette_input(std::size_t n) {
    const Dataset data = make_data(n);
    SilhouetteInput in{dissimilarity_matrix(data, MetricTag::euclidean), {}};
    in.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.assignments[i] = static_cast<std::size_t>(*data.records[i].planted_label - 1);
    }
    return in;
}

void bm_silhouette_serial(benchmark::State& state) {
    const SilhouetteInput in = silhouette_input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(silhouette_serial(in.matrix, in.assignments, 3));
    }
}

void bm_silhouette_parallel(benchmark::State& state) {
    const SilhouetteInput in = silhouette_input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(silhouette(in.matrix, in.assignments, 3));
    }
}

struct GradientInput {
    std::vector<double> P;
    std::vector<double> y;
    std::size_t n = 0;
};

GradientInput gradient_input(std::size_t n) {
    const Dataset data = make_data(n);
    GradientInput in;
    in.n = n;
    in.P = tsne_affinities(dissimilarity_matrix(data, MetricTag::euclidean), 30.0);
    in.y.resize(2 * n);
    Rng rng(2);
    for (double& v : in.y) v = rng.next_gaussian();
    return in;
}

void bm_tsne_gradient_serial(benchmark::State& state) {
    const GradientInput in = gradient_input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsne_gradient_serial(in.P, in.y, in.n));
    }
}

void bm_tsne_gradient_parallel(benchmark::State& state) {
    const GradientInput in = gradient_input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsne_gradient(in.P, in.y, in.n));
    }
}

} // namespace

BENCHMARK(bm_dissimilarity_serial)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_dissimilarity_parallel)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_silhouette_serial)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_silhouette_parallel)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_tsne_gradient_serial)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_tsne_gradient_parallel)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
