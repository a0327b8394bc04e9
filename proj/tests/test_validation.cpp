#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcmine/error.hpp"
#include "lcmine/synth.hpp"
#include "lcmine/validation.hpp"
#include "test_util.hpp"

using namespace lcmine;
using namespace lcmine::test;

namespace {

DissimilarityMatrix matrix_from(const std::vector<std::vector<double>>& grid) {
    DissimilarityMatrix m(grid.size(), MetricTag::euclidean);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            m.set(i, j, grid[i][j]);
        }
    }
    return m;
}

} // namespace

TEST_CASE("perfect separation gives s = 1 everywhere") {
    // two clusters, each a pair of identical points, far apart
    const auto m = matrix_from({{0, 0, 9, 9},
                                {0, 0, 9, 9},
                                {9, 9, 0, 0},
                                {9, 9, 0, 0}});
    const auto res = silhouette(m, {0, 0, 1, 1}, 2);
    for (double s : res.per_sample) CHECK(s == 1.0);
    CHECK(res.overall_mean == 1.0);
}

TEST_CASE("singleton cluster scores 0 by convention") {
    const auto m = matrix_from({{0, 1, 5}, {1, 0, 5}, {5, 5, 0}});
    const auto res = silhouette(m, {0, 0, 1}, 2);
    CHECK(res.per_sample[2] == 0.0);
}

TEST_CASE("six points match the hand-computed oracle") {
    // two planted groups {0,1,2} and {3,4,5}; within distances 1/2/3,
    // across distance 10 everywhere
    const auto m = matrix_from({{0, 1, 2, 10, 10, 10},
                                {1, 0, 3, 10, 10, 10},
                                {2, 3, 0, 10, 10, 10},
                                {10, 10, 10, 0, 1, 2},
                                {10, 10, 10, 1, 0, 3},
                                {10, 10, 10, 2, 3, 0}});
    const auto res = silhouette(m, {0, 0, 0, 1, 1, 1}, 2);
    // spreadsheet-style: a(0) = (1+2)/2 = 1.5, b(0) = 10, s = 8.5/10
    CHECK(res.per_sample[0] == doctest::Approx(0.85).epsilon(1e-12));
    // a(1) = (1+3)/2 = 2.0 -> s = 0.8
    CHECK(res.per_sample[1] == doctest::Approx(0.80).epsilon(1e-12));
    // a(2) = (2+3)/2 = 2.5 -> s = 0.75
    CHECK(res.per_sample[2] == doctest::Approx(0.75).epsilon(1e-12));
    // second group mirrors the first
    CHECK(res.per_sample[3] == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(res.overall_mean == doctest::Approx((0.85 + 0.80 + 0.75) / 3.0).epsilon(1e-12));
    CHECK(res.per_cluster_mean[0] == doctest::Approx(res.per_cluster_mean[1]).epsilon(1e-12));
}

TEST_CASE("silhouette rejects k < 2") {
    const auto m = matrix_from({{0, 1}, {1, 0}});
    CHECK_THROWS_AS((void)silhouette(m, {0, 0}, 1), ArgumentError);
}

TEST_CASE("per-sample values are invariant under positive scaling") {
    Rng rng(13);
    std::vector<LikertVector> vecs;
    for (int i = 0; i < 30; ++i) vecs.push_back(random_likert(rng));
    const Dataset ds = dataset_from(vecs);
    auto m = dissimilarity_matrix(ds, MetricTag::euclidean);
    std::vector<std::size_t> assignments(30);
    for (std::size_t i = 0; i < 30; ++i) assignments[i] = i % 3;

    const auto base = silhouette(m, assignments, 3);
    DissimilarityMatrix scaled(30, MetricTag::euclidean);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = i + 1; j < 30; ++j) scaled.set(i, j, m.at(i, j) * 7.5);
    }
    const auto after = silhouette(scaled, assignments, 3);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(after.per_sample[i] == doctest::Approx(base.per_sample[i]).epsilon(1e-12));
    }
}

TEST_CASE("parallel silhouette equals the serial reference") {
    Rng rng(23);
    std::vector<LikertVector> vecs;
    for (int i = 0; i < 80; ++i) vecs.push_back(random_likert(rng));
    const Dataset ds = dataset_from(vecs);
    const auto m = dissimilarity_matrix(ds, MetricTag::composite);
    std::vector<std::size_t> assignments(80);
    for (std::size_t i = 0; i < 80; ++i) assignments[i] = i % 4;
    const auto par = silhouette(m, assignments, 4);
    const auto ser = silhouette_serial(m, assignments, 4);
    CHECK(par.per_sample == ser.per_sample);
    CHECK(par.overall_mean == ser.overall_mean);
}

TEST_CASE("select_k prefers 3 on 3-class planted data") {
    GeneratorSpec spec;
    spec.n = 600;
    spec.noise_sigma = 0.3;
    spec.seed = 42;
    const Dataset ds = generate_survey(spec);
    ClusterConfig cfg;
    cfg.seed = 42;
    const KSelection sel = select_k(ds, {2, 3}, cfg);
    CHECK(sel.best_k == 3);
    CHECK(sel.silhouettes.at(3).overall_mean > sel.silhouettes.at(2).overall_mean);
}

TEST_CASE("select_k prefers 2 on 2-class planted data") {
    GeneratorSpec spec;
    spec.n = 400;
    spec.class_proportions = {0.5, 0.5, 0.0};
    spec.class_item_means[0].fill(1.5);
    spec.class_item_means[1].fill(4.5);
    spec.noise_sigma = 0.3;
    spec.seed = 7;
    const Dataset ds = generate_survey(spec);
    ClusterConfig cfg;
    cfg.seed = 7;
    const KSelection sel = select_k(ds, {2, 3}, cfg);
    CHECK(sel.best_k == 2);
}

TEST_CASE("single-candidate select_k returns it unchanged") {
    GeneratorSpec spec;
    spec.n = 100;
    spec.seed = 3;
    const Dataset ds = generate_survey(spec);
    ClusterConfig cfg;
    cfg.seed = 3;
    const KSelection sel = select_k(ds, {2}, cfg);
    CHECK(sel.best_k == 2);
    CHECK(sel.silhouettes.size() == 1);
}

TEST_CASE("select_k is deterministic per seed") {
    GeneratorSpec spec;
    spec.n = 200;
    spec.seed = 11;
    const Dataset ds = generate_survey(spec);
    ClusterConfig cfg;
    cfg.seed = 11;
    const KSelection a = select_k(ds, {2, 3}, cfg);
    const KSelection b = select_k(ds, {2, 3}, cfg);
    CHECK(a.best_k == b.best_k);
    CHECK(a.silhouettes.at(3).per_sample == b.silhouettes.at(3).per_sample);
}

TEST_CASE("adjusted rand index reference points") {
    CHECK(adjusted_rand_index({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    // identical partitions with a relabel are still perfect agreement
    const double mixed = adjusted_rand_index({0, 0, 1, 1, 2, 2}, {0, 1, 0, 1, 2, 2});
    CHECK(mixed < 1.0);
    CHECK_THROWS_AS((void)adjusted_rand_index({0}, {0, 1}), ArgumentError);
}
