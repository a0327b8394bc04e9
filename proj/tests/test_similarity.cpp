#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lcmine/error.hpp"
#include "lcmine/similarity.hpp"
#include "test_util.hpp"

using namespace lcmine;
using namespace lcmine::test;

namespace {

// exponential recursive edit-distance oracle, independent of the DP
int levenshtein_oracle(std::span<const int> a, std::span<const int> b) {
    if (a.empty()) return static_cast<int>(b.size());
    if (b.empty()) return static_cast<int>(a.size());
    const int del = levenshtein_oracle(a.subspan(1), b) + 1;
    const int ins = levenshtein_oracle(a, b.subspan(1)) + 1;
    const int sub = levenshtein_oracle(a.subspan(1), b.subspan(1)) + (a[0] == b[0] ? 0 : 1);
    return std::min({del, ins, sub});
}

// all sequences of length <= max_len over alphabet {1..alphabet}
std::vector<std::vector<int>> enumerate_sequences(int max_len, int alphabet) {
    std::vector<std::vector<int>> out = {{}};
    std::vector<std::vector<int>> frontier = {{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& seq : frontier) {
            for (int s = 1; s <= alphabet; ++s) {
                auto longer = seq;
                longer.push_back(s);
                out.push_back(longer);
                next.push_back(std::move(longer));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

} // namespace

TEST_CASE("levenshtein spec examples") {
    const std::vector<int> seq = {1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5};
    CHECK(levenshtein(seq, seq) == 0);

    const std::vector<int> empty;
    const std::vector<int> abc = {1, 2, 3};
    CHECK(levenshtein(empty, abc) == 3);
    CHECK(levenshtein(abc, empty) == 3);

    const std::vector<int> a = {1, 3, 5};
    const std::vector<int> b = {2, 3};
    CHECK(levenshtein_oracle(a, b) == 2); // frozen from the oracle
    CHECK(levenshtein(a, b) == 2);
}

TEST_CASE("levenshtein matches the recursive oracle exhaustively (length <= 3)") {
    const auto seqs = enumerate_sequences(3, 3);
    for (const auto& a : seqs) {
        for (const auto& b : seqs) {
            CHECK(levenshtein(a, b) == levenshtein_oracle(a, b));
        }
    }
}

TEST_CASE("levenshtein properties on random likert pairs") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const LikertVector a = random_likert(rng);
        const LikertVector b = random_likert(rng);
        const int lab = levenshtein(std::span<const int>(a), std::span<const int>(b));
        const int lba = levenshtein(std::span<const int>(b), std::span<const int>(a));
        CHECK(lab == lba);
        CHECK(lab <= static_cast<int>(kLikertItems));
        int hamming = 0;
        for (std::size_t i = 0; i < kLikertItems; ++i) hamming += (a[i] != b[i]);
        CHECK(lab <= hamming);
        CHECK((lab == 0) == (a == b));
    }
}

TEST_CASE("euclidean spec examples") {
    const std::vector<double> x = {1.0, 1.0};
    const std::vector<double> y = {4.0, 5.0};
    CHECK(euclidean(x, x) == 0.0);
    CHECK(euclidean(x, y) == doctest::Approx(5.0).epsilon(1e-15));

    Rng rng(11);
    const LikertVector a = random_likert(rng);
    const LikertVector b = random_likert(rng);
    double ss = 0.0;
    for (std::size_t i = 0; i < kLikertItems; ++i) {
        ss += static_cast<double>((a[i] - b[i]) * (a[i] - b[i]));
    }
    CHECK(euclidean(a, b) == doctest::Approx(std::sqrt(ss)).epsilon(1e-15));
}

TEST_CASE("euclidean rejects mismatched dimensions") {
    const std::vector<double> x = {1.0, 2.0};
    const std::vector<double> y = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS((void)euclidean(x, y), ArgumentError);
}

TEST_CASE("combined dissimilarity spec examples") {
    LikertVector a = {1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5};
    CHECK(combined_dissimilarity(a, a) == 0.0);

    LikertVector b = a;
    b[2] = 5; // q3: 3 -> 5
    CHECK(levenshtein(std::span<const int>(a), std::span<const int>(b)) == 1);
    CHECK(combined_dissimilarity(a, b) == doctest::Approx(4.0).epsilon(1e-15));

    const LikertVector ones = constant_likert(1);
    const LikertVector fives = constant_likert(5);
    CHECK(levenshtein(std::span<const int>(ones), std::span<const int>(fives)) == 15);
    CHECK(combined_dissimilarity(ones, fives) ==
          doctest::Approx(16.0 * std::sqrt(240.0)).epsilon(1e-15));
}

TEST_CASE("combined dissimilarity properties") {
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const LikertVector a = random_likert(rng);
        const LikertVector b = random_likert(rng);
        const double sab = combined_dissimilarity(a, b);
        CHECK(sab == combined_dissimilarity(b, a));
        CHECK(sab >= 0.0);
        CHECK((sab == 0.0) == (a == b));
    }
}

TEST_CASE("dissimilarity matrix basics") {
    const Dataset one = dataset_from({constant_likert(2)});
    const auto m1 = dissimilarity_matrix(one, MetricTag::composite);
    CHECK(m1.size() == 1);
    CHECK(m1.at(0, 0) == 0.0);

    Rng rng(5);
    const Dataset three = dataset_from({random_likert(rng), random_likert(rng), random_likert(rng)});
    const auto m3 = dissimilarity_matrix(three, MetricTag::composite);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(m3.at(i, j) == combined_dissimilarity(three.records[i].likert,
                                                        three.records[j].likert));
        }
    }

    const Dataset same = dataset_from(std::vector<LikertVector>(6, constant_likert(3)));
    const auto m6 = dissimilarity_matrix(same, MetricTag::composite);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) CHECK(m6.at(i, j) == 0.0);
    }
}

TEST_CASE("parallel matrix build equals the serial reference bit-for-bit") {
    Rng rng(99);
    std::vector<LikertVector> vecs;
    for (int i = 0; i < 60; ++i) vecs.push_back(random_likert(rng));
    const Dataset ds = dataset_from(vecs);
    for (MetricTag tag : {MetricTag::levenshtein, MetricTag::euclidean, MetricTag::composite}) {
        const auto par = dissimilarity_matrix(ds, tag);
        const auto ser = dissimilarity_matrix_serial(ds, tag);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            for (std::size_t j = 0; j < ds.size(); ++j) {
                CHECK(par.at(i, j) == ser.at(i, j));
            }
        }
    }
}
