#pragma once

#include <vector>

#include "lcmine/rng.hpp"
#include "lcmine/survey.hpp"

namespace lcmine::test {

inline SurveyRecord record_from(const LikertVector& v, std::uint64_t id = 0) {
    SurveyRecord r;
    r.id = id;
    r.likert = v;
    return r;
}

inline Dataset dataset_from(const std::vector<LikertVector>& vectors) {
    Dataset ds;
    ds.source = "<test>";
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        ds.records.push_back(record_from(vectors[i], i));
    }
    return ds;
}

inline LikertVector random_likert(Rng& rng) {
    LikertVector v;
    for (auto& x : v) x = static_cast<int>(rng.next_int(1, 5));
    return v;
}

inline LikertVector constant_likert(int value) {
    LikertVector v;
    v.fill(value);
    return v;
}

} // namespace lcmine::test
