#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "lcmine/error.hpp"
#include "lcmine/survey.hpp"
#include "test_util.hpp"

using namespace lcmine;
using namespace lcmine::test;

namespace {

const char* kHeader =
    "q1,q2,q3,q4,q5,q6,q7,q8,q9,q10,q11,q12,q13,q14,q15,"
    "gender,age,education,address,career,income,media,card,kids,mode,distance,time";

Dataset parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

} // namespace

TEST_CASE("parse single row") {
    const Dataset ds =
        parse_text(std::string(kHeader) + "\n1,2,3,4,5,1,2,3,4,5,1,2,3,4,5,1,2,3,1,1,2,1,1,1,1,1,1\n");
    REQUIRE(ds.size() == 1);
    const LikertVector expected = {1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5};
    CHECK(ds.records[0].likert == expected);
    CHECK(ds.records[0].id == 0);
    CHECK(ds.records[0].profile.gender == 1);
    CHECK(ds.records[0].profile.time == 1);
    CHECK_FALSE(ds.records[0].planted_label.has_value());
}

TEST_CASE("header-only input is an empty-dataset error") {
    CHECK_THROWS_WITH_AS(parse_text(std::string(kHeader) + "\n"), "empty dataset", DataError);
}

TEST_CASE("out-of-range likert cell names the field") {
    const std::string row = "1,2,6,4,5,1,2,3,4,5,1,2,3,4,5,1,2,3,1,1,2,1,1,1,1,1,1";
    try {
        parse_text(std::string(kHeader) + "\n" + row + "\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("q3") != std::string::npos);
        CHECK(msg.find("{1..5}") != std::string::npos);
    }
}

TEST_CASE("malformed rows name row and column") {
    CHECK_THROWS_AS(parse_text(std::string(kHeader) + "\n1,2,3\n"), DataError);
    try {
        const std::string row = "1,2,x,4,5,1,2,3,4,5,1,2,3,4,5,1,2,3,1,1,2,1,1,1,1,1,1";
        parse_text(std::string(kHeader) + "\n" + row + "\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("column 3") != std::string::npos);
    }
}

TEST_CASE("optional id and label columns, comment line, CRLF") {
    const std::string text = "# generated\r\nid," + std::string(kHeader) +
                             ",label\r\n7,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,2,1,1,1,1,1,1,1,1,1,1,1,2\r\n";
    const Dataset ds = parse_text(text);
    REQUIRE(ds.size() == 1);
    CHECK(ds.records[0].id == 7);
    CHECK(ds.records[0].profile.gender == 2);
    CHECK(ds.records[0].planted_label == 2);
}

TEST_CASE("validate_record flags out-of-range fields in field order") {
    SurveyRecord rec = record_from(constant_likert(1));
    CHECK(validate_record(rec).empty());

    rec.profile.career = 15;
    auto violations = validate_record(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].field == "career");
    CHECK(violations[0].value == 15);
    CHECK(violations[0].hi == 14);

    rec.profile.time = 0;
    violations = validate_record(rec);
    REQUIRE(violations.size() == 2);
    CHECK(violations[0].field == "career"); // deterministic field order
    CHECK(violations[1].field == "time");
    CHECK(violations[1].lo == 1);
    CHECK(violations[1].hi == 5);
}

TEST_CASE("parse then serialize round-trips the rows") {
    std::string text = std::string(kHeader) + ",label\n";
    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        std::string row;
        for (int q = 0; q < 15; ++q) row += std::to_string(rng.next_int(1, 5)) + ",";
        for (std::size_t f = 0; f < kProfileFields; ++f) {
            const auto& info = profile_field_infos()[f];
            row += std::to_string(rng.next_int(info.lo, info.hi)) + ",";
        }
        row += std::to_string(rng.next_int(1, 3));
        text += row + "\n";
    }
    const Dataset ds = parse_text(text);
    std::ostringstream out;
    serialize_dataset(ds, out);
    CHECK(out.str() == text);
}

TEST_CASE("cronbach alpha is 1 for perfectly correlated items") {
    std::vector<LikertVector> vecs;
    for (int v = 1; v <= 5; ++v) vecs.push_back(constant_likert(v));
    const Dataset ds = dataset_from(vecs);
    std::vector<std::size_t> items(15);
    std::iota(items.begin(), items.end(), std::size_t{0});
    CHECK(cronbach_alpha(ds, items) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cronbach alpha is undefined at zero total variance") {
    const Dataset ds = dataset_from(std::vector<LikertVector>(4, constant_likert(3)));
    CHECK_THROWS_AS((void)cronbach_alpha_cause_items(ds), NumericalError);
}

TEST_CASE("cronbach alpha argument errors") {
    const Dataset one = dataset_from({constant_likert(1)});
    CHECK_THROWS_AS((void)cronbach_alpha_cause_items(one), ArgumentError);
    const Dataset two = dataset_from({constant_likert(1), constant_likert(2)});
    CHECK_THROWS_AS((void)cronbach_alpha(two, {0}), ArgumentError);
}

TEST_CASE("cronbach alpha near zero for independent uniform items") {
    Rng rng(7);
    std::vector<LikertVector> vecs;
    for (int i = 0; i < 500; ++i) vecs.push_back(random_likert(rng));
    const Dataset ds = dataset_from(vecs);
    std::vector<std::size_t> items(15);
    std::iota(items.begin(), items.end(), std::size_t{0});
    const double alpha = cronbach_alpha(ds, items);

    // independent oracle: the same variance formula computed directly on
    // the generated matrix
    const std::size_t n = ds.size();
    auto var = [n](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return ss / static_cast<double>(n - 1);
    };
    double item_var_sum = 0.0;
    for (std::size_t q = 0; q < 15; ++q) {
        std::vector<double> col;
        for (const auto& r : ds.records) col.push_back(r.likert[q]);
        item_var_sum += var(col);
    }
    std::vector<double> totals;
    for (const auto& r : ds.records) {
        double t = 0.0;
        for (int v : r.likert) t += v;
        totals.push_back(t);
    }
    const double expected = 15.0 / 14.0 * (1.0 - item_var_sum / var(totals));
    CHECK(alpha == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(alpha) <= 0.1);
}

TEST_CASE("cronbach alpha invariant under record and item reordering") {
    Rng rng(19);
    std::vector<LikertVector> vecs;
    for (int i = 0; i < 40; ++i) vecs.push_back(random_likert(rng));
    const Dataset ds = dataset_from(vecs);

    std::vector<std::size_t> items = {1, 4, 7, 9, 12};
    const double base = cronbach_alpha(ds, items);

    std::reverse(vecs.begin(), vecs.end());
    const Dataset reordered = dataset_from(vecs);
    CHECK(cronbach_alpha(reordered, items) == doctest::Approx(base).epsilon(1e-12));

    std::reverse(items.begin(), items.end());
    CHECK(cronbach_alpha(ds, items) == doctest::Approx(base).epsilon(1e-12));
}
