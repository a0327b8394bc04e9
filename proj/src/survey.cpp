#include "lcmine/survey.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lcmine/error.hpp"

namespace lcmine {

namespace {

const std::array<ProfileFieldInfo, kProfileFields> kFieldInfos = {{
    {"gender", 1, 2},
    {"age", 1, 6},
    {"education", 1, 7},
    {"address", 1, 6},
    {"career", 1, 14},
    {"income", 1, 5},
    {"media", 1, 5},
    {"card", 1, 4},
    {"kids", 1, 5},
    {"mode", 1, 6},
    {"distance", 1, 5},
    {"time", 1, 5},
}};

constexpr const char* kHeaderCore =
    "q1,q2,q3,q4,q5,q6,q7,q8,q9,q10,q11,q12,q13,q14,q15,"
    "gender,age,education,address,career,income,media,card,kids,mode,distance,time";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

int parse_int_cell(const std::string& cell, std::size_t row, std::size_t col) {
    int value = 0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                        ": non-integer cell '" + cell + "'");
    }
    return value;
}

std::string strip_eol(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' ||
                             line.back() == ' ' || line.back() == '\t')) {
        line.pop_back();
    }
    return line;
}

} // namespace

const std::array<ProfileFieldInfo, kProfileFields>& profile_field_infos() {
    return kFieldInfos;
}

int RespondentProfile::field(std::size_t idx) const {
    switch (idx) {
        case 0: return gender;
        case 1: return age;
        case 2: return education;
        case 3: return address;
        case 4: return career;
        case 5: return income;
        case 6: return media;
        case 7: return card;
        case 8: return kids;
        case 9: return mode;
        case 10: return distance;
        case 11: return time;
        default: throw ArgumentError("profile field index out of range");
    }
}

void RespondentProfile::set_field(std::size_t idx, int value) {
    switch (idx) {
        case 0: gender = value; break;
        case 1: age = value; break;
        case 2: education = value; break;
        case 3: address = value; break;
        case 4: career = value; break;
        case 5: income = value; break;
        case 6: media = value; break;
        case 7: card = value; break;
        case 8: kids = value; break;
        case 9: mode = value; break;
        case 10: distance = value; break;
        case 11: time = value; break;
        default: throw ArgumentError("profile field index out of range");
    }
}

bool Dataset::has_planted_labels() const {
    if (records.empty()) return false;
    for (const auto& r : records) {
        if (!r.planted_label.has_value()) return false;
    }
    return true;
}

std::string Violation::to_string() const {
    return field + " out of range {" + std::to_string(lo) + ".." + std::to_string(hi) +
           "}: got " + std::to_string(value);
}

std::vector<Violation> validate_record(const SurveyRecord& record) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < kLikertItems; ++i) {
        const int v = record.likert[i];
        if (v < 1 || v > 5) {
            out.push_back({"q" + std::to_string(i + 1), v, 1, 5});
        }
    }
    for (std::size_t i = 0; i < kProfileFields; ++i) {
        const auto& info = kFieldInfos[i];
        const int v = record.profile.field(i);
        if (v < info.lo || v > info.hi) {
            out.push_back({info.name, v, info.lo, info.hi});
        }
    }
    if (record.planted_label && (*record.planted_label < 1 || *record.planted_label > 3)) {
        out.push_back({"label", *record.planted_label, 1, 3});
    }
    return out;
}

Dataset parse_dataset(std::istream& in, const std::string& source) {
    std::string line;
    // optional comment line
    std::streampos start = in.tellg();
    if (!std::getline(in, line)) throw DataError("empty input");
    if (!line.empty() && line[0] == '#') {
        if (!std::getline(in, line)) throw DataError("missing header");
    }
    const std::string header = strip_eol(line);

    bool has_id = false;
    bool has_label = false;
    const std::string core(kHeaderCore);
    if (header == core) {
        // plain schema
    } else if (header == "id," + core) {
        has_id = true;
    } else if (header == core + ",label") {
        has_label = true;
    } else if (header == "id," + core + ",label") {
        has_id = true;
        has_label = true;
    } else {
        throw DataError("unrecognized CSV header");
    }
    (void)start;

    const std::size_t expected_cols =
        kLikertItems + kProfileFields + (has_id ? 1 : 0) + (has_label ? 1 : 0);

    Dataset ds;
    ds.source = source;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line = strip_eol(line);
        if (line.empty()) continue;
        ++row;
        const auto cells = split_csv(line);
        if (cells.size() != expected_cols) {
            throw DataError("row " + std::to_string(row) + ": expected " +
                            std::to_string(expected_cols) + " columns, got " +
                            std::to_string(cells.size()));
        }
        SurveyRecord rec;
        std::size_t c = 0;
        rec.id = has_id ? static_cast<std::uint64_t>(parse_int_cell(cells[c++], row, 0))
                        : static_cast<std::uint64_t>(ds.records.size());
        for (std::size_t i = 0; i < kLikertItems; ++i, ++c) {
            rec.likert[i] = parse_int_cell(cells[c], row, c);
        }
        for (std::size_t i = 0; i < kProfileFields; ++i, ++c) {
            rec.profile.set_field(i, parse_int_cell(cells[c], row, c));
        }
        if (has_label) {
            rec.planted_label = parse_int_cell(cells[c], row, c);
        }
        const auto violations = validate_record(rec);
        if (!violations.empty()) {
            throw DataError("row " + std::to_string(row) + ": " + violations.front().to_string());
        }
        ds.records.push_back(rec);
    }
    if (ds.records.empty()) throw DataError("empty dataset");
    return ds;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    return parse_dataset(in, path);
}

void serialize_dataset(const Dataset& dataset, std::ostream& out,
                       bool with_id, bool with_label) {
    with_label = with_label && dataset.has_planted_labels();
    if (with_id) out << "id,";
    out << kHeaderCore;
    if (with_label) out << ",label";
    out << '\n';
    for (const auto& rec : dataset.records) {
        if (with_id) out << rec.id << ',';
        for (std::size_t i = 0; i < kLikertItems; ++i) {
            if (i) out << ',';
            out << rec.likert[i];
        }
        for (std::size_t i = 0; i < kProfileFields; ++i) {
            out << ',' << rec.profile.field(i);
        }
        if (with_label) out << ',' << *rec.planted_label;
        out << '\n';
    }
}

void save_dataset(const Dataset& dataset, const std::string& path,
                  bool with_id, bool with_label) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    serialize_dataset(dataset, out, with_id, with_label);
}

double cronbach_alpha(const Dataset& dataset, const std::vector<std::size_t>& item_indices) {
    const std::size_t n = dataset.size();
    const std::size_t k = item_indices.size();
    if (n < 2) throw ArgumentError("cronbach_alpha requires at least 2 records");
    if (k < 2) throw ArgumentError("cronbach_alpha requires at least 2 items");
    for (std::size_t idx : item_indices) {
        if (idx >= kLikertItems) throw ArgumentError("item index out of range");
    }

    // sample variances (n-1 denominator)
    auto variance = [n](const std::vector<double>& xs) {
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return ss / static_cast<double>(n - 1);
    };

    double sum_item_var = 0.0;
    std::vector<double> col(n);
    for (std::size_t idx : item_indices) {
        for (std::size_t r = 0; r < n; ++r) {
            col[r] = static_cast<double>(dataset.records[r].likert[idx]);
        }
        sum_item_var += variance(col);
    }

    std::vector<double> totals(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t idx : item_indices) {
            totals[r] += static_cast<double>(dataset.records[r].likert[idx]);
        }
    }
    const double total_var = variance(totals);
    if (total_var <= 0.0) {
        throw NumericalError("cronbach_alpha undefined: zero total-score variance");
    }
    const double kk = static_cast<double>(k);
    return kk / (kk - 1.0) * (1.0 - sum_item_var / total_var);
}

double cronbach_alpha_cause_items(const Dataset& dataset) {
    std::vector<std::size_t> items(13);
    std::iota(items.begin(), items.end(), std::size_t{0});
    return cronbach_alpha(dataset, items);
}

} // namespace lcmine
