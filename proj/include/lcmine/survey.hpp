#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lcmine {

inline constexpr std::size_t kLikertItems = 15;
inline constexpr std::size_t kProfileFields = 12;

/// 15 ordinal responses, each coded 1..5.
using LikertVector = std::array<int, kLikertItems>;

// Coded explanatory attributes. Field order is fixed; it is the column
// order of the CSV schema and the feature order of the forest.
struct RespondentProfile {
    int gender = 1;    // {1,2}
    int age = 1;       // {1..6}
    int education = 1; // {1..7}
    int address = 1;   // {1..6}
    int career = 1;    // {1..14}
    int income = 1;    // {1..5}
    int media = 1;     // {1..5}
    int card = 1;      // {1..4}
    int kids = 1;      // {1..5}
    int mode = 1;      // {1..6}
    int distance = 1;  // {1..5}
    int time = 1;      // {1..5}

    int field(std::size_t idx) const;
    void set_field(std::size_t idx, int value);

    bool operator==(const RespondentProfile&) const = default;
};

struct ProfileFieldInfo {
    const char* name;
    int lo;
    int hi;
};

/// Admissible code range per profile field, in field order.
const std::array<ProfileFieldInfo, kProfileFields>& profile_field_infos();

struct SurveyRecord {
    std::uint64_t id = 0;
    LikertVector likert{};
    RespondentProfile profile;
    std::optional<int> planted_label; // {1,2,3} when present

    bool operator==(const SurveyRecord&) const = default;
};

struct Dataset {
    std::vector<SurveyRecord> records;
    std::string source; // file path or "synth:<seed>"

    std::size_t size() const { return records.size(); }
    bool has_planted_labels() const;
};

struct Violation {
    std::string field;
    int value = 0;
    int lo = 0;
    int hi = 0;

    std::string to_string() const;
};

/// Out-of-range fields of a record, in likert-then-profile field order.
std::vector<Violation> validate_record(const SurveyRecord& record);

// CSV schema:
//   [id,]q1..q15,gender,age,education,address,career,income,media,card,
//   kids,mode,distance,time[,label]
// A '#'-prefixed first line is a comment. All cells base-10 integers.
Dataset parse_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset load_dataset(const std::string& path);

void serialize_dataset(const Dataset& dataset, std::ostream& out,
                       bool with_id = false, bool with_label = true);
void save_dataset(const Dataset& dataset, const std::string& path,
                  bool with_id = false, bool with_label = true);

/// Cronbach's alpha over the selected likert items (0-based indices).
double cronbach_alpha(const Dataset& dataset, const std::vector<std::size_t>& item_indices);

/// Default consistency gate: items 1..13 of the questionnaire.
double cronbach_alpha_cause_items(const Dataset& dataset);

} // namespace lcmine
