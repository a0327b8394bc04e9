#include "lcmine/synth.hpp"

#include <algorithm>
#include <cmath>

#include "lcmine/error.hpp"
#include "lcmine/rng.hpp"

namespace lcmine {

int attribute_mode(std::size_t field_index, int planted_class) {
    const auto& info = profile_field_infos()[field_index];
    const int range = info.hi - info.lo + 1;
    // spread class modes across the category range
    const int offset = static_cast<int>((field_index + static_cast<std::size_t>(planted_class - 1) *
                                                           static_cast<std::size_t>(range) / 3) %
                                        static_cast<std::size_t>(range));
    return info.lo + offset;
}

namespace {

void check_spec(const GeneratorSpec& spec) {
    if (spec.n == 0) throw ArgumentError("generator spec: n must be positive");
    double sum = 0.0;
    for (double p : spec.class_proportions) {
        if (p < 0.0) throw ArgumentError("generator spec: negative class proportion");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ArgumentError("generator spec: class_proportions must sum to 1");
    }
    for (const auto& means : spec.class_item_means) {
        for (double m : means) {
            if (m < 1.0 || m > 5.0) {
                throw ArgumentError("generator spec: class_item_means must lie in [1,5]");
            }
        }
    }
    if (spec.noise_sigma < 0.0) throw ArgumentError("generator spec: noise_sigma must be >= 0");
    for (double e : spec.attribute_effects) {
        if (e < 0.0) throw ArgumentError("generator spec: attribute_effects must be >= 0");
    }
}

} // namespace

Dataset generate_survey(const GeneratorSpec& spec) {
    check_spec(spec);
    Rng rng(spec.seed);

    Dataset ds;
    ds.source = "synth:" + std::to_string(spec.seed);
    ds.records.reserve(spec.n);

    for (std::size_t i = 0; i < spec.n; ++i) {
        SurveyRecord rec;
        rec.id = i;

        // class draw
        const double u = rng.next_double();
        int cls = 3;
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) {
            acc += spec.class_proportions[static_cast<std::size_t>(c)];
            if (u < acc) {
                cls = c + 1;
                break;
            }
        }
        rec.planted_label = cls;

        const auto& means = spec.class_item_means[static_cast<std::size_t>(cls - 1)];
        for (std::size_t q = 0; q < kLikertItems; ++q) {
            const double raw =
                std::clamp(means[q] + spec.noise_sigma * rng.next_gaussian(), 1.0, 5.0);
            rec.likert[q] = static_cast<int>(std::lround(raw));
        }

        for (std::size_t f = 0; f < kProfileFields; ++f) {
            const auto& info = profile_field_infos()[f];
            // effect strength is the mode-mixture weight, saturating at 1;
            // 0 leaves the field purely uniform
            const double w = std::min(spec.attribute_effects[f], 1.0);
            int value;
            if (rng.next_double() < w) {
                value = attribute_mode(f, cls);
            } else {
                value = static_cast<int>(rng.next_int(info.lo, info.hi));
            }
            rec.profile.set_field(f, value);
        }
        ds.records.push_back(rec);
    }
    return ds;
}

} // namespace lcmine
