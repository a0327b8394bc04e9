#pragma once

#include <array>
#include <cstdint>

#include "lcmine/survey.hpp"

namespace lcmine {

// Planted-structure survey generator. Likert items follow a per-class
// Gaussian round-clamp model; explanatory attributes mix a uniform base
// distribution with a class-specific mode, weighted by the field's effect
// strength.
struct GeneratorSpec {
    std::size_t n = 3000;
    std::array<double, 3> class_proportions = {0.35, 0.45, 0.20};
    std::array<std::array<double, kLikertItems>, 3> class_item_means = default_means();
    double noise_sigma = 0.3;
    std::array<double, kProfileFields> attribute_effects = {}; // all zero
    std::uint64_t seed = 42;

    static std::array<std::array<double, kLikertItems>, 3> default_means() {
        std::array<std::array<double, kLikertItems>, 3> m{};
        m[0].fill(1.5);
        m[1].fill(3.0);
        m[2].fill(4.5);
        return m;
    }
};

/// Class-specific mode category for a profile field (1-based class).
int attribute_mode(std::size_t field_index, int planted_class);

/// Deterministic per seed; planted_label set on every record.
Dataset generate_survey(const GeneratorSpec& spec);

} // namespace lcmine
