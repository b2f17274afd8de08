#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clic/eval/scorers.hpp"
#include "clic/train/encoders.hpp"
#include "clic/train/toy_world.hpp"

namespace clic {

// One scored item: an image, its two equivalent captions, one hard
// negative, and the category the item is counted under.
struct SuiteItem {
    FeatureImage image;
    std::string p1, p2, n;
    std::string category; // "swap" or "replace" for the toy world
};

struct SuiteWinoItem {
    FeatureImage i0, i1;
    std::string c0, c1;
};

struct EvalSuiteInput {
    std::vector<SuiteItem> items;
    std::vector<SuiteWinoItem> wino;
    // retrieval corpus: image k is gold for caption k
    std::vector<FeatureImage> retrieval_images;
    std::vector<std::string> retrieval_captions;
};

EvalSuiteInput suite_from_toy_world(const ToyWorld& world, std::size_t max_items = 0);

struct CategoryScores {
    std::size_t count = 0;
    std::size_t sc_itt_hits = 0;
    std::size_t scpp_itt_hits = 0;
    std::size_t scpp_tot_hits = 0;

    double sc_itt() const { return count ? static_cast<double>(sc_itt_hits) / count : 0.0; }
    double scpp_itt() const { return count ? static_cast<double>(scpp_itt_hits) / count : 0.0; }
    double scpp_tot() const { return count ? static_cast<double>(scpp_tot_hits) / count : 0.0; }
};

struct Report {
    std::map<std::string, CategoryScores> categories;
    std::size_t wino_count = 0;
    std::size_t wino_text_hits = 0;
    std::size_t wino_image_hits = 0;
    std::size_t wino_group_hits = 0;
    double text_r1 = 0.0, text_r5 = 0.0;   // image -> text retrieval
    double image_r1 = 0.0, image_r5 = 0.0; // text -> image retrieval
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;

    // category-average ITT both ways: equal weight per category and
    // size-proportional (the benchmark leaves the choice open)
    double itt_average_equal() const;
    double itt_average_weighted() const;

    std::string to_json() const;
    std::string to_table() const;
};

// Scores every item with the given encoder pair. Throws EmptySuite when
// there are no items.
Report evaluate_suite(const ToyTextEncoder& text_enc, const ToyImageEncoder& image_enc,
                      const EvalSuiteInput& input);

} // namespace clic
