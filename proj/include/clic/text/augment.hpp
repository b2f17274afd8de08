#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "clic/rng.hpp"
#include "clic/text/caption.hpp"
#include "clic/text/tagger.hpp"

namespace clic {

// The positive captions generated for one concatenated image: p1 joins the
// first sentence of each caption, p2 reverses the two, extras join freshly
// sampled non-first sentences in random order.
struct PositiveSet {
    std::string p1;
    std::string p2;
    std::vector<std::string> extras; // p3, p4, ...
    bool degraded = false;           // repetition sampling was needed

    std::vector<std::string> all() const {
        std::vector<std::string> v{p1, p2};
        v.insert(v.end(), extras.begin(), extras.end());
        return v;
    }
};

struct SwapChoice {
    std::size_t index_a = 0; // token index within the first sentence
    std::size_t index_b = 0; // token index within the second sentence
    std::optional<UposTag> tag; // nullopt for the random-pair fallback
};

struct HardNegative {
    std::string text;
    SwapChoice swapped;
};

// Case-insensitive word set, used for forbidden-word checks.
using WordSet = std::unordered_set<std::string>;

PositiveSet make_positives(const Caption& cap_a, const Caption& cap_b, std::size_t k_extra,
                           Rng& rng);

// Swaps one word from each sentence: a uniformly chosen shared non-excluded
// tag when one exists, otherwise any cross-sentence pair of unequal words.
// Surfaces in forbidden_words never move. Throws NoSwapPossible when every
// cross-sentence word pair has equal surfaces.
HardNegative make_hard_negative(const TaggedSentence& sa, const TaggedSentence& sb,
                                const WordSet& forbidden_words, Rng& rng);

// Within-sentence variant used by the single-image baselines: swaps two
// words of the same sentence under the same tag rules.
HardNegative make_hard_negative_single(const TaggedSentence& s, const WordSet& forbidden_words,
                                       Rng& rng);

// Single-space sentence join used for every caption concatenation.
std::string join_sentences(const Sentence& first, const Sentence& second);

} // namespace clic
