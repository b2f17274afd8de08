#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clic/data/corpus.hpp"
#include "clic/image/image.hpp"

namespace clic {

// One scored scene: the image features plus the caption quadruple for
// swap-style and replace-style tests.
struct ToyEvalItem {
    FeatureImage image;
    std::string p1;        // "the {a1} {o1} and the {a2} {o2}."
    std::string p2;        // clause-reversed paraphrase
    std::string n_swap;    // the two attributes exchanged
    std::string n_replace; // one attribute replaced by an unused one
};

// A scene and its attribute-swapped twin with their captions.
struct ToyWinoItem {
    FeatureImage i0, i1;
    std::string c0, c1;
};

struct ToyWorld {
    Corpus corpus; // training corpus: feature items with 3-sentence captions
    std::vector<ToyEvalItem> eval_items;
    std::vector<ToyWinoItem> wino_items;
    std::size_t n_objects = 0;
    std::size_t n_attributes = 0;

    std::size_t feature_dim() const {
        return n_objects + n_attributes + n_objects * n_attributes;
    }
};

// Scenes bind two distinct (attribute, object) pairs; features are the
// concept multi-hot plus the bound-pair two-hot with gaussian noise.
// Bindings are sampled without exact duplicates while possible.
ToyWorld make_toy_world(std::size_t n_objects, std::size_t n_attributes, std::size_t n_scenes,
                        double noise_sigma, std::uint64_t seed);

// In-memory lexicon covering exactly the toy vocabulary.
Lexicon make_toy_lexicon();

// Word pools backing the toy world, in feature-index order.
const std::vector<std::string>& toy_object_pool();
const std::vector<std::string>& toy_attribute_pool();

} // namespace clic
