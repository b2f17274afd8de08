#include "clic/train/toy_world.hpp"

#include <set>
#include <stdexcept>

#include "clic/rng.hpp"

namespace clic {

const std::vector<std::string>& toy_object_pool() {
    static const std::vector<std::string> pool = {
        "ball", "cube",  "dog",   "cat",   "car",   "tree",  "house", "bird",
        "fish", "chair", "table", "lamp",  "book",  "cup",   "box",   "star",
        "boat", "horse", "apple", "clock", "flower", "kite", "stone", "wheel",
    };
    return pool;
}

const std::vector<std::string>& toy_attribute_pool() {
    static const std::vector<std::string> pool = {
        "red",    "blue",  "green",  "yellow", "purple", "black", "white",  "gray",
        "brown",  "pink",  "golden", "silver", "tiny",   "huge",  "shiny",  "fuzzy",
        "smooth", "rough", "bright", "dark",   "clean",  "dirty", "heavy",  "gentle",
    };
    return pool;
}

namespace {

struct Scene {
    std::size_t a1, o1, a2, o2;
};

std::string binding_phrase(const std::string& attr, const std::string& obj) {
    return "the " + attr + " " + obj;
}

// Bound-pair evidence is much weaker than concept evidence, as in real
// image features: a bag-level representation explains most of the signal,
// so binding must be learned against a shortcut.
constexpr double kBoundScale = 0.10;

} // namespace

ToyWorld make_toy_world(std::size_t n_objects, std::size_t n_attributes, std::size_t n_scenes,
                        double noise_sigma, std::uint64_t seed) {
    if (n_objects < 2 || n_attributes < 2)
        throw std::invalid_argument("make_toy_world: need at least 2 objects and 2 attributes");
    if (n_objects > toy_object_pool().size() || n_attributes > toy_attribute_pool().size())
        throw std::invalid_argument("make_toy_world: vocabulary pool too small");

    ToyWorld world;
    world.n_objects = n_objects;
    world.n_attributes = n_attributes;
    const std::size_t dim = world.feature_dim();
    const std::size_t wino_cap = 250;

    std::set<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> used;
    for (std::size_t idx = 0; idx < n_scenes; ++idx) {
        Rng rng(child_seed(seed, idx));

        Scene sc{};
        for (int attempt = 0; attempt < 100; ++attempt) {
            sc.o1 = rng.uniform_index(n_objects);
            do sc.o2 = rng.uniform_index(n_objects); while (sc.o2 == sc.o1);
            sc.a1 = rng.uniform_index(n_attributes);
            do sc.a2 = rng.uniform_index(n_attributes); while (sc.a2 == sc.a1);
            if (used.insert({sc.a1, sc.o1, sc.a2, sc.o2}).second) break;
        }

        const std::string& a1 = toy_attribute_pool()[sc.a1];
        const std::string& a2 = toy_attribute_pool()[sc.a2];
        const std::string& o1 = toy_object_pool()[sc.o1];
        const std::string& o2 = toy_object_pool()[sc.o2];

        const std::string p1 = binding_phrase(a1, o1) + " and " + binding_phrase(a2, o2) + ".";
        const std::string p2 = binding_phrase(a2, o2) + " and " + binding_phrase(a1, o1) + ".";
        const std::string n_swap = binding_phrase(a2, o1) + " and " + binding_phrase(a1, o2) + ".";
        std::size_t a3;
        do a3 = rng.uniform_index(n_attributes); while (a3 == sc.a1 || a3 == sc.a2);
        const std::string n_replace =
            binding_phrase(toy_attribute_pool()[a3], o1) + " and " + binding_phrase(a2, o2) + ".";

        const auto features_of = [&](std::size_t aa1, std::size_t oo1, std::size_t aa2,
                                     std::size_t oo2) {
            FeatureImage img;
            img.features.assign(dim, 0.0);
            img.features[aa1] = 1.0;
            img.features[aa2] = 1.0;
            img.features[n_attributes + oo1] = 1.0;
            img.features[n_attributes + oo2] = 1.0;
            img.features[n_attributes + n_objects + aa1 * n_objects + oo1] = kBoundScale;
            img.features[n_attributes + n_objects + aa2 * n_objects + oo2] = kBoundScale;
            for (double& v : img.features) v += noise_sigma * rng.normal();
            return img;
        };

        const FeatureImage image = features_of(sc.a1, sc.o1, sc.a2, sc.o2);

        CorpusItem item;
        item.id = "scene-" + std::to_string(idx);
        item.caption = p1 + " there is " + binding_phrase(a1, o1) + ". there is " +
                       binding_phrase(a2, o2) + ".";
        item.features = image.features;
        item.has_features = true;
        world.corpus.items.push_back(std::move(item));

        world.eval_items.push_back({image, p1, p2, n_swap, n_replace});

        if (idx < wino_cap) {
            const FeatureImage twin = features_of(sc.a2, sc.o1, sc.a1, sc.o2);
            world.wino_items.push_back({image, twin, p1, n_swap});
        }
    }
    return world;
}

Lexicon make_toy_lexicon() {
    Lexicon lex(UposTag::X);
    for (const auto& w : toy_object_pool()) lex.add_entry(w, UposTag::NOUN);
    for (const auto& w : toy_attribute_pool()) lex.add_entry(w, UposTag::ADJ);
    lex.add_entry("the", UposTag::DET);
    lex.add_entry("a", UposTag::DET);
    lex.add_entry("and", UposTag::CCONJ);
    lex.add_entry("there", UposTag::PRON);
    lex.add_entry("is", UposTag::AUX);
    return lex;
}

} // namespace clic
