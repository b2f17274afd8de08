#include <doctest.h>

#include <set>

#include "clic/data/batch.hpp"
#include "clic/error.hpp"
#include "clic/train/toy_world.hpp"

using namespace clic;

namespace {

DatasetItem feature_item(const std::string& id, const std::string& caption, const Lexicon& lex,
                         std::vector<double> features) {
    DatasetItem item;
    item.id = id;
    item.caption = split_sentences(caption);
    item.first_tagged = tag_sentence(item.caption.sentences.front(), lex);
    for (const auto& tok : item.first_tagged.tokens)
        if (tok.is_word && tok.tag == UposTag::NOUN)
            item.first_nouns.push_back(to_lower_ascii(tok.surface));
    item.feature.features = std::move(features);
    item.orient = Orientation::Landscape;
    return item;
}

DatasetItem raster_item(const std::string& id, const std::string& caption, const Lexicon& lex,
                        std::size_t w, std::size_t h) {
    DatasetItem item;
    item.id = id;
    item.caption = split_sentences(caption);
    item.first_tagged = tag_sentence(item.caption.sentences.front(), lex);
    item.raster.width = w;
    item.raster.height = h;
    item.raster.data.assign(w * h * 3, 128);
    item.orient = orientation(item.raster);
    return item;
}

std::string serialize(const TrainingExample& ex) {
    std::string out = ex.positives.p1 + "|" + ex.positives.p2;
    for (const auto& e : ex.positives.extras) out += "|" + e;
    out += "|" + ex.negative.text;
    out += "|" + std::to_string(ex.provenance.index_a) + "," +
           std::to_string(ex.provenance.index_b) + "," + std::to_string(ex.provenance.seed);
    out += ex.image_order == ConcatOrder::AB ? "|AB" : "|BA";
    for (double v : ex.feature.features) out += "," + std::to_string(v);
    return out;
}

std::string serialize(const BatchResult& batch) {
    std::string out;
    for (const auto& ex : batch.examples) out += serialize(ex) + "\n";
    out += "skipped=" + std::to_string(batch.skipped);
    out += " degraded=" + std::to_string(batch.degraded);
    return out;
}

} // namespace

TEST_CASE("pick_partner on a 2-item dataset is forced") {
    const Lexicon lex = make_toy_lexicon();
    Dataset ds;
    ds.feature_mode = true;
    ds.items.push_back(feature_item("a", "the red ball and the blue cube.", lex, {1, 0}));
    ds.items.push_back(feature_item("b", "the green dog and the tiny cat.", lex, {0, 1}));
    Rng rng(0);
    CHECK(pick_partner(0, ds, {}, rng).index == 1);
    CHECK(pick_partner(1, ds, {}, rng).index == 0);

    Dataset tiny;
    tiny.items.push_back(ds.items[0]);
    Rng rng2(0);
    CHECK_THROWS_AS(pick_partner(0, tiny, {}, rng2), DatasetTooSmall);
}

TEST_CASE("pick_partner falls back after 100 attempts when orientation never matches") {
    const Lexicon lex = make_toy_lexicon();
    Dataset ds;
    ds.items.push_back(raster_item("query", "the red ball.", lex, 4, 2)); // landscape
    for (int i = 0; i < 3; ++i)
        ds.items.push_back(raster_item("p" + std::to_string(i), "the blue cube.", lex, 2, 4));
    Rng rng(9);
    const PartnerPick pick = pick_partner(0, ds, {}, rng);
    CHECK(pick.degraded);
    CHECK(pick.index != 0);
}

TEST_CASE("common-noun pairing selects the unique sharing item") {
    const Lexicon lex = make_toy_lexicon();
    Dataset ds;
    ds.feature_mode = true;
    ds.items.push_back(feature_item("q", "the red dog and the blue cube.", lex, {1, 0}));
    ds.items.push_back(feature_item("n1", "the green cat and the tiny star.", lex, {0, 1}));
    ds.items.push_back(feature_item("n2", "the huge dog and the pink tree.", lex, {1, 1}));
    ds.items.push_back(feature_item("n3", "the shiny lamp and the dark boat.", lex, {0.5, 0.5}));

    PairingStrategy strategy{PairingStrategy::Kind::CommonNoun, 5};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const PartnerPick pick = pick_partner(0, ds, strategy, rng);
        CHECK(pick.index == 2); // only n2 shares "dog"
        REQUIRE(pick.shared_nouns.size() == 1);
        CHECK(pick.shared_nouns[0] == "dog");
    }
}

TEST_CASE("common-noun pairing falls back to orientation matching when nothing shares") {
    const Lexicon lex = make_toy_lexicon();
    Dataset ds;
    ds.feature_mode = true;
    ds.items.push_back(feature_item("q", "the red dog.", lex, {1, 0}));
    ds.items.push_back(feature_item("n1", "the green cat.", lex, {0, 1}));
    Rng rng(3);
    const PartnerPick pick = pick_partner(0, ds, {PairingStrategy::Kind::CommonNoun, 5}, rng);
    CHECK(pick.index == 1);
    CHECK(pick.shared_nouns.empty());
}

TEST_CASE("shared noun is forbidden from swapping under common-noun pairing") {
    const ToyWorld world = make_toy_world(4, 8, 60, 0.0, 21);
    const Dataset ds = prepare_dataset(world.corpus, make_toy_lexicon(), default_strip_prefixes());
    GenConfig cfg{2, {PairingStrategy::Kind::CommonNoun, 5}};

    std::vector<std::size_t> indices;
    for (std::size_t k = 0; k < 300; ++k) indices.push_back(k % ds.size());
    const BatchResult batch = build_batch(ds, indices, cfg, 77);
    REQUIRE(batch.examples.size() > 200);
    for (const auto& ex : batch.examples) {
        const auto& a = ds.items[ex.provenance.index_a];
        const auto& b = ds.items[ex.provenance.index_b];
        CHECK(ex.provenance.index_a != ex.provenance.index_b);
        // recompute the shared nouns; swapped surfaces must avoid them
        std::set<std::string> shared;
        for (const auto& noun : a.first_nouns)
            for (const auto& other : b.first_nouns)
                if (noun == other) shared.insert(noun);
        const auto& wa = a.first_tagged.tokens[ex.negative.swapped.index_a].surface;
        const auto& wb = b.first_tagged.tokens[ex.negative.swapped.index_b].surface;
        CHECK_FALSE(shared.contains(to_lower_ascii(wa)));
        CHECK_FALSE(shared.contains(to_lower_ascii(wb)));
    }
}

TEST_CASE("build_example is reproducible from its provenance seed") {
    const ToyWorld world = make_toy_world(6, 6, 40, 0.02, 5);
    const Dataset ds = prepare_dataset(world.corpus, make_toy_lexicon(), default_strip_prefixes());
    GenConfig cfg{2, {}};

    const std::vector<std::size_t> indices{0, 5, 11, 17};
    const BatchResult once = build_batch(ds, indices, cfg, 99);
    const BatchResult twice = build_batch(ds, indices, cfg, 99);
    CHECK(serialize(once) == serialize(twice));
}

TEST_CASE("parallel build equals serial build byte for byte") {
    const ToyWorld world = make_toy_world(6, 6, 60, 0.02, 6);
    const Dataset ds = prepare_dataset(world.corpus, make_toy_lexicon(), default_strip_prefixes());
    GenConfig cfg{2, {}};

    std::vector<std::size_t> indices;
    for (std::size_t k = 0; k < 128; ++k) indices.push_back(k % ds.size());
    const BatchResult serial = build_batch(ds, indices, cfg, 1234, 0, 1);
    const BatchResult parallel = build_batch(ds, indices, cfg, 1234, 0, 4);
    CHECK(serialize(serial) == serialize(parallel));
}

TEST_CASE("mismatched-orientation fallback pairs are skipped, not fatal") {
    const Lexicon lex = make_toy_lexicon();
    Dataset ds;
    ds.items.push_back(raster_item("query", "the red ball.", lex, 4, 2)); // lone landscape
    for (int i = 0; i < 4; ++i)
        ds.items.push_back(raster_item("p" + std::to_string(i), "the blue cube.", lex, 2, 4));
    GenConfig cfg{0, {}};
    const BatchResult batch = build_batch(ds, {0, 0, 0}, cfg, 5, 0, 2);
    CHECK(batch.examples.empty());
    CHECK(batch.skipped == 3);
}

TEST_CASE("NoSwapPossible examples are skipped and counted") {
    const Lexicon lex = make_toy_lexicon();
    Dataset ds;
    ds.feature_mode = true;
    ds.items.push_back(feature_item("a", "the cube.", lex, {1, 0}));
    ds.items.push_back(feature_item("b", "the cube.", lex, {0, 1}));
    GenConfig cfg{0, {}};
    const BatchResult batch = build_batch(ds, {0, 1}, cfg, 3);
    CHECK(batch.examples.empty());
    CHECK(batch.skipped == 2);
}

TEST_CASE("partner never equals self over many draws") {
    const ToyWorld world = make_toy_world(6, 6, 30, 0.0, 8);
    const Dataset ds = prepare_dataset(world.corpus, make_toy_lexicon(), default_strip_prefixes());
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const std::size_t i = seed % ds.size();
        CHECK(pick_partner(i, ds, {}, rng).index != i);
    }
}

TEST_CASE("quadratic diversity: 2000 examples over 50 items hit many distinct pairs") {
    const ToyWorld world = make_toy_world(8, 8, 50, 0.0, 9);
    const Dataset ds = prepare_dataset(world.corpus, make_toy_lexicon(), default_strip_prefixes());
    GenConfig cfg{2, {}};
    std::vector<std::size_t> indices;
    for (std::size_t k = 0; k < 2000; ++k) indices.push_back(k % ds.size());
    const BatchResult batch = build_batch(ds, indices, cfg, 10);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& ex : batch.examples) {
        const auto lo = std::min(ex.provenance.index_a, ex.provenance.index_b);
        const auto hi = std::max(ex.provenance.index_a, ex.provenance.index_b);
        pairs.insert({lo, hi});
    }
    CHECK(pairs.size() >= 500);
}

TEST_CASE("degraded flag set when captions cannot supply distinct extras") {
    const Lexicon lex = make_toy_lexicon();
    Dataset ds;
    ds.feature_mode = true;
    ds.items.push_back(feature_item("a", "the red ball.", lex, {1, 0}));
    ds.items.push_back(feature_item("b", "the blue cube and the green dog.", lex, {0, 1}));
    GenConfig cfg{2, {}};
    const BatchResult batch = build_batch(ds, {0}, cfg, 4);
    REQUIRE(batch.examples.size() == 1);
    CHECK(batch.examples[0].degraded);
    CHECK(batch.degraded == 1);
}
