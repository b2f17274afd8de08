#pragma once

#include <string>
#include <vector>

#include "clic/image/image.hpp"
#include "clic/text/caption.hpp"
#include "clic/text/lexicon.hpp"
#include "clic/text/tagger.hpp"

namespace clic {

// One JSONL corpus record. Exactly one of image_path / features is set.
struct CorpusItem {
    std::string id;
    std::string caption;
    std::string image_path;         // raster corpora
    std::vector<double> features;   // feature corpora
    bool has_features = false;
};

struct Corpus {
    std::vector<CorpusItem> items;
};

Corpus load_corpus_jsonl(const std::string& path);
void save_corpus_jsonl(const Corpus& corpus, const std::string& path);

// A corpus item after cleaning, splitting and tagging, ready for pairing.
struct DatasetItem {
    std::string id;
    Caption caption;
    TaggedSentence first_tagged;
    std::vector<std::string> first_nouns; // lowercased NOUN surfaces of the first sentence
    Orientation orient = Orientation::Landscape;
    RasterImage raster;      // raster mode
    FeatureImage feature;    // feature mode
    std::string source_path; // raster mode: path the image was loaded from
};

struct Dataset {
    std::vector<DatasetItem> items;
    bool feature_mode = false;

    std::size_t size() const { return items.size(); }
};

// Cleans, splits and tags every caption and loads image data. Raster paths
// are resolved relative to base_dir. All items must be of one mode.
Dataset prepare_dataset(const Corpus& corpus, const Lexicon& lexicon,
                        const std::vector<std::string>& strip_prefixes,
                        const std::string& base_dir = "");

} // namespace clic
