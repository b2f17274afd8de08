#include "clic/data/corpus.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "clic/error.hpp"

namespace clic {

using nlohmann::json;

Corpus load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus: " + path);
    Corpus corpus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw IoError(path + ":" + std::to_string(lineno) + ": bad JSON: " + e.what());
        }
        CorpusItem item;
        if (!obj.contains("id") || !obj.contains("caption"))
            throw IoError(path + ":" + std::to_string(lineno) + ": missing 'id' or 'caption'");
        item.id = obj["id"].get<std::string>();
        item.caption = obj["caption"].get<std::string>();
        if (obj.contains("features")) {
            item.features = obj["features"].get<std::vector<double>>();
            item.has_features = true;
        } else if (obj.contains("image")) {
            item.image_path = obj["image"].get<std::string>();
        } else {
            throw IoError(path + ":" + std::to_string(lineno) + ": need 'image' or 'features'");
        }
        corpus.items.push_back(std::move(item));
    }
    return corpus;
}

void save_corpus_jsonl(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write corpus: " + path);
    for (const auto& item : corpus.items) {
        json obj;
        obj["id"] = item.id;
        obj["caption"] = item.caption;
        if (item.has_features)
            obj["features"] = item.features;
        else
            obj["image"] = item.image_path;
        out << obj.dump() << "\n";
    }
    if (!out) throw IoError("short write: " + path);
}

Dataset prepare_dataset(const Corpus& corpus, const Lexicon& lexicon,
                        const std::vector<std::string>& strip_prefixes,
                        const std::string& base_dir) {
    Dataset ds;
    bool saw_feature = false;
    bool saw_raster = false;
    for (const auto& raw : corpus.items) {
        DatasetItem item;
        item.id = raw.id;
        const std::string text = clean_caption({raw.id, raw.caption}, strip_prefixes);
        item.caption = split_sentences(text);
        item.first_tagged = tag_sentence(item.caption.sentences.front(), lexicon);
        for (const auto& tok : item.first_tagged.tokens)
            if (tok.is_word && tok.tag == UposTag::NOUN)
                item.first_nouns.push_back(to_lower_ascii(tok.surface));

        if (raw.has_features) {
            saw_feature = true;
            item.feature.features = raw.features;
            item.orient = Orientation::Landscape; // feature vectors have no aspect
        } else {
            saw_raster = true;
            std::filesystem::path p(raw.image_path);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            item.raster = read_ppm(p.string());
            item.orient = orientation(item.raster);
            item.source_path = raw.image_path;
        }
        ds.items.push_back(std::move(item));
    }
    if (saw_feature && saw_raster)
        throw ConfigError("corpus mixes raster and feature items");
    ds.feature_mode = saw_feature;
    return ds;
}

} // namespace clic
