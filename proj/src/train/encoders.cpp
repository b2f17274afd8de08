#include "clic/train/encoders.hpp"

#include <cctype>
#include <cmath>

#include "clic/error.hpp"
#include "clic/text/lexicon.hpp"

namespace clic {

namespace {

void gaussian_init(Matrix& w, std::size_t emb_dim, Rng& rng) {
    const double sigma = 1.0 / std::sqrt(static_cast<double>(emb_dim));
    for (double& v : w.data()) v = sigma * rng.normal();
}

std::vector<std::string> word_stream(const std::string& caption) {
    std::vector<std::string> words;
    std::string current;
    const auto flush = [&]() {
        // strip leading/trailing punctuation, keep interior characters
        std::size_t b = 0, e = current.size();
        while (b < e && std::ispunct(static_cast<unsigned char>(current[b]))) ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(current[e - 1]))) --e;
        if (e > b) words.push_back(to_lower_ascii(current.substr(b, e - b)));
        current.clear();
    };
    for (char c : caption) {
        if (std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            current.push_back(c);
    }
    flush();
    return words;
}

} // namespace

std::vector<std::string> ToyTextEncoder::caption_tokens(const std::string& caption) {
    const std::vector<std::string> words = word_stream(caption);
    std::vector<std::string> tokens = words;
    for (std::size_t i = 0; i + 1 < words.size(); ++i)
        tokens.push_back(words[i] + " " + words[i + 1]);
    return tokens;
}

std::vector<std::string> ToyTextEncoder::build_vocab(const std::vector<std::string>& captions) {
    std::vector<std::string> vocab{"<unk>"};
    std::unordered_map<std::string, std::size_t> seen{{"<unk>", 0}};
    for (const auto& caption : captions) {
        for (auto& tok : caption_tokens(caption)) {
            if (seen.emplace(tok, vocab.size()).second) vocab.push_back(tok);
        }
    }
    return vocab;
}

ToyTextEncoder::ToyTextEncoder(std::vector<std::string> vocab, std::size_t emb_dim, Rng& init_rng)
    : vocab_(std::move(vocab)), weights_(vocab_.size(), emb_dim) {
    for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
    gaussian_init(weights_, emb_dim, init_rng);
}

std::size_t ToyTextEncoder::token_id(const std::string& token) const {
    const auto it = index_.find(token);
    return it == index_.end() ? 0 : it->second;
}

void backprop_row_normalize(std::span<const double> emb_row, double prenorm_norm,
                            std::span<const double> d_emb_row, std::span<double> d_prenorm_row) {
    const double n = prenorm_norm > 0.0 ? prenorm_norm : 1.0;
    double inner = 0.0;
    for (std::size_t k = 0; k < emb_row.size(); ++k) inner += emb_row[k] * d_emb_row[k];
    for (std::size_t k = 0; k < emb_row.size(); ++k)
        d_prenorm_row[k] = (d_emb_row[k] - emb_row[k] * inner) / n;
}

ToyTextEncoder::Encoding ToyTextEncoder::encode(const std::vector<std::string>& captions) const {
    Encoding enc;
    const std::size_t m = captions.size();
    const std::size_t d = dim();
    enc.emb = Matrix(m, d);
    enc.prenorm = Matrix(m, d);
    enc.ids.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto tokens = caption_tokens(captions[i]);
        if (tokens.empty()) tokens.push_back("<unk>");
        auto& ids = enc.ids[i];
        ids.reserve(tokens.size());
        for (const auto& tok : tokens) ids.push_back(token_id(tok));
        const double inv_n = 1.0 / static_cast<double>(ids.size());
        for (const std::size_t id : ids)
            for (std::size_t k = 0; k < d; ++k) enc.prenorm(i, k) += weights_(id, k);
        for (std::size_t k = 0; k < d; ++k) enc.prenorm(i, k) *= inv_n;
        const double n = row_norm(enc.prenorm.row(i));
        const double inv = n > 0.0 ? 1.0 / n : 1.0;
        for (std::size_t k = 0; k < d; ++k) enc.emb(i, k) = enc.prenorm(i, k) * inv;
    }
    return enc;
}

void ToyTextEncoder::accumulate_grad(const Encoding& enc, const Matrix& d_emb, Matrix& d_w) const {
    require_same_shape(enc.emb, d_emb, "ToyTextEncoder::accumulate_grad");
    const std::size_t d = dim();
    std::vector<double> dz(d);
    for (std::size_t i = 0; i < enc.emb.rows(); ++i) {
        backprop_row_normalize(enc.emb.row(i), row_norm(enc.prenorm.row(i)), d_emb.row(i), dz);
        const double inv_n = 1.0 / static_cast<double>(enc.ids[i].size());
        for (const std::size_t id : enc.ids[i])
            for (std::size_t k = 0; k < d; ++k) d_w(id, k) += dz[k] * inv_n;
    }
}

ToyImageEncoder::ToyImageEncoder(std::size_t feat_dim, std::size_t emb_dim, Rng& init_rng)
    : weights_(feat_dim, emb_dim) {
    gaussian_init(weights_, emb_dim, init_rng);
}

ToyImageEncoder::Encoding ToyImageEncoder::encode(
    const std::vector<const FeatureImage*>& images) const {
    Encoding enc;
    const std::size_t m = images.size();
    const std::size_t f = feat_dim();
    const std::size_t d = dim();
    enc.emb = Matrix(m, d);
    enc.prenorm = Matrix(m, d);
    enc.block_sums.assign(m, std::vector<double>(f, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        const auto& feat = images[i]->features;
        if (feat.empty() || feat.size() % f != 0)
            throw ShapeMismatch("ToyImageEncoder: feature size " + std::to_string(feat.size()) +
                                " is not a multiple of " + std::to_string(f));
        auto& sums = enc.block_sums[i];
        for (std::size_t p = 0; p < feat.size(); ++p) sums[p % f] += feat[p];
        for (std::size_t p = 0; p < f; ++p) {
            const double s = sums[p];
            if (s == 0.0) continue;
            for (std::size_t k = 0; k < d; ++k) enc.prenorm(i, k) += s * weights_(p, k);
        }
        const double n = row_norm(enc.prenorm.row(i));
        const double inv = n > 0.0 ? 1.0 / n : 1.0;
        for (std::size_t k = 0; k < d; ++k) enc.emb(i, k) = enc.prenorm(i, k) * inv;
    }
    return enc;
}

void ToyImageEncoder::accumulate_grad(const Encoding& enc, const Matrix& d_emb,
                                      Matrix& d_v) const {
    require_same_shape(enc.emb, d_emb, "ToyImageEncoder::accumulate_grad");
    const std::size_t f = feat_dim();
    const std::size_t d = dim();
    std::vector<double> dz(d);
    for (std::size_t i = 0; i < enc.emb.rows(); ++i) {
        backprop_row_normalize(enc.emb.row(i), row_norm(enc.prenorm.row(i)), d_emb.row(i), dz);
        const auto& sums = enc.block_sums[i];
        for (std::size_t p = 0; p < f; ++p) {
            const double s = sums[p];
            if (s == 0.0) continue;
            for (std::size_t k = 0; k < d; ++k) d_v(p, k) += s * dz[k];
        }
    }
}

} // namespace clic
