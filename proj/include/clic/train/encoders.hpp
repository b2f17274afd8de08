#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "clic/image/image.hpp"
#include "clic/matrix.hpp"
#include "clic/rng.hpp"

namespace clic {

// Linear bag-of-tokens text encoder: caption tokens (lowercased word
// unigrams plus adjacent bigrams) index rows of W, the row mean is
// L2-normalized. Bigrams matter: every swap-based hard negative keeps the
// word multiset of its positive, so a unigram bag could never separate
// them.
class ToyTextEncoder {
public:
    ToyTextEncoder() = default;
    ToyTextEncoder(std::vector<std::string> vocab, std::size_t emb_dim, Rng& init_rng);

    static std::vector<std::string> caption_tokens(const std::string& caption);
    // First-seen order over all captions; index 0 is the reserved UNK row.
    static std::vector<std::string> build_vocab(const std::vector<std::string>& captions);

    struct Encoding {
        Matrix emb;     // m x d, unit rows
        Matrix prenorm; // m x d, token means before normalization
        std::vector<std::vector<std::size_t>> ids; // token ids per row
    };

    Encoding encode(const std::vector<std::string>& captions) const;
    // Chain rule through normalization and the token mean; adds into d_w.
    void accumulate_grad(const Encoding& enc, const Matrix& d_emb, Matrix& d_w) const;

    std::size_t token_id(const std::string& token) const;
    std::size_t vocab_size() const { return vocab_.size(); }
    std::size_t dim() const { return weights_.cols(); }
    Matrix& weights() { return weights_; }
    const Matrix& weights() const { return weights_; }
    const std::vector<std::string>& vocab() const { return vocab_; }

private:
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, std::size_t> index_;
    Matrix weights_; // V x d
};

// Linear image encoder over feature vectors. V has one row per feature of a
// single image; a concatenated input (any multiple of the base dimension)
// is encoded as the sum of its per-block projections, so the same weights
// serve single and concatenated images.
class ToyImageEncoder {
public:
    ToyImageEncoder() = default;
    ToyImageEncoder(std::size_t feat_dim, std::size_t emb_dim, Rng& init_rng);

    struct Encoding {
        Matrix emb;     // m x d, unit rows
        Matrix prenorm; // m x d
        std::vector<std::vector<double>> block_sums; // per row, length feat_dim
    };

    Encoding encode(const std::vector<const FeatureImage*>& images) const;
    void accumulate_grad(const Encoding& enc, const Matrix& d_emb, Matrix& d_v) const;

    std::size_t feat_dim() const { return weights_.rows(); }
    std::size_t dim() const { return weights_.cols(); }
    Matrix& weights() { return weights_; }
    const Matrix& weights() const { return weights_; }

private:
    Matrix weights_; // feat_dim x d
};

// Shared by both encoders: d_prenorm = (d_emb - e (e . d_emb)) / ||z||.
void backprop_row_normalize(std::span<const double> emb_row, double prenorm_norm,
                            std::span<const double> d_emb_row, std::span<double> d_prenorm_row);

} // namespace clic
