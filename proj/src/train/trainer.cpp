#include "clic/train/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "clic/error.hpp"
#include "clic/losses/gradcheck.hpp"
#include "clic/train/toy_world.hpp"

namespace clic {

namespace {

// Seed domains keep the warm-start, main-loop and init streams disjoint.
constexpr std::uint64_t kTextInitDomain = 0x54455854u;  // "TEXT"
constexpr std::uint64_t kImageInitDomain = 0x494D4745u; // "IMGE"
constexpr std::uint64_t kWarmstartDomain = 0x100000000ull;
constexpr std::uint64_t kMainDomain = 0x200000000ull;
constexpr std::uint64_t kIndexStream = 0xB17C4ull;

std::string full_caption_text(const DatasetItem& item) {
    std::string out;
    for (std::size_t i = 0; i < item.caption.sentences.size(); ++i) {
        if (i > 0) out += " ";
        out += item.caption.sentences[i];
    }
    return out;
}

} // namespace

TrainingExample build_single_image_example(std::size_t i, const Dataset& dataset,
                                           std::size_t k_extra, Rng& rng) {
    const DatasetItem& item = dataset.items[i];
    TrainingExample ex;
    ex.feature = item.feature;
    ex.raster = item.raster;
    ex.image_order = ConcatOrder::AB;
    ex.positives.p1 = item.caption.sentences.front();
    ex.positives.p2 = ex.positives.p1; // shuffling a single sentence is the identity

    std::vector<std::size_t> pool;
    for (std::size_t s = 1; s < item.caption.sentences.size(); ++s) pool.push_back(s);
    if (pool.empty() && k_extra > 0) {
        pool.push_back(0);
        ex.positives.degraded = true;
    }
    std::vector<std::size_t> unused = pool;
    for (std::size_t e = 0; e < k_extra; ++e) {
        std::size_t idx;
        if (!unused.empty()) {
            const std::size_t k = rng.uniform_index(unused.size());
            idx = unused[k];
            unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            ex.positives.degraded = true;
            idx = pool[rng.uniform_index(pool.size())];
        }
        ex.positives.extras.push_back(item.caption.sentences[idx]);
    }
    ex.negative = make_hard_negative_single(item.first_tagged, {}, rng);
    ex.degraded = ex.positives.degraded;
    ex.provenance = {i, i, 0};
    return ex;
}

Trainer::Trainer(const Dataset& dataset, const TrainConfig& cfg) : dataset_(dataset), cfg_(cfg) {
    cfg_.schedule.total_steps = cfg_.total_steps;
    if (dataset_.size() < 2) throw DatasetTooSmall();
    if (!dataset_.feature_mode) throw ConfigError("training requires a feature corpus");
    init_fresh();
}

Trainer::Trainer(const Dataset& dataset, const TrainConfig& cfg, const Checkpoint& resume)
    : dataset_(dataset), cfg_(cfg) {
    cfg_.schedule.total_steps = cfg_.total_steps;
    if (!dataset_.feature_mode) throw ConfigError("training requires a feature corpus");
    restore(resume);
}

void Trainer::init_fresh() {
    std::vector<std::string> captions;
    captions.reserve(dataset_.size());
    for (const auto& item : dataset_.items) captions.push_back(full_caption_text(item));
    // Concatenated captions join sentences from different items, so their
    // junction bigrams never occur inside any one caption. Cover them with
    // the product of sentence-final and sentence-initial words; without
    // this p1 and p2 collapse to the same bag and the uni-modal loss sees
    // a zero gradient.
    std::vector<std::string> finals, initials;
    const auto add_unique = [](std::vector<std::string>& pool, const std::string& w) {
        if (std::find(pool.begin(), pool.end(), w) == pool.end()) pool.push_back(w);
    };
    for (const auto& item : dataset_.items) {
        for (const auto& sentence : item.caption.sentences) {
            const auto words = ToyTextEncoder::caption_tokens(sentence);
            std::size_t n_unigrams = 0;
            for (const auto& w : words)
                if (w.find(' ') == std::string::npos) ++n_unigrams;
            if (n_unigrams == 0) continue;
            add_unique(initials, words.front());
            add_unique(finals, words[n_unigrams - 1]);
        }
    }
    for (const auto& f : finals)
        for (const auto& i : initials) captions.push_back(f + " " + i);
    Rng text_rng(child_seed(cfg_.seed, kTextInitDomain));
    text_ = ToyTextEncoder(ToyTextEncoder::build_vocab(captions), cfg_.emb_dim, text_rng);
    Rng image_rng(child_seed(cfg_.seed, kImageInitDomain));
    image_ = ToyImageEncoder(dataset_.items.front().feature.features.size(), cfg_.emb_dim,
                             image_rng);
    text_opt_ = AdamWState(text_.weights().rows(), text_.weights().cols());
    image_opt_ = AdamWState(image_.weights().rows(), image_.weights().cols());
}

void Trainer::restore(const Checkpoint& ck) {
    Rng dummy(0);
    text_ = ToyTextEncoder(ck.vocab, ck.text_weights.cols(), dummy);
    text_.weights() = ck.text_weights;
    image_ = ToyImageEncoder(ck.image_weights.rows(), ck.image_weights.cols(), dummy);
    image_.weights() = ck.image_weights;
    text_opt_ = ck.text_opt;
    image_opt_ = ck.image_opt;
    steps_done_ = ck.step;
    warmstart_done_ = ck.warmstart_done;
    cfg_.seed = ck.master_seed;
}

Checkpoint Trainer::snapshot() const {
    Checkpoint ck;
    ck.config_hash = cfg_.config_hash;
    ck.master_seed = cfg_.seed;
    ck.step = steps_done_;
    ck.warmstart_done = warmstart_done_;
    ck.vocab = text_.vocab();
    ck.text_weights = text_.weights();
    ck.image_weights = image_.weights();
    ck.text_opt = text_opt_;
    ck.image_opt = image_opt_;
    return ck;
}

std::vector<std::size_t> Trainer::draw_batch_indices(Rng& rng) const {
    std::vector<std::size_t> out(cfg_.batch_size);
    for (auto& idx : out) idx = rng.uniform_index(dataset_.size());
    return out;
}

void Trainer::apply_updates(const Matrix& d_text, const Matrix& d_image, double lr) {
    if (cfg_.freeze != Freeze::Text) adamw_step(text_.weights(), d_text, text_opt_, lr, cfg_.adamw);
    if (cfg_.freeze != Freeze::Vision)
        adamw_step(image_.weights(), d_image, image_opt_, lr, cfg_.adamw);
}

MetricsRow Trainer::clip_step(std::size_t step, std::uint64_t step_seed, double lr) {
    Rng index_rng(child_seed(step_seed, kIndexStream));
    const std::vector<std::size_t> indices = draw_batch_indices(index_rng);

    std::vector<const FeatureImage*> images;
    std::vector<std::string> captions;
    images.reserve(indices.size());
    captions.reserve(indices.size());
    for (const std::size_t i : indices) {
        images.push_back(&dataset_.items[i].feature);
        captions.push_back(dataset_.items[i].caption.sentences.front());
    }

    const auto img_enc = image_.encode(images);
    const auto txt_enc = text_.encode(captions);
    const LossOutput loss = clip_loss(img_enc.emb, txt_enc.emb, cfg_.temperature);

    Matrix d_text(text_.weights().rows(), text_.weights().cols());
    Matrix d_image(image_.weights().rows(), image_.weights().cols());
    text_.accumulate_grad(txt_enc, loss.d_texts[0], d_text);
    image_.accumulate_grad(img_enc, loss.d_image, d_image);
    apply_updates(d_text, d_image, lr);

    return {step, lr, loss.value, loss.value, 0.0, 0.0};
}

MetricsRow Trainer::clic_step(std::size_t step, std::uint64_t step_seed, double lr) {
    Rng index_rng(child_seed(step_seed, kIndexStream));
    const std::vector<std::size_t> indices = draw_batch_indices(index_rng);

    std::vector<TrainingExample> examples;
    if (cfg_.single_image) {
        for (std::size_t k = 0; k < indices.size(); ++k) {
            Rng ex_rng(child_seed(step_seed, k));
            try {
                examples.push_back(
                    build_single_image_example(indices[k], dataset_, cfg_.k_extra, ex_rng));
            } catch (const NoSwapPossible&) {
                ++skipped_;
            }
        }
    } else {
        GenConfig gen{cfg_.k_extra, cfg_.pairing};
        BatchResult batch = build_batch(dataset_, indices, gen, step_seed, 0, cfg_.threads);
        skipped_ += batch.skipped;
        degraded_ += batch.degraded;
        examples = std::move(batch.examples);
    }
    if (examples.empty()) return {step, lr, 0.0, 0.0, 0.0, 0.0};

    std::vector<const FeatureImage*> images;
    images.reserve(examples.size());
    for (const auto& ex : examples) images.push_back(&ex.feature);
    const auto img_enc = image_.encode(images);

    const std::size_t n_pos = 2 + cfg_.k_extra;
    std::vector<ToyTextEncoder::Encoding> pos_encs;
    pos_encs.reserve(n_pos);
    for (std::size_t l = 0; l < n_pos; ++l) {
        std::vector<std::string> captions;
        captions.reserve(examples.size());
        for (const auto& ex : examples) captions.push_back(ex.positives.all()[l]);
        pos_encs.push_back(text_.encode(captions));
    }
    std::vector<std::string> neg_captions;
    neg_captions.reserve(examples.size());
    for (const auto& ex : examples) neg_captions.push_back(ex.negative.text);
    const auto neg_enc = text_.encode(neg_captions);

    Matrix d_text(text_.weights().rows(), text_.weights().cols());
    Matrix d_image(image_.weights().rows(), image_.weights().cols());
    MetricsRow row{step, lr, 0.0, 0.0, 0.0, 0.0};

    if (cfg_.method == TrainMethod::NegClip) {
        const LossOutput loss =
            negclip_batch_loss(img_enc.emb, pos_encs[0].emb, neg_enc.emb, cfg_.temperature);
        image_.accumulate_grad(img_enc, loss.d_image, d_image);
        text_.accumulate_grad(pos_encs[0], loss.d_texts[0], d_text);
        text_.accumulate_grad(neg_enc, loss.d_neg, d_text);
        row.loss_total = loss.value;
        row.loss_cont = loss.value;
    } else {
        EmbeddingBatch batch;
        batch.image = img_enc.emb;
        for (const auto& enc : pos_encs) batch.texts.push_back(enc.emb);
        batch.text_neg = neg_enc.emb;
        batch.temperature = cfg_.temperature;
        batch.validate();
        ClicBreakdown parts;
        const LossOutput loss = clic_total(batch, cfg_.weights, &parts);
        image_.accumulate_grad(img_enc, loss.d_image, d_image);
        for (std::size_t l = 0; l < n_pos; ++l)
            text_.accumulate_grad(pos_encs[l], loss.d_texts[l], d_text);
        if (!loss.d_neg.empty()) text_.accumulate_grad(neg_enc, loss.d_neg, d_text);
        row.loss_total = loss.value;
        row.loss_cont = parts.cont;
        row.loss_sneg = parts.sneg;
        row.loss_uni = parts.uni;
    }

    apply_updates(d_text, d_image, lr);
    return row;
}

TrainResult Trainer::run(std::optional<std::uint64_t> stop_after) {
    TrainResult result;

    const double warm_lr = cfg_.warmstart_lr > 0.0 ? cfg_.warmstart_lr : cfg_.schedule.lr_peak;
    for (std::uint64_t s = warmstart_done_; s < cfg_.warmstart_steps; ++s) {
        clip_step(s, child_seed(cfg_.seed, kWarmstartDomain + s), warm_lr);
        warmstart_done_ = s + 1;
    }

    const std::uint64_t until =
        stop_after ? std::min<std::uint64_t>(cfg_.total_steps, *stop_after) : cfg_.total_steps;
    for (std::uint64_t t = steps_done_; t < until; ++t) {
        const double lr = lr_at(t, cfg_.schedule);
        const std::uint64_t step_seed = child_seed(cfg_.seed, kMainDomain + t);
        const bool concat_iteration = !cfg_.alternate_clip_iters || (t % 2 == 0);
        MetricsRow row = concat_iteration ? clic_step(t, step_seed, lr)
                                          : clip_step(t, step_seed, lr);
        if (!std::isfinite(row.loss_total)) throw NonFinite("training aborted at step " +
                                                            std::to_string(t));
        result.metrics.push_back(row);
        steps_done_ = t + 1;
    }

    result.checkpoint = snapshot();
    result.skipped_examples = skipped_;
    result.degraded_examples = degraded_;
    return result;
}

std::pair<ToyTextEncoder, ToyImageEncoder> encoders_from_checkpoint(const Checkpoint& ck) {
    Rng dummy(0);
    ToyTextEncoder text(ck.vocab, ck.text_weights.cols(), dummy);
    text.weights() = ck.text_weights;
    ToyImageEncoder image(ck.image_weights.rows(), ck.image_weights.cols(), dummy);
    image.weights() = ck.image_weights;
    return {std::move(text), std::move(image)};
}

EncoderGradCheckResult run_encoder_gradient_check(std::uint64_t seed) {
    const ToyWorld world = make_toy_world(3, 3, 10, 0.05, seed);
    const Lexicon lexicon = make_toy_lexicon();
    const Dataset dataset = prepare_dataset(world.corpus, lexicon, default_strip_prefixes());

    GenConfig gen{2, {}};
    const std::vector<std::size_t> indices{0, 3, 5, 7};
    BatchResult batch = build_batch(dataset, indices, gen, child_seed(seed, 77));

    std::vector<std::string> captions;
    for (const auto& item : dataset.items) captions.push_back(full_caption_text(item));
    Rng text_rng(child_seed(seed, kTextInitDomain));
    ToyTextEncoder text(ToyTextEncoder::build_vocab(captions), 6, text_rng);
    Rng image_rng(child_seed(seed, kImageInitDomain));
    ToyImageEncoder image(dataset.items.front().feature.features.size(), 6, image_rng);
    const double temperature = 2.0;

    const auto forward = [&](Matrix* d_text, Matrix* d_image) {
        std::vector<const FeatureImage*> images;
        for (const auto& ex : batch.examples) images.push_back(&ex.feature);
        const auto img_enc = image.encode(images);
        EmbeddingBatch eb;
        eb.image = img_enc.emb;
        std::vector<ToyTextEncoder::Encoding> encs;
        for (std::size_t l = 0; l < 4; ++l) {
            std::vector<std::string> caps;
            for (const auto& ex : batch.examples) caps.push_back(ex.positives.all()[l]);
            encs.push_back(text.encode(caps));
            eb.texts.push_back(encs.back().emb);
        }
        std::vector<std::string> negs;
        for (const auto& ex : batch.examples) negs.push_back(ex.negative.text);
        const auto neg_enc = text.encode(negs);
        eb.text_neg = neg_enc.emb;
        eb.temperature = temperature;
        const LossOutput loss = clic_total(eb, {0.5, 0.5, 1.0});
        if (d_text && d_image) {
            image.accumulate_grad(img_enc, loss.d_image, *d_image);
            for (std::size_t l = 0; l < 4; ++l)
                text.accumulate_grad(encs[l], loss.d_texts[l], *d_text);
            text.accumulate_grad(neg_enc, loss.d_neg, *d_text);
        }
        return loss.value;
    };

    Matrix d_text(text.weights().rows(), text.weights().cols());
    Matrix d_image(image.weights().rows(), image.weights().cols());
    forward(&d_text, &d_image);

    const auto f = [&]() { return forward(nullptr, nullptr); };
    EncoderGradCheckResult result;
    result.worst_rel_err = gradcheck_max_rel_err(f, text.weights(), d_text);
    result.worst_rel_err =
        std::max(result.worst_rel_err, gradcheck_max_rel_err(f, image.weights(), d_image));
    return result;
}

} // namespace clic
