#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clic/data/batch.hpp"
#include "clic/data/corpus.hpp"
#include "clic/losses/losses.hpp"
#include "clic/train/adamw.hpp"
#include "clic/train/checkpoint.hpp"
#include "clic/train/encoders.hpp"
#include "clic/train/schedule.hpp"

namespace clic {

enum class Freeze { None, Vision, Text };
enum class TrainMethod { Clic, NegClip };

struct TrainConfig {
    std::size_t batch_size = 64;
    std::size_t total_steps = 2000;
    LrSchedule schedule; // total_steps is mirrored in by the trainer
    AdamWConfig adamw;
    LossWeights weights;
    Freeze freeze = Freeze::None;
    bool alternate_clip_iters = true;
    std::size_t k_extra = 2;
    double temperature = 1.0;
    std::uint64_t seed = 0;

    std::size_t emb_dim = 16;
    TrainMethod method = TrainMethod::Clic;
    bool single_image = false;        // non-concatenated baseline variants
    std::size_t warmstart_steps = 0;  // plain contrastive warm-start phase
    double warmstart_lr = 0.0;        // 0 -> lr_peak
    PairingStrategy pairing;
    std::size_t threads = 1;
    std::uint64_t config_hash = 0; // recorded into the checkpoint
};

struct MetricsRow {
    std::size_t step = 0;
    double lr = 0.0;
    double loss_total = 0.0;
    double loss_cont = 0.0;
    double loss_sneg = 0.0;
    double loss_uni = 0.0;
};

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<MetricsRow> metrics;
    std::size_t skipped_examples = 0;
    std::size_t degraded_examples = 0;
};

// Alternating training loop: even iterations run the concatenation step
// (multi-positive + hard-negative + uni-modal), odd iterations revert to
// standard single-image contrastive training when alternation is on.
class Trainer {
public:
    Trainer(const Dataset& dataset, const TrainConfig& cfg);
    Trainer(const Dataset& dataset, const TrainConfig& cfg, const Checkpoint& resume);

    // Runs to cfg.total_steps, or pauses after stop_after main steps when
    // given; the schedule always spans cfg.total_steps, so a paused and
    // resumed run is bit-identical to an uninterrupted one.
    TrainResult run(std::optional<std::uint64_t> stop_after = std::nullopt);

    const ToyTextEncoder& text_encoder() const { return text_; }
    const ToyImageEncoder& image_encoder() const { return image_; }
    Checkpoint snapshot() const;

private:
    void init_fresh();
    void restore(const Checkpoint& ck);
    MetricsRow clic_step(std::size_t step, std::uint64_t step_seed, double lr);
    MetricsRow clip_step(std::size_t step, std::uint64_t step_seed, double lr);
    void apply_updates(const Matrix& d_text, const Matrix& d_image, double lr);
    std::vector<std::size_t> draw_batch_indices(Rng& rng) const;

    const Dataset& dataset_;
    TrainConfig cfg_;
    ToyTextEncoder text_;
    ToyImageEncoder image_;
    AdamWState text_opt_;
    AdamWState image_opt_;
    std::uint64_t steps_done_ = 0;
    std::uint64_t warmstart_done_ = 0;
    std::size_t skipped_ = 0;
    std::size_t degraded_ = 0;
};

// Single-image example used by the non-concatenated baselines: p2 collapses
// onto p1, extras are single sentences, the negative is a within-sentence
// swap.
TrainingExample build_single_image_example(std::size_t i, const Dataset& dataset,
                                           std::size_t k_extra, Rng& rng);

// End-to-end finite-difference check of d(total loss)/d(encoder weights)
// through normalize(linear(...)) on a small random world.
struct EncoderGradCheckResult {
    double worst_rel_err = 0.0;
    bool ok(double tol = 1e-6) const { return worst_rel_err < tol; }
};
EncoderGradCheckResult run_encoder_gradient_check(std::uint64_t seed);

// Rebuilds the encoder pair stored in a checkpoint.
std::pair<ToyTextEncoder, ToyImageEncoder> encoders_from_checkpoint(const Checkpoint& ck);

} // namespace clic
