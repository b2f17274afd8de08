#pragma once

#include <cstdint>
#include <string>

#include "clic/data/batch.hpp"
#include "clic/train/trainer.hpp"

namespace clic {

// Flat key = value configuration with '#' comments. Every key has a
// default; unknown keys are rejected. The hash of the canonical rendering
// is stamped into every output artifact.
struct Config {
    // data
    std::string dataset = "toy"; // "toy" or a JSONL path
    std::string lexicon;         // lexicon path; empty selects the built-in toy lexicon
    std::string pairing = "random"; // random | common_noun
    std::size_t max_candidates = 5;
    std::size_t k_extra = 2;
    std::size_t final_resize = 0; // raster corpora: square size after concatenation (0 = off)

    // training
    std::size_t batch_size = 64;
    std::size_t total_steps = 2000;
    double warmup_frac = 0.2;
    double lr_start = 1e-7;
    double lr_peak = 1e-6;
    double lr_end = 1e-8;
    double beta1 = 0.9;
    double beta2 = 0.98;
    double adam_eps = 1e-8;
    double weight_decay = 0.1;
    double lambda_cont = 0.5;
    double lambda_sneg = 0.5;
    double lambda_uni = 1.0;
    std::string freeze = "none"; // none | vision | text
    bool alternate = true;
    double temperature = 1.0;
    std::uint64_t seed = 0;
    std::size_t emb_dim = 16;
    std::string method = "clic"; // clic | negclip
    bool single_image = false;
    std::size_t warmstart_steps = 0;
    double warmstart_lr = 0.0; // 0 selects lr_peak
    std::size_t threads = 1;

    // toy world
    std::size_t toy_objects = 8;
    std::size_t toy_attributes = 8;
    std::size_t toy_scenes = 2000;
    double toy_noise = 0.05;
    std::uint64_t toy_seed = 42;
    std::size_t eval_max_items = 0; // 0 = all

    std::string canonical() const; // sorted "key = value" lines
    std::uint64_t hash() const;    // FNV-1a 64 of canonical()

    TrainConfig train_config() const;
    GenConfig gen_config() const;
};

Config parse_config(const std::string& text, const std::string& origin = "<string>");
Config load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

} // namespace clic
