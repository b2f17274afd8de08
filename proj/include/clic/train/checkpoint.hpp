#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "clic/matrix.hpp"
#include "clic/train/adamw.hpp"

namespace clic {

// Versioned little-endian snapshot of the full training state. Reload
// resumes bit-identically: per-step randomness is derived from
// (master_seed, step), so the counters below are the entire rng state.
struct Checkpoint {
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t step = 0;           // completed main steps
    std::uint64_t warmstart_done = 0; // completed warm-start steps
    std::vector<std::string> vocab;
    Matrix text_weights;
    Matrix image_weights;
    AdamWState text_opt;
    AdamWState image_opt;
};

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace clic
