#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clic/data/corpus.hpp"
#include "clic/rng.hpp"
#include "clic/text/augment.hpp"

namespace clic {

struct PairingStrategy {
    enum class Kind { RandomSameOrientation, CommonNoun };
    Kind kind = Kind::RandomSameOrientation;
    std::size_t max_candidates = 5; // CommonNoun only
};

struct PartnerPick {
    std::size_t index = 0;
    bool degraded = false;                 // orientation fallback was taken
    std::vector<std::string> shared_nouns; // CommonNoun only; excluded from swapping
};

struct Provenance {
    std::size_t index_a = 0;
    std::size_t index_b = 0;
    std::uint64_t seed = 0; // child seed that reproduces the example
};

struct TrainingExample {
    RasterImage raster;      // raster corpora
    FeatureImage feature;    // feature corpora
    ConcatOrder image_order = ConcatOrder::AB;
    PositiveSet positives;
    HardNegative negative;
    Provenance provenance;
    bool degraded = false;
};

struct GenConfig {
    std::size_t k_extra = 2;
    PairingStrategy pairing;
    std::size_t final_resize = 0; // >0: square-resize rasters after concatenation
};

// RandomSameOrientation: uniform over indices != i in the same orientation
// class, up to 100 resample attempts, then any index != i (degraded).
// CommonNoun: uniform over up to max_candidates items whose first sentence
// shares a noun, falling back to RandomSameOrientation when none.
PartnerPick pick_partner(std::size_t i, const Dataset& dataset, const PairingStrategy& strategy,
                         Rng& rng);

// Draw order is fixed (image order coin, positives, hard negative) so
// (i, j, seed) reproduces the example exactly.
TrainingExample build_example(std::size_t i, std::size_t j, const Dataset& dataset,
                              const GenConfig& cfg, const WordSet& forbidden_words, Rng& rng);

struct BatchResult {
    std::vector<TrainingExample> examples;
    std::size_t skipped = 0;  // NoSwapPossible pairs
    std::size_t degraded = 0; // degraded positives or partner fallback
};

// Emits one example per batch index. Example k draws everything from
// child_seed(batch_seed, base_example_index + k), so a threaded build equals
// the serial one byte for byte.
BatchResult build_batch(const Dataset& dataset, const std::vector<std::size_t>& batch_indices,
                        const GenConfig& cfg, std::uint64_t batch_seed,
                        std::uint64_t base_example_index = 0, std::size_t threads = 1);

} // namespace clic
