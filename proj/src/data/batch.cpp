#include "clic/data/batch.hpp"

#include <algorithm>
#include <thread>

#include "clic/error.hpp"

namespace clic {

namespace {

int orientation_class(Orientation o) { return o == Orientation::Portrait ? 1 : 0; }

PartnerPick pick_same_orientation(std::size_t i, const Dataset& dataset, Rng& rng) {
    const std::size_t n = dataset.size();
    const int want = orientation_class(dataset.items[i].orient);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const std::size_t j = rng.uniform_index(n);
        if (j != i && orientation_class(dataset.items[j].orient) == want) return {j, false, {}};
    }
    // fall back to any other index
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    return {j, true, {}};
}

} // namespace

PartnerPick pick_partner(std::size_t i, const Dataset& dataset, const PairingStrategy& strategy,
                         Rng& rng) {
    if (dataset.size() < 2) throw DatasetTooSmall();

    if (strategy.kind == PairingStrategy::Kind::CommonNoun) {
        const auto& nouns_i = dataset.items[i].first_nouns;
        std::vector<std::size_t> candidates;
        for (std::size_t j = 0; j < dataset.size(); ++j) {
            if (j == i) continue;
            const auto& nouns_j = dataset.items[j].first_nouns;
            const bool shares = std::any_of(nouns_i.begin(), nouns_i.end(), [&](const auto& n) {
                return std::find(nouns_j.begin(), nouns_j.end(), n) != nouns_j.end();
            });
            if (shares) candidates.push_back(j);
        }
        if (!candidates.empty()) {
            // keep at most max_candidates, sampled without repetition
            std::vector<std::size_t> pool = candidates;
            if (pool.size() > strategy.max_candidates) {
                std::vector<std::size_t> sampled;
                for (std::size_t k = 0; k < strategy.max_candidates; ++k) {
                    const std::size_t pick = rng.uniform_index(pool.size());
                    sampled.push_back(pool[pick]);
                    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
                }
                pool = std::move(sampled);
            }
            const std::size_t j = pool[rng.uniform_index(pool.size())];
            PartnerPick pick{j, false, {}};
            const auto& nouns_j = dataset.items[j].first_nouns;
            for (const auto& n : nouns_i)
                if (std::find(nouns_j.begin(), nouns_j.end(), n) != nouns_j.end() &&
                    std::find(pick.shared_nouns.begin(), pick.shared_nouns.end(), n) ==
                        pick.shared_nouns.end())
                    pick.shared_nouns.push_back(n);
            return pick;
        }
    }
    return pick_same_orientation(i, dataset, rng);
}

TrainingExample build_example(std::size_t i, std::size_t j, const Dataset& dataset,
                              const GenConfig& cfg, const WordSet& forbidden_words, Rng& rng) {
    if (i == j) throw DatasetTooSmall("build_example: partner equals self");
    const DatasetItem& a = dataset.items[i];
    const DatasetItem& b = dataset.items[j];

    TrainingExample ex;
    ex.image_order = rng.coin_flip() ? ConcatOrder::BA : ConcatOrder::AB;
    if (dataset.feature_mode) {
        ex.feature = concat_features(a.feature, b.feature, ex.image_order);
    } else {
        ex.raster = concat_images(a.raster, b.raster, ex.image_order);
        if (cfg.final_resize > 0)
            ex.raster = resize_bilinear(ex.raster, cfg.final_resize, cfg.final_resize);
    }

    ex.positives = make_positives(a.caption, b.caption, cfg.k_extra, rng);
    ex.negative = make_hard_negative(a.first_tagged, b.first_tagged, forbidden_words, rng);
    ex.degraded = ex.positives.degraded;
    ex.provenance = {i, j, 0};
    return ex;
}

namespace {

struct SlotResult {
    std::optional<TrainingExample> example;
    bool degraded = false;
    bool skipped = false;
};

SlotResult build_slot(const Dataset& dataset, std::size_t i, const GenConfig& cfg,
                      std::uint64_t seed) {
    Rng rng(seed);
    const PartnerPick pick = pick_partner(i, dataset, cfg.pairing, rng);
    WordSet forbidden;
    for (const auto& noun : pick.shared_nouns) forbidden.insert(noun);
    SlotResult slot;
    try {
        TrainingExample ex = build_example(i, pick.index, dataset, cfg, forbidden, rng);
        ex.provenance.seed = seed;
        ex.degraded = ex.degraded || pick.degraded;
        slot.degraded = ex.degraded;
        slot.example = std::move(ex);
    } catch (const NoSwapPossible&) {
        slot.skipped = true;
    } catch (const OrientationMismatch&) {
        // degraded partner fallback can pair across orientation classes
        slot.skipped = true;
    }
    return slot;
}

} // namespace

BatchResult build_batch(const Dataset& dataset, const std::vector<std::size_t>& batch_indices,
                        const GenConfig& cfg, std::uint64_t batch_seed,
                        std::uint64_t base_example_index, std::size_t threads) {
    if (dataset.size() < 2) throw DatasetTooSmall();

    std::vector<SlotResult> slots(batch_indices.size());
    const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            slots[k] = build_slot(dataset, batch_indices[k], cfg,
                                  child_seed(batch_seed, base_example_index + k));
    };

    if (threads <= 1 || batch_indices.size() < 2) {
        run_range(0, batch_indices.size());
    } else {
        const std::size_t nthreads = std::min(threads, batch_indices.size());
        std::vector<std::thread> pool;
        const std::size_t chunk = (batch_indices.size() + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(begin + chunk, batch_indices.size());
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    BatchResult result;
    for (auto& slot : slots) {
        if (slot.skipped) {
            ++result.skipped;
        } else if (slot.example) {
            if (slot.degraded) ++result.degraded;
            result.examples.push_back(std::move(*slot.example));
        }
    }
    return result;
}

} // namespace clic
