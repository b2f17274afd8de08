// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and thresholds are pinned here, in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "clic/data/batch.hpp"
#include "clic/eval/report.hpp"
#include "clic/eval/scorers.hpp"
#include "clic/losses/gradcheck.hpp"
#include "clic/losses/losses.hpp"
#include "clic/train/schedule.hpp"
#include "clic/train/toy_world.hpp"
#include "clic/train/trainer.hpp"

using namespace clic;

namespace {

struct Outcome {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<Outcome> outcomes;

template <typename F>
void criterion(const std::string& name, F&& body) {
    Outcome out;
    out.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        out.detail = body(out.pass);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcomes.push_back(out);
    std::printf("[%s] %-28s %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", out.name.c_str(),
                out.detail.c_str(), out.seconds);
    std::fflush(stdout);
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

Matrix random_unit(std::size_t m, std::size_t d, Rng& rng) {
    Matrix out(m, d);
    for (auto& v : out.data()) v = rng.normal();
    normalize_rows(out);
    return out;
}

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[0].size(); ++j) m(i, j) = rows[i][j];
    normalize_rows(m);
    return m;
}

// ---------------------------------------------------------------- losses --

std::string check_formula_oracles(bool& pass) {
    double worst = 0.0;
    const auto track = [&](double got, double want) {
        worst = std::max(worst, rel_err(got, want));
    };

    const Matrix one = from_rows({{0.6, 0.8}});
    track(clip_loss(one, one, 1.0).value + 1.0, 1.0); // exact zero

    const Matrix eye = from_rows({{1, 0}, {0, 1}});
    track(clip_loss(eye, eye, 1.0).value, std::log1p(std::exp(-1.0)));

    const Matrix img1 = from_rows({{1, 0}});
    track(negclip_batch_loss(img1, img1, img1, 1.0).value, 0.5 * std::log(2.0));

    const Matrix ortho = from_rows({{0, 1}});
    track(single_neg_loss(img1, {ortho}, ortho, 1.0).value, std::log(2.0));
    const Matrix anti = from_rows({{-1, 0}});
    track(single_neg_loss(img1, {img1}, anti, 1.0).value, std::log1p(std::exp(-2.0)));

    track(uni_modal_loss(from_rows({{1, 0}}), from_rows({{0, 1}})).value, std::sqrt(2.0));

    // frozen golden scalar for the weighted total on the fixture batch
    EmbeddingBatch batch;
    batch.image = from_rows({{1, 2, 0, 0}, {0, 1, 2, 0}, {0, 0, 1, 2}});
    batch.texts = {from_rows({{2, 1, 0, 0}, {0, 2, 1, 0}, {1, 0, 0, 2}}),
                   from_rows({{1, 1, 1, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}}),
                   from_rows({{3, 1, 0, 1}, {1, 3, 0, 0}, {0, 1, 3, 1}}),
                   from_rows({{1, 0, 2, 1}, {2, 0, 1, 1}, {1, 1, 0, 3}})};
    batch.text_neg = from_rows({{0, 1, 0, 2}, {2, 1, 1, 0}, {0, 2, 2, 1}});
    batch.temperature = 2.0;
    std::ifstream golden_in(std::string(CLIC_SOURCE_DIR) + "/tests/golden/clic_total_golden.txt");
    double golden = 0.0;
    golden_in >> golden;
    track(clic_total(batch, {0.5, 0.5, 1.0}).value, golden);

    pass = worst < 1e-12;
    std::ostringstream os;
    os << "worst rel err " << worst;
    return os.str();
}

std::string check_gradient_suite(bool& pass) {
    const GradSuiteResult losses = run_loss_gradient_suite(2024, 100);
    const EncoderGradCheckResult enc = run_encoder_gradient_check(2024);
    pass = losses.ok(1e-6) && enc.ok(1e-6);
    std::ostringstream os;
    os << losses.instances << " loss instances, worst " << losses.worst_rel_err
       << "; encoder worst " << enc.worst_rel_err;
    return os.str();
}

std::string check_reduction_identities(bool& pass) {
    Rng rng(99);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const Matrix img = random_unit(5, 8, rng);
        const Matrix txt = random_unit(5, 8, rng);
        const Matrix neg = random_unit(5, 8, rng);

        EmbeddingBatch batch;
        batch.image = img;
        batch.texts = {txt, txt, txt, txt};
        batch.temperature = 1.0;
        worst = std::max(worst, rel_err(clic_total(batch, {1.0, 0.0, 0.0}).value,
                                        clip_loss(img, txt, 1.0).value));

        const double l1 = single_neg_loss(img, {txt}, neg, 1.0).value;
        const double l4 = single_neg_loss(img, {txt, txt, txt, txt}, neg, 1.0).value;
        worst = std::max(worst, rel_err(l1, l4));
    }
    pass = worst < 1e-12;
    std::ostringstream os;
    os << "worst rel err " << worst;
    return os.str();
}

// -------------------------------------------------------------- pipeline --

std::string serialize_batch(const BatchResult& batch) {
    std::string out;
    for (const auto& ex : batch.examples) {
        out += ex.positives.p1 + "|" + ex.positives.p2;
        for (const auto& e : ex.positives.extras) out += "|" + e;
        out += "|" + ex.negative.text + "|" + std::to_string(ex.provenance.index_a) + "," +
               std::to_string(ex.provenance.index_b) + "," + std::to_string(ex.provenance.seed) +
               (ex.image_order == ConcatOrder::AB ? "|AB\n" : "|BA\n");
    }
    return out;
}

std::string check_pipeline_properties(bool& pass) {
    const ToyWorld world = make_toy_world(8, 8, 60, 0.0, 4242);
    const Lexicon lexicon = make_toy_lexicon();
    const Dataset dataset = prepare_dataset(world.corpus, lexicon, default_strip_prefixes());

    const std::size_t n_examples = 10000;
    std::vector<std::size_t> indices(n_examples);
    for (std::size_t k = 0; k < n_examples; ++k) indices[k] = k % dataset.size();
    const GenConfig cfg{2, {}};

    const BatchResult serial = build_batch(dataset, indices, cfg, 777, 0, 1);
    const BatchResult parallel = build_batch(dataset, indices, cfg, 777, 0, 4);
    const BatchResult repeat = build_batch(dataset, indices, cfg, 777, 0, 1);

    std::size_t multiset_ok = 0, two_pos_ok = 0, tag_ok = 0, tag_total = 0, unequal_ok = 0;
    const auto token_multiset = [&](const std::string& text) {
        std::multiset<std::string> out;
        for (const auto& t : tag_sentence(text, lexicon).tokens) out.insert(t.surface);
        return out;
    };
    for (const auto& ex : serial.examples) {
        if (token_multiset(ex.negative.text) == token_multiset(ex.positives.p1)) ++multiset_ok;

        const TaggedSentence before = tag_sentence(ex.positives.p1, lexicon);
        const TaggedSentence after = tag_sentence(ex.negative.text, lexicon);
        std::size_t diffs = 0;
        if (before.tokens.size() == after.tokens.size()) {
            for (std::size_t i = 0; i < before.tokens.size(); ++i)
                if (before.tokens[i].surface != after.tokens[i].surface) ++diffs;
        }
        if (diffs == 2) ++two_pos_ok;

        const auto& sa = dataset.items[ex.provenance.index_a].first_tagged;
        const auto& sb = dataset.items[ex.provenance.index_b].first_tagged;
        const auto& wa = sa.tokens[ex.negative.swapped.index_a];
        const auto& wb = sb.tokens[ex.negative.swapped.index_b];
        if (ex.negative.swapped.tag) {
            ++tag_total;
            if (wa.tag == *ex.negative.swapped.tag && wb.tag == *ex.negative.swapped.tag) ++tag_ok;
        }
        if (wa.surface != wb.surface) ++unequal_ok;
    }

    const std::size_t n = serial.examples.size();
    const bool parallel_equal = serialize_batch(serial) == serialize_batch(parallel);
    const bool repeat_equal = serialize_batch(serial) == serialize_batch(repeat);
    // every toy pair shares a category, so the tag must always be set
    pass = n == n_examples && multiset_ok == n && two_pos_ok == n && tag_total == n &&
           tag_ok == n && unequal_ok == n && parallel_equal && repeat_equal &&
           serial.skipped == 0;
    std::ostringstream os;
    os << n << " examples; multiset " << multiset_ok << "; two-pos " << two_pos_ok << "; tags "
       << tag_ok << "/" << tag_total << "; unequal " << unequal_ok << "; parallel=serial "
       << (parallel_equal ? "yes" : "NO") << "; reproducible " << (repeat_equal ? "yes" : "NO");
    return os.str();
}

std::string check_scheduler(bool& pass) {
    LrSchedule s; // defaults: 1e-7 -> 1e-6 -> 1e-8, warmup 20%
    s.total_steps = 1000;
    const double e0 = std::abs(lr_at(0, s) - 1e-7);
    const double e1 = std::abs(lr_at(warmup_end_step(s), s) - 1e-6);
    const double e2 = std::abs(lr_at(s.total_steps, s) - 1e-8);
    pass = e0 < 1e-12 && e1 < 1e-12 && e2 < 1e-12;
    std::ostringstream os;
    os << "endpoint errors " << e0 << ", " << e1 << ", " << e2;
    return os.str();
}

// --------------------------------------------------------------- scorers --

std::string check_scorers(bool& pass) {
    Rng rng(31337);
    bool ok = true;

    // recall vs a full-sort oracle on 50 random 20x20 matrices
    for (int t = 0; t < 50 && ok; ++t) {
        SimilarityMatrix sim{Matrix(20, 20)};
        for (auto& v : sim.sims.data()) v = rng.uniform_real() * 2.0 - 1.0;
        std::vector<std::size_t> gold(20);
        for (auto& g : gold) g = rng.uniform_index(20);
        for (std::size_t k = 1; k <= 20; ++k) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < 20; ++i) {
                std::vector<std::size_t> order(20);
                std::iota(order.begin(), order.end(), 0);
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return sim.sims(i, a) > sim.sims(i, b);
                });
                const auto pos = std::find(order.begin(), order.end(), gold[i]) - order.begin();
                if (static_cast<std::size_t>(pos) < k) ++hits;
            }
            if (recall_at_k(sim, gold, k) != static_cast<double>(hits) / 20.0) ok = false;
        }
    }

    // monotone in k, 1.0 at k = n
    {
        SimilarityMatrix sim{Matrix(12, 12)};
        for (auto& v : sim.sims.data()) v = rng.uniform_real();
        std::vector<std::size_t> gold(12);
        for (auto& g : gold) g = rng.uniform_index(12);
        double prev = 0.0;
        for (std::size_t k = 1; k <= 12; ++k) {
            const double r = recall_at_k(sim, gold, k);
            if (r < prev) ok = false;
            prev = r;
        }
        if (prev != 1.0) ok = false;
    }

    // ties never count as success
    {
        EvalQuadruple q;
        q.image_emb = {1, 0, 0};
        q.p1_emb = {1, 0, 0};
        q.p2_emb = {1, 0, 0};
        q.n_emb = {1, 0, 0};
        if (sugarcrepe_itt(q) || sugarcrepepp_itt(q) || sugarcrepepp_tot(q)) ok = false;
        WinoGroundItem w{{1, 0}, {1, 0}, {1, 0}, {1, 0}};
        const auto s = winoground_scores(w);
        if (s.text || s.image || s.group) ok = false;
    }

    // orthogonal-transform invariance on random quadruples
    {
        const std::size_t d = 6;
        std::vector<std::vector<double>> q;
        while (q.size() < d) {
            std::vector<double> v(d);
            for (auto& x : v) x = rng.normal();
            for (const auto& u : q) {
                double proj = 0.0;
                for (std::size_t k = 0; k < d; ++k) proj += v[k] * u[k];
                for (std::size_t k = 0; k < d; ++k) v[k] -= proj * u[k];
            }
            double sq = 0.0;
            for (double x : v) sq += x * x;
            if (sq < 1e-8) continue;
            for (auto& x : v) x /= std::sqrt(sq);
            q.push_back(v);
        }
        const auto rotate_by = [&](const std::vector<double>& v) {
            std::vector<double> out(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k) out[i] += q[i][k] * v[k];
            return out;
        };
        const auto rand_unit = [&]() {
            std::vector<double> v(d);
            double sq = 0.0;
            for (auto& x : v) {
                x = rng.normal();
                sq += x * x;
            }
            for (auto& x : v) x /= std::sqrt(sq);
            return v;
        };
        for (int t = 0; t < 100; ++t) {
            EvalQuadruple a{rand_unit(), rand_unit(), rand_unit(), rand_unit()};
            EvalQuadruple b{rotate_by(a.image_emb), rotate_by(a.p1_emb), rotate_by(a.p2_emb),
                            rotate_by(a.n_emb)};
            if (sugarcrepe_itt(a) != sugarcrepe_itt(b)) ok = false;
            if (sugarcrepepp_itt(a) != sugarcrepepp_itt(b)) ok = false;
            if (sugarcrepepp_tot(a) != sugarcrepepp_tot(b)) ok = false;
        }
    }

    pass = ok;
    return ok ? "recall oracle, monotonicity, ties, orthogonal invariance" : "mismatch found";
}

// ------------------------------------------------------- toy reproduction --

struct ToyRunScores {
    double swap_itt = 0.0;
    double text_r1 = 0.0;
};

// Calibrated once against the brute-force-verified pipeline and frozen:
// at this capacity and schedule the contrastive-only run plateaus around
// 0.78 swap ITT while full training reaches ~0.94 (margin ~0.15 over five
// seeds), with retrieval at parity or better.
TrainConfig toy_base_config(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.total_steps = 2000;
    cfg.schedule = {2e-3, 2e-2, 2e-4, 0.2, 2000};
    cfg.adamw = {0.9, 0.98, 1e-8, 0.1};
    cfg.emb_dim = 32;
    cfg.temperature = 10.0;
    cfg.seed = seed;
    cfg.warmstart_steps = 300;
    cfg.warmstart_lr = 2e-2;
    return cfg;
}

TrainConfig c1_config(std::uint64_t seed) {
    TrainConfig cfg = toy_base_config(seed);
    cfg.weights = {1.0, 0.0, 0.0};
    cfg.k_extra = 0;
    cfg.alternate_clip_iters = false;
    return cfg;
}

TrainConfig c5_config(std::uint64_t seed) {
    TrainConfig cfg = toy_base_config(seed);
    cfg.weights = {0.5, 0.5, 1.0};
    cfg.k_extra = 2;
    cfg.alternate_clip_iters = true;
    return cfg;
}

ToyRunScores score_run(const Dataset& dataset, const ToyWorld& world, const TrainConfig& cfg,
                       std::size_t eval_items) {
    Trainer trainer(dataset, cfg);
    trainer.run();
    const Report report = evaluate_suite(trainer.text_encoder(), trainer.image_encoder(),
                                         suite_from_toy_world(world, eval_items));
    return {report.categories.at("swap").scpp_itt(), report.text_r1};
}

std::string check_toy_reproduction(bool& pass) {
    const ToyWorld world = make_toy_world(8, 8, 2000, 0.05, 3001);
    const Dataset dataset =
        prepare_dataset(world.corpus, make_toy_lexicon(), default_strip_prefixes());
    const std::size_t eval_items = 400;

    double c1_itt = 0.0, c1_r1 = 0.0, c5_itt = 0.0, c5_r1 = 0.0;
    const std::size_t n_seeds = 5;
    for (std::uint64_t seed = 0; seed < n_seeds; ++seed) {
        const ToyRunScores c1 = score_run(dataset, world, c1_config(seed), eval_items);
        const ToyRunScores c5 = score_run(dataset, world, c5_config(seed), eval_items);
        c1_itt += c1.swap_itt;
        c1_r1 += c1.text_r1;
        c5_itt += c5.swap_itt;
        c5_r1 += c5.text_r1;
    }
    c1_itt /= n_seeds;
    c1_r1 /= n_seeds;
    c5_itt /= n_seeds;
    c5_r1 /= n_seeds;

    const bool itt_margin = c5_itt - c1_itt >= 0.10;
    const bool retrieval_ok = c5_r1 >= c1_r1 - 0.02;
    pass = itt_margin && retrieval_ok;
    std::ostringstream os;
    os << "swap ITT " << c1_itt << " -> " << c5_itt << " (margin " << (c5_itt - c1_itt)
       << "); text R@1 " << c1_r1 << " -> " << c5_r1;
    return os.str();
}

// --------------------------------------------------------------- ablation --

std::string check_ablation_expressibility(bool& pass) {
    const ToyWorld world = make_toy_world(8, 8, 400, 0.05, 3002);
    const Dataset dataset =
        prepare_dataset(world.corpus, make_toy_lexicon(), default_strip_prefixes());

    const auto base = [&]() {
        TrainConfig cfg = toy_base_config(7);
        cfg.total_steps = 300;
        cfg.schedule.total_steps = 300;
        cfg.warmstart_steps = 100;
        return cfg;
    };

    std::vector<std::pair<std::string, TrainConfig>> configs;
    {
        TrainConfig c1 = base();
        c1.weights = {1.0, 0.0, 0.0};
        c1.k_extra = 0;
        c1.alternate_clip_iters = false;
        configs.emplace_back("C1", c1);
        TrainConfig c2 = c1;
        c2.weights = {0.5, 0.5, 0.0};
        configs.emplace_back("C2", c2);
        TrainConfig c3 = c2;
        c3.k_extra = 2;
        configs.emplace_back("C3", c3);
        TrainConfig c4 = c3;
        c4.weights = {0.5, 0.5, 1.0};
        configs.emplace_back("C4", c4);
        TrainConfig c5 = c4;
        c5.alternate_clip_iters = true;
        configs.emplace_back("C5", c5);
        for (const auto& [name, concat_cfg] :
             std::vector<std::pair<std::string, TrainConfig>>{{"B1", c1}, {"B2", c2},
                                                              {"B3", c3}, {"B4", c5}}) {
            TrainConfig b = concat_cfg;
            b.single_image = true;
            configs.emplace_back(name, b);
        }
        TrainConfig negclip = base();
        negclip.method = TrainMethod::NegClip;
        negclip.single_image = true;
        negclip.freeze = Freeze::Vision;
        negclip.alternate_clip_iters = false;
        negclip.k_extra = 0;
        configs.emplace_back("NegCLIP", negclip);
    }

    std::set<std::string> reports;
    Checkpoint c1_ck, c2_ck;
    for (const auto& [name, cfg] : configs) {
        Trainer trainer(dataset, cfg);
        const TrainResult result = trainer.run();
        const Report report = evaluate_suite(trainer.text_encoder(), trainer.image_encoder(),
                                             suite_from_toy_world(world, 300));
        reports.insert(report.to_json());
        if (name == "C1") c1_ck = result.checkpoint;
        if (name == "C2") c2_ck = result.checkpoint;
    }

    // held-out batch: the hard-negative term must be strictly lower after
    // training with it (C2) than without it (C1)
    const GenConfig gen{2, {}};
    std::vector<std::size_t> held_out;
    for (std::size_t k = 0; k < 64; ++k) held_out.push_back((k * 5) % dataset.size());
    const BatchResult batch = build_batch(dataset, held_out, gen, 909090);

    const auto sneg_value = [&](const Checkpoint& ck) {
        auto [text, image] = encoders_from_checkpoint(ck);
        std::vector<const FeatureImage*> images;
        for (const auto& ex : batch.examples) images.push_back(&ex.feature);
        const Matrix img = image.encode(images).emb;
        std::vector<Matrix> texts;
        for (std::size_t l = 0; l < 4; ++l) {
            std::vector<std::string> caps;
            for (const auto& ex : batch.examples) caps.push_back(ex.positives.all()[l]);
            texts.push_back(text.encode(caps).emb);
        }
        std::vector<std::string> negs;
        for (const auto& ex : batch.examples) negs.push_back(ex.negative.text);
        const Matrix neg = text.encode(negs).emb;
        return single_neg_loss(img, texts, neg, 10.0).value;
    };
    const double c1_sneg = sneg_value(c1_ck);
    const double c2_sneg = sneg_value(c2_ck);

    const bool distinct = reports.size() == configs.size();
    const bool trend = c2_sneg < c1_sneg;
    pass = distinct && trend;
    std::ostringstream os;
    os << reports.size() << "/" << configs.size() << " distinct reports; held-out sneg "
       << c1_sneg << " (C1) vs " << c2_sneg << " (C2)";
    return os.str();
}

} // namespace

int main() {
    criterion("formula-oracles", check_formula_oracles);
    criterion("gradient-suite", check_gradient_suite);
    criterion("reduction-identities", check_reduction_identities);
    criterion("pipeline-properties", check_pipeline_properties);
    criterion("scheduler-endpoints", check_scheduler);
    criterion("scorer-oracles", check_scorers);
    criterion("toy-reproduction", check_toy_reproduction);
    criterion("ablation-expressibility", check_ablation_expressibility);

    std::size_t failed = 0;
    for (const auto& out : outcomes)
        if (!out.pass) ++failed;
    if (failed > 0) {
        std::printf("%zu criterion(s) failed\n", failed);
        return 1;
    }
    std::printf("all %zu criteria passed\n", outcomes.size());
    return 0;
}
