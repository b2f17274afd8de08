#include "clic/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <filesystem>

#include <CLI11.hpp>
#include <json.hpp>

#include "clic/config.hpp"
#include "clic/data/batch.hpp"
#include "clic/error.hpp"
#include "clic/eval/report.hpp"
#include "clic/losses/gradcheck.hpp"
#include "clic/train/toy_world.hpp"
#include "clic/train/trainer.hpp"

namespace clic::cli {

namespace {

using nlohmann::json;

struct World {
    Dataset dataset;
    Lexicon lexicon;
    std::optional<ToyWorld> toy;
};

// relative dataset/lexicon paths resolve against the config file's directory
std::string resolve(const std::string& path, const std::string& config_dir) {
    if (path.empty() || config_dir.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(config_dir) / p).string();
}

World load_world(const Config& cfg, const std::string& config_dir) {
    World world;
    world.lexicon = cfg.lexicon.empty() ? make_toy_lexicon()
                                        : Lexicon::load(resolve(cfg.lexicon, config_dir));
    if (cfg.dataset == "toy") {
        world.toy = make_toy_world(cfg.toy_objects, cfg.toy_attributes, cfg.toy_scenes,
                                   cfg.toy_noise, cfg.toy_seed);
        world.dataset =
            prepare_dataset(world.toy->corpus, world.lexicon, default_strip_prefixes());
    } else {
        const std::string corpus_path = resolve(cfg.dataset, config_dir);
        const Corpus corpus = load_corpus_jsonl(corpus_path);
        // relative image paths inside a corpus resolve against its directory
        const std::string corpus_dir = std::filesystem::path(corpus_path).parent_path().string();
        world.dataset =
            prepare_dataset(corpus, world.lexicon, default_strip_prefixes(), corpus_dir);
    }
    return world;
}

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json example_to_json(const TrainingExample& ex, const Dataset& dataset) {
    json j;
    j["id"] = dataset.items[ex.provenance.index_a].id + "+" +
              dataset.items[ex.provenance.index_b].id;
    j["index_a"] = ex.provenance.index_a;
    j["index_b"] = ex.provenance.index_b;
    j["seed"] = ex.provenance.seed;
    j["order"] = ex.image_order == ConcatOrder::AB ? "AB" : "BA";
    j["degraded"] = ex.degraded;
    j["p1"] = ex.positives.p1;
    j["p2"] = ex.positives.p2;
    j["extras"] = ex.positives.extras;
    j["negative"] = ex.negative.text;
    json swap;
    swap["index_a"] = ex.negative.swapped.index_a;
    swap["index_b"] = ex.negative.swapped.index_b;
    swap["tag"] = ex.negative.swapped.tag ? std::string(to_string(*ex.negative.swapped.tag))
                                          : std::string("random");
    j["swap"] = swap;
    if (dataset.feature_mode) {
        j["features"] = ex.feature.features;
    } else {
        j["image_a"] = dataset.items[ex.provenance.index_a].source_path;
        j["image_b"] = dataset.items[ex.provenance.index_b].source_path;
    }
    return j;
}

int cmd_gen(const Config& cfg, const std::string& config_dir, std::uint64_t seed,
            std::size_t count, const std::string& out_path) {
    const World world = load_world(cfg, config_dir);
    if (world.dataset.size() < 2) throw DatasetTooSmall();

    std::vector<std::size_t> indices(count);
    for (std::size_t k = 0; k < count; ++k) indices[k] = k % world.dataset.size();
    const BatchResult batch =
        build_batch(world.dataset, indices, cfg.gen_config(), seed, 0, cfg.threads);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + out_path);
    json header;
    header["config_hash"] = cfg.hash();
    header["count"] = batch.examples.size();
    header["seed"] = seed;
    out << header.dump() << "\n";
    for (const auto& ex : batch.examples) out << example_to_json(ex, world.dataset).dump() << "\n";
    if (!out) throw IoError("short write: " + out_path);

    std::map<std::string, std::size_t> tag_histogram;
    for (const auto& ex : batch.examples) {
        const std::string key = ex.negative.swapped.tag
                                    ? std::string(to_string(*ex.negative.swapped.tag))
                                    : std::string("random");
        ++tag_histogram[key];
    }
    std::cout << "examples: " << batch.examples.size() << "\n";
    std::cout << "skipped: " << batch.skipped << " (rate "
              << fmt_g17(count ? static_cast<double>(batch.skipped) / count : 0.0) << ")\n";
    std::cout << "degraded: " << batch.degraded << " (rate "
              << fmt_g17(count ? static_cast<double>(batch.degraded) / count : 0.0) << ")\n";
    std::cout << "swap tags:\n";
    for (const auto& [tag, n] : tag_histogram) std::cout << "  " << tag << " " << n << "\n";
    return 0;
}

int cmd_train(const Config& cfg, const std::string& config_dir,
              const std::string& checkpoint_out, const std::string& metrics_out,
              const std::string& resume_path, bool force, std::size_t stop_after) {
    const World world = load_world(cfg, config_dir);
    TrainConfig tc = cfg.train_config();

    std::optional<Trainer> trainer;
    if (!resume_path.empty()) {
        const Checkpoint ck = load_checkpoint(resume_path);
        if (ck.config_hash != cfg.hash() && !force)
            throw HashMismatch("checkpoint config hash does not match (use --force to override)");
        trainer.emplace(world.dataset, tc, ck);
    } else {
        trainer.emplace(world.dataset, tc);
    }

    const TrainResult result =
        stop_after > 0 ? trainer->run(stop_after) : trainer->run();
    save_checkpoint(result.checkpoint, checkpoint_out);

    std::ofstream csv(metrics_out, std::ios::binary);
    if (!csv) throw IoError("cannot write: " + metrics_out);
    csv << "# config_hash=" << cfg.hash() << " seed=" << cfg.seed << "\n";
    csv << "step,lr,loss_total,loss_cont,loss_sneg,loss_uni\n";
    for (const auto& row : result.metrics)
        csv << row.step << "," << fmt_g17(row.lr) << "," << fmt_g17(row.loss_total) << ","
            << fmt_g17(row.loss_cont) << "," << fmt_g17(row.loss_sneg) << ","
            << fmt_g17(row.loss_uni) << "\n";
    if (!csv) throw IoError("short write: " + metrics_out);

    if (!result.metrics.empty()) {
        const auto& last = result.metrics.back();
        std::cout << "final step " << last.step << ": total=" << fmt_g17(last.loss_total)
                  << " cont=" << fmt_g17(last.loss_cont) << " sneg=" << fmt_g17(last.loss_sneg)
                  << " uni=" << fmt_g17(last.loss_uni) << "\n";
    }
    std::cout << "skipped examples: " << result.skipped_examples << "\n";
    std::cout << "checkpoint: " << checkpoint_out << "\n";
    return 0;
}

int cmd_eval(const Config& cfg, const std::string& checkpoint_path, const std::string& suite,
             bool force, const std::string& out_path) {
    if (suite == "gradcheck") {
        const GradSuiteResult losses = run_loss_gradient_suite(cfg.seed, 100);
        std::cout << "loss gradients: " << losses.instances << " instances, worst rel err "
                  << fmt_g17(losses.worst_rel_err) << " (" << losses.worst_case << ")\n";
        const EncoderGradCheckResult enc = run_encoder_gradient_check(cfg.seed);
        std::cout << "encoder gradients: worst rel err " << fmt_g17(enc.worst_rel_err) << "\n";
        if (!losses.ok() || !enc.ok()) {
            std::cout << "gradcheck: FAIL\n";
            return 4;
        }
        std::cout << "gradcheck: PASS\n";
        return 0;
    }
    if (suite != "toy") throw ConfigError("unknown suite '" + suite + "' (toy|gradcheck)");
    if (cfg.dataset != "toy") throw ConfigError("the toy suite requires dataset = toy");

    const Checkpoint ck = load_checkpoint(checkpoint_path);
    if (ck.config_hash != cfg.hash() && !force)
        throw HashMismatch("checkpoint config hash does not match (use --force to override)");

    const auto [text_enc, image_enc] = encoders_from_checkpoint(ck);
    const ToyWorld world = make_toy_world(cfg.toy_objects, cfg.toy_attributes, cfg.toy_scenes,
                                          cfg.toy_noise, cfg.toy_seed);
    Report report = evaluate_suite(text_enc, image_enc,
                                   suite_from_toy_world(world, cfg.eval_max_items));
    report.config_hash = cfg.hash();
    report.seed = cfg.seed;

    std::cout << report.to_table();
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot write: " + out_path);
        out << report.to_json() << "\n";
        if (!out) throw IoError("short write: " + out_path);
    }
    return 0;
}

int cmd_inspect(const Config& cfg, const std::string& config_dir, const std::string& id) {
    const World world = load_world(cfg, config_dir);
    if (world.dataset.size() < 2) throw DatasetTooSmall();

    std::size_t index = 0;
    if (!id.empty()) {
        bool found = false;
        for (std::size_t i = 0; i < world.dataset.size(); ++i)
            if (world.dataset.items[i].id == id) {
                index = i;
                found = true;
                break;
            }
        if (!found) throw UnknownId("no example with id '" + id + "'");
    }

    const DatasetItem& item = world.dataset.items[index];
    std::cout << "id: " << item.id << "\n";
    std::cout << "sentences:\n";
    for (std::size_t s = 0; s < item.caption.sentences.size(); ++s)
        std::cout << "  " << (s + 1) << ". " << item.caption.sentences[s] << "\n";
    std::cout << "first-sentence tags:";
    for (const auto& tok : item.first_tagged.tokens)
        std::cout << " " << tok.surface << "/" << to_string(tok.tag);
    std::cout << "\n";

    Rng rng(child_seed(cfg.seed, index));
    const PartnerPick pick = pick_partner(index, world.dataset, cfg.gen_config().pairing, rng);
    WordSet forbidden;
    for (const auto& noun : pick.shared_nouns) forbidden.insert(noun);
    const TrainingExample ex =
        build_example(index, pick.index, world.dataset, cfg.gen_config(), forbidden, rng);

    std::cout << "partner: " << world.dataset.items[pick.index].id << " (index " << pick.index
              << ")\n";
    if (!pick.shared_nouns.empty()) {
        std::cout << "shared nouns:";
        for (const auto& n : pick.shared_nouns) std::cout << " " << n;
        std::cout << "\n";
    }
    std::cout << "order: " << (ex.image_order == ConcatOrder::AB ? "AB" : "BA") << "\n";
    std::cout << "p1: " << ex.positives.p1 << "\n";
    std::cout << "p2: " << ex.positives.p2 << "\n";
    for (std::size_t e = 0; e < ex.positives.extras.size(); ++e)
        std::cout << "p" << (e + 3) << ": " << ex.positives.extras[e] << "\n";
    std::cout << "negative: " << ex.negative.text << "\n";

    const auto& sa = item.first_tagged;
    const auto& sb = world.dataset.items[pick.index].first_tagged;
    const auto& wa = sa.tokens[ex.negative.swapped.index_a];
    const auto& wb = sb.tokens[ex.negative.swapped.index_b];
    std::cout << "swap: " << wa.surface << " <-> " << wb.surface << " ["
              << (ex.negative.swapped.tag ? to_string(*ex.negative.swapped.tag) : "random")
              << "]\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"concatenation-based contrastive fine-tuning toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string checkpoint_path;
    std::string metrics_path = "metrics.csv";
    std::string resume_path;
    std::string suite = "toy";
    std::string id;
    std::size_t count = 0;
    std::size_t stop_after = 0;
    bool force = false;
    std::optional<std::uint64_t> seed_override;

    CLI::App* gen = app.add_subcommand("gen", "materialize training examples as JSONL");
    gen->add_option("--config", config_path, "config file")->required();
    gen->add_option("--seed", seed_override, "override the config seed");
    gen->add_option("--count", count, "number of examples")->required();
    gen->add_option("--out", out_path, "output JSONL path")->required();

    CLI::App* train = app.add_subcommand("train", "run the training loop");
    train->add_option("--config", config_path, "config file")->required();
    train->add_option("--checkpoint-out", checkpoint_path, "checkpoint output path")
        ->default_val("checkpoint.clic");
    train->add_option("--metrics-out", metrics_path, "metrics CSV path")
        ->default_val("metrics.csv");
    train->add_option("--resume", resume_path, "resume from a checkpoint");
    train->add_option("--stop-after", stop_after, "pause after this many main steps");
    train->add_flag("--force", force, "ignore config-hash mismatch on resume");

    CLI::App* eval = app.add_subcommand("eval", "score a checkpoint or run gradient checks");
    eval->add_option("--config", config_path, "config file")->required();
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint to score");
    eval->add_option("--suite", suite, "toy|gradcheck")->default_val("toy");
    eval->add_flag("--force", force, "ignore config-hash mismatch");
    eval->add_option("--out", out_path, "JSON report path");

    CLI::App* inspect = app.add_subcommand("inspect", "print one example trace");
    inspect->add_option("--config", config_path, "config file")->required();
    inspect->add_option("--id", id, "item id (default: first item)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        Config cfg = load_config(config_path);
        const std::string config_dir =
            std::filesystem::path(config_path).parent_path().string();
        if (seed_override) cfg.seed = *seed_override;
        if (gen->parsed()) return cmd_gen(cfg, config_dir, cfg.seed, count, out_path);
        if (train->parsed())
            return cmd_train(cfg, config_dir, checkpoint_path, metrics_path, resume_path, force,
                             stop_after);
        if (eval->parsed()) {
            if (suite == "toy" && checkpoint_path.empty())
                throw ConfigError("eval --suite toy requires --checkpoint");
            return cmd_eval(cfg, checkpoint_path, suite, force, out_path);
        }
        if (inspect->parsed()) return cmd_inspect(cfg, config_dir, id);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonFinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const HashMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const UnknownId& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 3;
}

} // namespace clic::cli
