#include "clic/eval/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "clic/error.hpp"

namespace clic {

using nlohmann::json;

EvalSuiteInput suite_from_toy_world(const ToyWorld& world, std::size_t max_items) {
    EvalSuiteInput input;
    const std::size_t n = max_items == 0 ? world.eval_items.size()
                                         : std::min(max_items, world.eval_items.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& item = world.eval_items[i];
        input.items.push_back({item.image, item.p1, item.p2, item.n_swap, "swap"});
        input.items.push_back({item.image, item.p1, item.p2, item.n_replace, "replace"});
        input.retrieval_images.push_back(item.image);
        input.retrieval_captions.push_back(item.p1);
    }
    const std::size_t nw = max_items == 0 ? world.wino_items.size()
                                          : std::min(max_items, world.wino_items.size());
    for (std::size_t i = 0; i < nw; ++i) {
        const auto& w = world.wino_items[i];
        input.wino.push_back({w.i0, w.i1, w.c0, w.c1});
    }
    return input;
}

namespace {

std::vector<double> row_vec(const Matrix& m, std::size_t i) {
    const auto r = m.row(i);
    return {r.begin(), r.end()};
}

} // namespace

Report evaluate_suite(const ToyTextEncoder& text_enc, const ToyImageEncoder& image_enc,
                      const EvalSuiteInput& input) {
    if (input.items.empty()) throw EmptySuite();

    Report report;

    // quadruples
    {
        std::vector<const FeatureImage*> images;
        std::vector<std::string> p1s, p2s, ns;
        for (const auto& item : input.items) {
            images.push_back(&item.image);
            p1s.push_back(item.p1);
            p2s.push_back(item.p2);
            ns.push_back(item.n);
        }
        const Matrix img = image_enc.encode(images).emb;
        const Matrix p1 = text_enc.encode(p1s).emb;
        const Matrix p2 = text_enc.encode(p2s).emb;
        const Matrix n = text_enc.encode(ns).emb;
        for (std::size_t i = 0; i < input.items.size(); ++i) {
            EvalQuadruple q{row_vec(img, i), row_vec(p1, i), row_vec(p2, i), row_vec(n, i)};
            auto& cat = report.categories[input.items[i].category];
            ++cat.count;
            cat.sc_itt_hits += sugarcrepe_itt(q) ? 1 : 0;
            cat.scpp_itt_hits += sugarcrepepp_itt(q) ? 1 : 0;
            cat.scpp_tot_hits += sugarcrepepp_tot(q) ? 1 : 0;
        }
    }

    // winoground
    for (const auto& w : input.wino) {
        std::vector<const FeatureImage*> images{&w.i0, &w.i1};
        const Matrix img = image_enc.encode(images).emb;
        const Matrix txt = text_enc.encode({w.c0, w.c1}).emb;
        WinoGroundItem item{row_vec(txt, 0), row_vec(txt, 1), row_vec(img, 0), row_vec(img, 1)};
        const WinoGroundScore score = winoground_scores(item);
        ++report.wino_count;
        report.wino_text_hits += score.text ? 1 : 0;
        report.wino_image_hits += score.image ? 1 : 0;
        report.wino_group_hits += score.group ? 1 : 0;
    }

    // retrieval
    if (!input.retrieval_images.empty()) {
        std::vector<const FeatureImage*> images;
        for (const auto& img : input.retrieval_images) images.push_back(&img);
        const Matrix img = image_enc.encode(images).emb;
        const Matrix txt = text_enc.encode(input.retrieval_captions).emb;
        const std::size_t n = img.rows();
        SimilarityMatrix i2t{Matrix(n, n)};
        SimilarityMatrix t2i{Matrix(n, n)};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double s = dot(img.row(i), txt.row(j));
                i2t.sims(i, j) = s;
                t2i.sims(j, i) = s;
            }
        std::vector<std::size_t> gold(n);
        for (std::size_t i = 0; i < n; ++i) gold[i] = i;
        report.text_r1 = recall_at_k(i2t, gold, 1);
        report.text_r5 = recall_at_k(i2t, gold, std::min<std::size_t>(5, n));
        report.image_r1 = recall_at_k(t2i, gold, 1);
        report.image_r5 = recall_at_k(t2i, gold, std::min<std::size_t>(5, n));
    }

    return report;
}

double Report::itt_average_equal() const {
    if (categories.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& [name, cat] : categories) acc += cat.scpp_itt();
    return acc / static_cast<double>(categories.size());
}

double Report::itt_average_weighted() const {
    std::size_t hits = 0, total = 0;
    for (const auto& [name, cat] : categories) {
        hits += cat.scpp_itt_hits;
        total += cat.count;
    }
    return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

std::string Report::to_json() const {
    json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    // the benchmark's own TOT rule is unpublished; this report uses the
    // symmetric pairwise comparison
    j["tot_rule"] = "symmetric_pairwise";
    for (const auto& [name, cat] : categories) {
        j["categories"][name] = {
            {"count", cat.count},
            {"sc_itt", cat.sc_itt()},
            {"scpp_itt", cat.scpp_itt()},
            {"scpp_tot", cat.scpp_tot()},
        };
    }
    j["itt_average"] = {{"equal", itt_average_equal()}, {"weighted", itt_average_weighted()}};
    if (wino_count > 0) {
        j["winoground"] = {
            {"count", wino_count},
            {"text", static_cast<double>(wino_text_hits) / wino_count},
            {"image", static_cast<double>(wino_image_hits) / wino_count},
            {"group", static_cast<double>(wino_group_hits) / wino_count},
        };
    }
    j["retrieval"] = {
        {"text_r1", text_r1},
        {"text_r5", text_r5},
        {"image_r1", image_r1},
        {"image_r5", image_r5},
    };
    return j.dump(2);
}

std::string Report::to_table() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << std::left << std::setw(12) << "category" << std::right << std::setw(8) << "count"
       << std::setw(10) << "SC-ITT" << std::setw(10) << "ITT" << std::setw(10) << "TOT" << "\n";
    for (const auto& [name, cat] : categories) {
        os << std::left << std::setw(12) << name << std::right << std::setw(8) << cat.count
           << std::setw(10) << cat.sc_itt() << std::setw(10) << cat.scpp_itt() << std::setw(10)
           << cat.scpp_tot() << "\n";
    }
    os << std::left << std::setw(12) << "itt-avg" << std::right << std::setw(8) << ""
       << std::setw(10) << itt_average_equal() << std::setw(10) << itt_average_weighted()
       << std::setw(10) << "" << "\n";
    if (wino_count > 0) {
        os << std::left << std::setw(12) << "winoground" << std::right << std::setw(8)
           << wino_count << std::setw(10)
           << static_cast<double>(wino_text_hits) / wino_count << std::setw(10)
           << static_cast<double>(wino_image_hits) / wino_count << std::setw(10)
           << static_cast<double>(wino_group_hits) / wino_count << "\n";
    }
    os << std::left << std::setw(12) << "retrieval" << std::right << std::setw(8) << "r1/r5"
       << std::setw(10) << text_r1 << std::setw(10) << text_r5 << std::setw(10) << image_r1
       << std::setw(10) << image_r5 << "\n";
    return os.str();
}

} // namespace clic
