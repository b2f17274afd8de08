#include "clic/eval/scorers.hpp"

#include "clic/error.hpp"

namespace clic {

namespace {

double sim(const std::vector<double>& a, const std::vector<double>& b) {
    return dot({a.data(), a.size()}, {b.data(), b.size()});
}

} // namespace

bool sugarcrepe_itt(const EvalQuadruple& q) {
    return sim(q.image_emb, q.p1_emb) > sim(q.image_emb, q.n_emb);
}

bool sugarcrepepp_itt(const EvalQuadruple& q) {
    const double n = sim(q.image_emb, q.n_emb);
    return sim(q.image_emb, q.p1_emb) > n && sim(q.image_emb, q.p2_emb) > n;
}

bool sugarcrepepp_tot(const EvalQuadruple& q) {
    const double p12 = sim(q.p1_emb, q.p2_emb);
    return p12 > sim(q.p1_emb, q.n_emb) && p12 > sim(q.p2_emb, q.n_emb);
}

WinoGroundScore winoground_scores(const WinoGroundItem& it) {
    const double s00 = sim(it.c0_emb, it.i0_emb);
    const double s01 = sim(it.c0_emb, it.i1_emb);
    const double s10 = sim(it.c1_emb, it.i0_emb);
    const double s11 = sim(it.c1_emb, it.i1_emb);
    WinoGroundScore score;
    score.text = s00 > s10 && s11 > s01;
    score.image = s00 > s01 && s11 > s10;
    score.group = score.text && score.image;
    return score;
}

double recall_at_k(const SimilarityMatrix& sim, const std::vector<std::size_t>& gold,
                   std::size_t k) {
    const Matrix& s = sim.sims;
    if (k < 1 || k > s.cols()) throw KOutOfRange();
    if (gold.size() != s.rows()) throw ShapeMismatch("recall_at_k: one gold index per row");

    std::size_t hits = 0;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        const std::size_t g = gold[i];
        if (g >= s.cols()) throw KOutOfRange("recall_at_k: gold index out of range");
        const double gv = s(i, g);
        // rank = 1 + columns strictly better + earlier columns tied with gold
        std::size_t rank = 1;
        for (std::size_t j = 0; j < s.cols(); ++j) {
            if (j == g) continue;
            if (s(i, j) > gv || (s(i, j) == gv && j < g)) ++rank;
        }
        if (rank <= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(s.rows());
}

} // namespace clic
