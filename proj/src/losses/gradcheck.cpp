#include "clic/losses/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clic/losses/losses.hpp"
#include "clic/rng.hpp"

namespace clic {

double gradcheck_max_rel_err(const std::function<double()>& f, Matrix& x, const Matrix& analytic,
                             double h, double floor) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const double saved = x(i, j);
            x(i, j) = saved + h;
            const double fp = f();
            x(i, j) = saved - h;
            const double fm = f();
            x(i, j) = saved;
            const double numeric = (fp - fm) / (2.0 * h);
            const double a = analytic(i, j);
            const double rel =
                std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

namespace {

Matrix random_unit_rows(std::size_t m, std::size_t d, Rng& rng) {
    Matrix out(m, d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = rng.normal();
    normalize_rows(out);
    return out;
}

struct Case {
    std::string name;
    double worst = 0.0;
};

} // namespace

GradSuiteResult run_loss_gradient_suite(std::uint64_t seed, std::size_t instances_per_loss,
                                        double tol) {
    Rng rng(seed);
    GradSuiteResult result;

    const std::size_t ms[] = {1, 2, 5};
    const std::size_t ds[] = {4, 8, 16};
    const double taus[] = {0.5, 1.0, 4.0};

    const auto record = [&](const std::string& name, double worst) {
        ++result.instances;
        if (worst >= tol) ++result.failures;
        if (worst > result.worst_rel_err) {
            result.worst_rel_err = worst;
            result.worst_case = name;
        }
    };

    for (std::size_t inst = 0; inst < instances_per_loss; ++inst) {
        const std::size_t m = ms[rng.uniform_index(3)];
        const std::size_t d = ds[rng.uniform_index(3)];
        const double tau = taus[rng.uniform_index(3)];
        std::ostringstream tag;
        tag << "m=" << m << ",d=" << d << ",tau=" << tau << ",inst=" << inst;

        // clip_loss
        {
            Matrix img = random_unit_rows(m, d, rng);
            Matrix txt = random_unit_rows(m, d, rng);
            const LossOutput out = clip_loss(img, txt, tau);
            const auto f = [&]() { return clip_loss(img, txt, tau).value; };
            double worst = gradcheck_max_rel_err(f, img, out.d_image);
            worst = std::max(worst, gradcheck_max_rel_err(f, txt, out.d_texts[0]));
            record("clip_loss " + tag.str(), worst);
        }
        // negclip_batch_loss
        {
            Matrix img = random_unit_rows(m, d, rng);
            Matrix txt = random_unit_rows(m, d, rng);
            Matrix neg = random_unit_rows(m, d, rng);
            const LossOutput out = negclip_batch_loss(img, txt, neg, tau);
            const auto f = [&]() { return negclip_batch_loss(img, txt, neg, tau).value; };
            double worst = gradcheck_max_rel_err(f, img, out.d_image);
            worst = std::max(worst, gradcheck_max_rel_err(f, txt, out.d_texts[0]));
            worst = std::max(worst, gradcheck_max_rel_err(f, neg, out.d_neg));
            record("negclip_batch_loss " + tag.str(), worst);
        }
        // single_neg_loss with 1..4 positives
        {
            const std::size_t n_pos = 1 + rng.uniform_index(4);
            Matrix img = random_unit_rows(m, d, rng);
            std::vector<Matrix> pos;
            for (std::size_t l = 0; l < n_pos; ++l) pos.push_back(random_unit_rows(m, d, rng));
            Matrix neg = random_unit_rows(m, d, rng);
            const LossOutput out = single_neg_loss(img, pos, neg, tau);
            const auto f = [&]() { return single_neg_loss(img, pos, neg, tau).value; };
            double worst = gradcheck_max_rel_err(f, img, out.d_image);
            for (std::size_t l = 0; l < n_pos; ++l)
                worst = std::max(worst, gradcheck_max_rel_err(f, pos[l], out.d_texts[l]));
            worst = std::max(worst, gradcheck_max_rel_err(f, neg, out.d_neg));
            record("single_neg_loss " + tag.str(), worst);
        }
        // uni_modal_loss
        {
            Matrix p1 = random_unit_rows(m, d, rng);
            Matrix p2 = random_unit_rows(m, d, rng);
            const LossOutput out = uni_modal_loss(p1, p2);
            const auto f = [&]() { return uni_modal_loss(p1, p2).value; };
            double worst = gradcheck_max_rel_err(f, p1, out.d_texts[0]);
            worst = std::max(worst, gradcheck_max_rel_err(f, p2, out.d_texts[1]));
            record("uni_modal_loss " + tag.str(), worst);
        }
        // clic_total over 4 positives + negative
        {
            EmbeddingBatch batch;
            batch.image = random_unit_rows(m, d, rng);
            for (int l = 0; l < 4; ++l) batch.texts.push_back(random_unit_rows(m, d, rng));
            batch.text_neg = random_unit_rows(m, d, rng);
            batch.temperature = tau;
            const LossWeights w{0.5, 0.5, 1.0};
            const LossOutput out = clic_total(batch, w);
            const auto f = [&]() { return clic_total(batch, w).value; };
            double worst = gradcheck_max_rel_err(f, batch.image, out.d_image);
            for (std::size_t l = 0; l < 4; ++l)
                worst = std::max(worst, gradcheck_max_rel_err(f, batch.texts[l], out.d_texts[l]));
            worst = std::max(worst, gradcheck_max_rel_err(f, batch.text_neg, out.d_neg));
            record("clic_total " + tag.str(), worst);
        }
    }
    return result;
}

} // namespace clic
