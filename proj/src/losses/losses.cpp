#include "clic/losses/losses.hpp"

#include <algorithm>
#include <cmath>

#include "clic/error.hpp"

namespace clic {

namespace {

void require_finite(const Matrix& m, const char* what) {
    if (!m.all_finite()) throw NonFinite(std::string(what) + ": non-finite entry");
}

void require_nonempty(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.cols() == 0) throw ShapeMismatch(std::string(what) + ": empty matrix");
}

// Scaled similarity S_ij = tau * <a_i, b_j>.
Matrix similarity(const Matrix& a, const Matrix& b, double tau) {
    Matrix s(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) s(i, j) = tau * dot(a.row(i), b.row(j));
    return s;
}

// log sum_k exp(v_k), max-subtracted, summed in index order.
double log_sum_exp(std::span<const double> v) {
    double mx = v[0];
    for (double x : v) mx = std::max(mx, x);
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

} // namespace

void EmbeddingBatch::validate(double norm_tol) const {
    require_nonempty(image, "EmbeddingBatch.image");
    require_finite(image, "EmbeddingBatch.image");
    if (texts.empty()) throw ShapeMismatch("EmbeddingBatch: no text matrices");
    const std::size_t m = image.rows();
    const std::size_t d = image.cols();
    const auto check = [&](const Matrix& t, const char* what) {
        if (t.rows() != m || t.cols() != d) throw ShapeMismatch(std::string(what) + ": shape differs from image");
        require_finite(t, what);
        for (std::size_t i = 0; i < t.rows(); ++i)
            if (std::abs(row_norm(t.row(i)) - 1.0) > norm_tol)
                throw NonFinite(std::string(what) + ": row " + std::to_string(i) + " is not unit-norm");
    };
    for (std::size_t i = 0; i < image.rows(); ++i)
        if (std::abs(row_norm(image.row(i)) - 1.0) > norm_tol)
            throw NonFinite("EmbeddingBatch.image: row " + std::to_string(i) + " is not unit-norm");
    for (const auto& t : texts) check(t, "EmbeddingBatch.texts");
    if (!text_neg.empty()) check(text_neg, "EmbeddingBatch.text_neg");
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw NonFinite("EmbeddingBatch: temperature must be positive and finite");
}

LossOutput clip_loss(const Matrix& img, const Matrix& txt, double tau) {
    require_nonempty(img, "clip_loss.img");
    require_same_shape(img, txt, "clip_loss");
    require_finite(img, "clip_loss.img");
    require_finite(txt, "clip_loss.txt");

    const std::size_t m = img.rows();
    const Matrix s = similarity(img, txt, tau);

    std::vector<double> row_lse(m), col_lse(m);
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) row_lse[i] = log_sum_exp(s.row(i));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) col[i] = s(i, j);
        col_lse[j] = log_sum_exp(col);
    }

    double value = 0.0;
    for (std::size_t i = 0; i < m; ++i) value += (row_lse[i] - s(i, i)) + (col_lse[i] - s(i, i));
    const double coeff = 1.0 / (2.0 * static_cast<double>(m));
    value *= coeff;

    // dL/dS = coeff * (row_softmax + col_softmax - 2I)
    Matrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double v = std::exp(s(i, j) - row_lse[i]) + std::exp(s(i, j) - col_lse[j]);
            if (i == j) v -= 2.0;
            g(i, j) = coeff * v;
        }

    LossOutput out;
    out.value = value;
    out.d_image = Matrix(m, img.cols());
    out.d_texts.assign(1, Matrix(m, img.cols()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double gij = tau * g(i, j);
            for (std::size_t k = 0; k < img.cols(); ++k) {
                out.d_image(i, k) += gij * txt(j, k);
                out.d_texts[0](j, k) += gij * img(i, k);
            }
        }
    if (!std::isfinite(out.value)) throw NonFinite("clip_loss: value is not finite");
    return out;
}

LossOutput negclip_batch_loss(const Matrix& img, const Matrix& txt, const Matrix& txt_neg,
                              double tau) {
    require_nonempty(img, "negclip_batch_loss.img");
    require_same_shape(img, txt, "negclip_batch_loss");
    require_same_shape(img, txt_neg, "negclip_batch_loss(neg)");
    require_finite(img, "negclip_batch_loss.img");
    require_finite(txt, "negclip_batch_loss.txt");
    require_finite(txt_neg, "negclip_batch_loss.txt_neg");

    const std::size_t m = img.rows();
    const Matrix sp = similarity(img, txt, tau);
    const Matrix sn = similarity(img, txt_neg, tau);

    const double coeff = 1.0 / (2.0 * static_cast<double>(m));
    double value = 0.0;
    Matrix gp(m, m), gn(m, m);
    std::vector<double> cand(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) cand[j] = sp(i, j);
        for (std::size_t j = 0; j < m; ++j) cand[m + j] = sn(i, j);
        const double lse = log_sum_exp(cand);
        value += lse - sp(i, i);
        for (std::size_t j = 0; j < m; ++j) {
            gp(i, j) = coeff * (std::exp(sp(i, j) - lse) - (i == j ? 1.0 : 0.0));
            gn(i, j) = coeff * std::exp(sn(i, j) - lse);
        }
    }
    value *= coeff;

    LossOutput out;
    out.value = value;
    out.d_image = Matrix(m, img.cols());
    out.d_texts.assign(1, Matrix(m, img.cols()));
    out.d_neg = Matrix(m, img.cols());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double a = tau * gp(i, j);
            const double b = tau * gn(i, j);
            for (std::size_t k = 0; k < img.cols(); ++k) {
                out.d_image(i, k) += a * txt(j, k) + b * txt_neg(j, k);
                out.d_texts[0](j, k) += a * img(i, k);
                out.d_neg(j, k) += b * img(i, k);
            }
        }
    if (!std::isfinite(out.value)) throw NonFinite("negclip_batch_loss: value is not finite");
    return out;
}

LossOutput single_neg_loss(const Matrix& img, const std::vector<Matrix>& txt_pos,
                           const Matrix& txt_neg, double tau) {
    require_nonempty(img, "single_neg_loss.img");
    if (txt_pos.empty()) throw ShapeMismatch("single_neg_loss: no positive matrices");
    for (const auto& t : txt_pos) {
        require_same_shape(img, t, "single_neg_loss(pos)");
        require_finite(t, "single_neg_loss.pos");
    }
    require_same_shape(img, txt_neg, "single_neg_loss(neg)");
    require_finite(img, "single_neg_loss.img");
    require_finite(txt_neg, "single_neg_loss.neg");

    const std::size_t m = img.rows();
    const std::size_t n_pos = txt_pos.size();
    const double coeff = 1.0 / (static_cast<double>(n_pos) * static_cast<double>(m));

    LossOutput out;
    out.d_image = Matrix(m, img.cols());
    out.d_texts.assign(n_pos, Matrix(m, img.cols()));
    out.d_neg = Matrix(m, img.cols());

    double value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double s_neg = tau * dot(img.row(i), txt_neg.row(i));
        double q_sum = 0.0;
        for (std::size_t l = 0; l < n_pos; ++l) {
            const double s_pos = tau * dot(img.row(i), txt_pos[l].row(i));
            // log(1 + exp(s_neg - s_pos)) evaluated stably
            const double delta = s_neg - s_pos;
            const double term = delta > 0.0 ? delta + std::log1p(std::exp(-delta))
                                            : std::log1p(std::exp(delta));
            value += term;
            const double q = delta > 0.0 ? 1.0 / (1.0 + std::exp(-delta))
                                         : std::exp(delta) / (1.0 + std::exp(delta));
            q_sum += q;
            const double dpos = -coeff * q * tau;
            for (std::size_t k = 0; k < img.cols(); ++k) {
                out.d_texts[l](i, k) += dpos * img(i, k);
                out.d_image(i, k) += dpos * txt_pos[l](i, k);
            }
        }
        const double dneg = coeff * q_sum * tau;
        for (std::size_t k = 0; k < img.cols(); ++k) {
            out.d_neg(i, k) += dneg * img(i, k);
            out.d_image(i, k) += dneg * txt_neg(i, k);
        }
    }
    out.value = coeff * value;
    if (!std::isfinite(out.value)) throw NonFinite("single_neg_loss: value is not finite");
    return out;
}

LossOutput uni_modal_loss(const Matrix& p1, const Matrix& p2) {
    require_nonempty(p1, "uni_modal_loss.p1");
    require_same_shape(p1, p2, "uni_modal_loss");
    require_finite(p1, "uni_modal_loss.p1");
    require_finite(p2, "uni_modal_loss.p2");

    const std::size_t m = p1.rows();
    const double coeff = 1.0 / static_cast<double>(m);

    LossOutput out;
    out.d_texts.assign(2, Matrix(m, p1.cols()));
    double value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double sq = 0.0;
        for (std::size_t k = 0; k < p1.cols(); ++k) {
            const double diff = p1(i, k) - p2(i, k);
            sq += diff * diff;
        }
        const double dist = std::sqrt(sq);
        value += dist;
        if (dist >= 1e-12) {
            for (std::size_t k = 0; k < p1.cols(); ++k) {
                const double g = coeff * (p1(i, k) - p2(i, k)) / dist;
                out.d_texts[0](i, k) = g;
                out.d_texts[1](i, k) = -g;
            }
        }
    }
    out.value = coeff * value;
    if (!std::isfinite(out.value)) throw NonFinite("uni_modal_loss: value is not finite");
    return out;
}

LossOutput multi_positive_clip_loss(const Matrix& img, const std::vector<Matrix>& txt_pos,
                                    double tau) {
    if (txt_pos.empty()) throw ShapeMismatch("multi_positive_clip_loss: no positive matrices");
    const double inv_l = 1.0 / static_cast<double>(txt_pos.size());

    LossOutput out;
    out.d_image = Matrix(img.rows(), img.cols());
    out.d_texts.assign(txt_pos.size(), Matrix(img.rows(), img.cols()));
    for (std::size_t l = 0; l < txt_pos.size(); ++l) {
        LossOutput part = clip_loss(img, txt_pos[l], tau);
        out.value += inv_l * part.value;
        out.d_image.add_scaled(part.d_image, inv_l);
        out.d_texts[l].add_scaled(part.d_texts[0], inv_l);
    }
    return out;
}

LossOutput clic_total(const EmbeddingBatch& batch, const LossWeights& w,
                      ClicBreakdown* breakdown) {
    if (w.lambda_cont < 0.0 || w.lambda_sneg < 0.0 || w.lambda_uni < 0.0 ||
        (w.lambda_cont == 0.0 && w.lambda_sneg == 0.0 && w.lambda_uni == 0.0))
        throw ConfigError("clic_total: weights must be non-negative with at least one positive");
    if (batch.texts.empty()) throw ShapeMismatch("clic_total: no positive matrices");
    if (w.lambda_uni > 0.0 && batch.texts.size() < 2)
        throw ShapeMismatch("clic_total: uni-modal term needs p1 and p2");
    if (w.lambda_sneg > 0.0 && batch.text_neg.empty())
        throw ShapeMismatch("clic_total: hard-negative term needs a negative matrix");

    const std::size_t m = batch.image.rows();
    const std::size_t d = batch.image.cols();
    LossOutput out;
    out.d_image = Matrix(m, d);
    out.d_texts.assign(batch.texts.size(), Matrix(m, d));
    if (!batch.text_neg.empty()) out.d_neg = Matrix(m, d);

    if (w.lambda_cont > 0.0) {
        LossOutput cont = multi_positive_clip_loss(batch.image, batch.texts, batch.temperature);
        if (breakdown) breakdown->cont = cont.value;
        out.value += w.lambda_cont * cont.value;
        out.d_image.add_scaled(cont.d_image, w.lambda_cont);
        for (std::size_t l = 0; l < batch.texts.size(); ++l)
            out.d_texts[l].add_scaled(cont.d_texts[l], w.lambda_cont);
    }
    if (w.lambda_sneg > 0.0) {
        LossOutput sneg = single_neg_loss(batch.image, batch.texts, batch.text_neg,
                                          batch.temperature);
        if (breakdown) breakdown->sneg = sneg.value;
        out.value += w.lambda_sneg * sneg.value;
        out.d_image.add_scaled(sneg.d_image, w.lambda_sneg);
        for (std::size_t l = 0; l < batch.texts.size(); ++l)
            out.d_texts[l].add_scaled(sneg.d_texts[l], w.lambda_sneg);
        out.d_neg.add_scaled(sneg.d_neg, w.lambda_sneg);
    }
    if (w.lambda_uni > 0.0) {
        LossOutput uni = uni_modal_loss(batch.texts[0], batch.texts[1]);
        if (breakdown) breakdown->uni = uni.value;
        out.value += w.lambda_uni * uni.value;
        out.d_texts[0].add_scaled(uni.d_texts[0], w.lambda_uni);
        out.d_texts[1].add_scaled(uni.d_texts[1], w.lambda_uni);
    }
    if (!std::isfinite(out.value)) throw NonFinite("clic_total: value is not finite");
    return out;
}

} // namespace clic
