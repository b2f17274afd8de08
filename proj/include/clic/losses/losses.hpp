#pragma once

#include <vector>

#include "clic/matrix.hpp"

namespace clic {

struct LossWeights {
    double lambda_cont = 0.5;
    double lambda_sneg = 0.5;
    double lambda_uni = 1.0;
};

// Row-normalized embeddings for one batch: the image matrix, one text matrix
// per positive caption, an optional hard-negative matrix, and the
// temperature that scales every inner product.
struct EmbeddingBatch {
    Matrix image;              // m x d
    std::vector<Matrix> texts; // L matrices, m x d each
    Matrix text_neg;           // m x d, or empty
    double temperature = 1.0;

    // Checks shapes, finiteness and unit row norms. Losses themselves accept
    // any finite matrices (their gradients are free-space gradients, checked
    // by finite differences); normalization is enforced here, at the
    // encoder/trainer boundary.
    void validate(double norm_tol = 1e-9) const;
};

// Loss value with gradients with respect to each embedding matrix argument.
// Matrices not taken by a loss stay empty.
struct LossOutput {
    double value = 0.0;
    Matrix d_image;
    std::vector<Matrix> d_texts;
    Matrix d_neg;
};

// Symmetric InfoNCE: the average of image-to-text and text-to-image
// cross-entropies with coefficient 1/(2m).
LossOutput clip_loss(const Matrix& img, const Matrix& txt, double tau);

// Image-to-text loss whose per-row softmax runs over the m positive and the
// m batch hard-negative captions, coefficient 1/(2m).
LossOutput negclip_batch_loss(const Matrix& img, const Matrix& txt, const Matrix& txt_neg,
                              double tau);

// Two-way softmax between each positive and the example's own negative,
// coefficient 1/(L*m) over L positive matrices.
LossOutput single_neg_loss(const Matrix& img, const std::vector<Matrix>& txt_pos,
                           const Matrix& txt_neg, double tau);

// Mean row-wise L2 distance between a caption and its reordered paraphrase.
// The gradient at coincident rows (distance < 1e-12) is zero.
LossOutput uni_modal_loss(const Matrix& p1, const Matrix& p2);

// clip_loss extended over L positive matrices, coefficient 1/(2*L*m).
LossOutput multi_positive_clip_loss(const Matrix& img, const std::vector<Matrix>& txt_pos,
                                    double tau);

// Unweighted values of the three terms, for logging.
struct ClicBreakdown {
    double cont = 0.0;
    double sneg = 0.0;
    double uni = 0.0;
};

// Weighted total: lambda_cont * multi-positive contrastive
//               + lambda_sneg * hard-negative
//               + lambda_uni  * uni-modal (texts[0] vs texts[1]).
// Terms with zero weight are skipped entirely.
LossOutput clic_total(const EmbeddingBatch& batch, const LossWeights& w,
                      ClicBreakdown* breakdown = nullptr);

} // namespace clic
