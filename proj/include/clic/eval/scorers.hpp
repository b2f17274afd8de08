#pragma once

#include <cstddef>
#include <vector>

#include "clic/matrix.hpp"

namespace clic {

// Unit-norm embedding quadruple for one scored item. p2 is ignored by the
// plain image-to-text test.
struct EvalQuadruple {
    std::vector<double> image_emb;
    std::vector<double> p1_emb;
    std::vector<double> p2_emb;
    std::vector<double> n_emb;
};

struct WinoGroundItem {
    std::vector<double> c0_emb;
    std::vector<double> c1_emb;
    std::vector<double> i0_emb;
    std::vector<double> i1_emb;
};

// n_images x n_texts inner products.
struct SimilarityMatrix {
    Matrix sims;
};

// All comparisons are strict; ties never count as success.
bool sugarcrepe_itt(const EvalQuadruple& q);
bool sugarcrepepp_itt(const EvalQuadruple& q);
bool sugarcrepepp_tot(const EvalQuadruple& q);

struct WinoGroundScore {
    bool text = false;
    bool image = false;
    bool group = false;
};
WinoGroundScore winoground_scores(const WinoGroundItem& item);

// Fraction of rows whose gold column ranks in the top k; ties broken by
// ascending column index. Throws KOutOfRange unless 1 <= k <= n_texts.
double recall_at_k(const SimilarityMatrix& sim, const std::vector<std::size_t>& gold,
                   std::size_t k);

} // namespace clic
