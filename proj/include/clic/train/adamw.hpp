#pragma once

#include <cstdint>

#include "clic/matrix.hpp"

namespace clic {

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.98;
    double eps = 1e-8;
    double weight_decay = 0.1;
};

struct AdamWState {
    Matrix m; // first moment
    Matrix v; // second moment
    std::uint64_t t = 0;

    explicit AdamWState(std::size_t rows = 0, std::size_t cols = 0) : m(rows, cols), v(rows, cols) {}
};

// One decoupled-weight-decay update with bias correction.
void adamw_step(Matrix& params, const Matrix& grads, AdamWState& state, double lr,
                const AdamWConfig& cfg);

} // namespace clic
