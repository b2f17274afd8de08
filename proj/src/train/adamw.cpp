#include "clic/train/adamw.hpp"

#include <cmath>

#include "clic/error.hpp"

namespace clic {

void adamw_step(Matrix& params, const Matrix& grads, AdamWState& state, double lr,
                const AdamWConfig& cfg) {
    require_same_shape(params, grads, "adamw_step");
    require_same_shape(params, state.m, "adamw_step(moments)");

    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));

    auto& p = params.data();
    const auto& g = grads.data();
    auto& m = state.m.data();
    auto& v = state.v.data();
    for (std::size_t k = 0; k < p.size(); ++k) {
        m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g[k];
        v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g[k] * g[k];
        const double m_hat = m[k] / bc1;
        const double v_hat = v[k] / bc2;
        p[k] -= lr * (m_hat / (std::sqrt(v_hat) + cfg.eps) + cfg.weight_decay * p[k]);
    }
}

} // namespace clic
