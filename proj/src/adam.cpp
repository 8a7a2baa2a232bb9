#include "hyperroad/adam.hpp"

#include <cmath>

#include "hyperroad/errors.hpp"

namespace hyperroad {

AdamState AdamState::like(const std::vector<Tensor*>& params) {
    AdamState s;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Tensor* p : params) {
        s.m.emplace_back(p->rows, p->cols);
        s.v.emplace_back(p->rows, p->cols);
    }
    return s;
}

void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state, double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw ConfigError("adam_step: parameter/gradient/state count mismatch");
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& w = *params[p];
        const Tensor& g = *grads[p];
        if (!w.same_shape(g) || !w.same_shape(state.m[p])) {
            throw ConfigError("adam_step: shape mismatch at parameter " + std::to_string(p));
        }
        Tensor& m = state.m[p];
        Tensor& v = state.v[p];
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(w.size()); ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            m.data[idx] = state.beta1 * m.data[idx] + (1.0 - state.beta1) * g.data[idx];
            v.data[idx] = state.beta2 * v.data[idx] + (1.0 - state.beta2) * g.data[idx] * g.data[idx];
            const double m_hat = m.data[idx] / bc1;
            const double v_hat = v.data[idx] / bc2;
            w.data[idx] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

}  // namespace hyperroad
