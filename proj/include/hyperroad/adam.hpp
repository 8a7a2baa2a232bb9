#pragma once

#include <vector>

#include "hyperroad/tensor.hpp"

namespace hyperroad {

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long step = 0;
    std::vector<Tensor> m;  // first moments, one per parameter
    std::vector<Tensor> v;  // second moments

    static AdamState like(const std::vector<Tensor*>& params);
};

// Bias-corrected Adam update in place. params and grads are aligned with the
// moment vectors; a zero gradient leaves the parameter unchanged on the first
// step and the counter still advances.
void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state, double lr);

}  // namespace hyperroad
