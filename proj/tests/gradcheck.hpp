#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hyperroad/tensor.hpp"

namespace hyperroad::testutil {

// Central finite differences (h = 1e-5) against analytic gradients. An
// element passes when its relative error is within tol or its absolute
// difference is below a small floor (components that are genuinely zero).
struct GradCheckResult {
    double max_rel_err = 0.0;  // over elements above the absolute floor
    std::size_t checked = 0;
    std::size_t failed = 0;
    double tol = 0.0;
    std::string worst;
    bool ok(double) const { return failed == 0; }
    bool passed() const { return failed == 0; }
};

inline GradCheckResult gradcheck(const std::vector<Tensor*>& params,
                                 const std::vector<const Tensor*>& grads,
                                 const std::function<double()>& loss,
                                 const std::vector<std::string>& names = {},
                                 double tol = 1e-4, double h = 1e-5) {
    GradCheckResult res;
    res.tol = tol;
    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& t = *params[p];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double saved = t.data[i];
            t.data[i] = saved + h;
            const double up = loss();
            t.data[i] = saved - h;
            const double down = loss();
            t.data[i] = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double analytic = grads[p]->data[i];
            const double diff = std::fabs(numeric - analytic);
            const double scale = std::max(std::fabs(numeric), std::fabs(analytic));
            ++res.checked;
            if (diff <= 1e-7) continue;  // dominated by finite-difference noise
            const double rel = diff / std::max(scale, 1e-12);
            if (rel > res.max_rel_err) {
                res.max_rel_err = rel;
                res.worst = (p < names.size() ? names[p] : "param" + std::to_string(p)) + "[" +
                            std::to_string(i) + "] analytic=" + std::to_string(analytic) +
                            " numeric=" + std::to_string(numeric);
            }
            if (rel > tol) ++res.failed;
        }
    }
    return res;
}

}  // namespace hyperroad::testutil
