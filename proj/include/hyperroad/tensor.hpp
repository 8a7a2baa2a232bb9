#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hyperroad {

// Dense row-major matrix of 64-bit floats. Row vectors are 1 x d.
struct Tensor {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double v : data) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows_init) {
        Tensor t(static_cast<int>(rows_init.size()),
                 rows_init.size() ? static_cast<int>(rows_init.begin()->size()) : 0);
        std::size_t idx = 0;
        for (const auto& r : rows_init) {
            for (double v : r) t.data[idx++] = v;
        }
        return t;
    }

    static Tensor scalar(double v) {
        Tensor t(1, 1);
        t.data[0] = v;
        return t;
    }
};

}  // namespace hyperroad
