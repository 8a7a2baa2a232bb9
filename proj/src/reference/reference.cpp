#include "hyperroad/reference.hpp"

namespace hyperroad::ref {

void matmul(const Tensor& a, const Tensor& b, Tensor& c) {
    const int m = a.rows, k = a.cols, n = b.cols;
    for (int i = 0; i < m; ++i) {
        double* out = c.row(i);
        for (int j = 0; j < n; ++j) out[j] = 0.0;
        const double* arow = a.row(i);
        for (int t = 0; t < k; ++t) {
            const double av = arow[t];
            const double* brow = b.row(t);
            for (int j = 0; j < n; ++j) out[j] += av * brow[j];
        }
    }
}

void segment_mean(const Tensor& x, const std::vector<std::vector<int>>& sets, Tensor& out) {
    const int d = x.cols;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        double* o = out.row(static_cast<int>(i));
        for (int c = 0; c < d; ++c) o[c] = 0.0;
        if (sets[i].empty()) continue;
        for (int j : sets[i]) {
            const double* xr = x.row(j);
            for (int c = 0; c < d; ++c) o[c] += xr[c];
        }
        const double inv = 1.0 / static_cast<double>(sets[i].size());
        for (int c = 0; c < d; ++c) o[c] *= inv;
    }
}

void relu(const Tensor& x, Tensor& out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
    }
}

void gather_rows(const Tensor& table, const std::vector<int>& indices, Tensor& out) {
    const int d = table.cols;
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const double* src = table.row(indices[r]);
        double* dst = out.row(static_cast<int>(r));
        for (int c = 0; c < d; ++c) dst[c] = src[c];
    }
}

void rows_dot(const Tensor& a, const Tensor& b, Tensor& out) {
    for (int r = 0; r < a.rows; ++r) {
        const double* ar = a.row(r);
        const double* br = b.row(r);
        double acc = 0.0;
        for (int c = 0; c < a.cols; ++c) acc += ar[c] * br[c];
        out.at(r, 0) = acc;
    }
}

}  // namespace hyperroad::ref
