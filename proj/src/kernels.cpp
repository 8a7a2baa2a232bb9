#include "hyperroad/kernels.hpp"

namespace hyperroad::kernels {

void matmul(const Tensor& a, const Tensor& b, Tensor& c) {
    const int m = a.rows, k = a.cols, n = b.cols;
    #pragma omp parallel for schedule(static)
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

void matmul_bt(const Tensor& a, const Tensor& b, Tensor& c) {
    const int m = a.rows, k = a.cols, n = b.rows;
    #pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        const double* arow = a.row(i);
        double* out = c.row(i);
        for (int j = 0; j < n; ++j) {
            const double* brow = b.row(j);
            double acc = 0.0;
            for (int t = 0; t < k; ++t) acc += arow[t] * brow[t];
            out[j] = acc;
        }
    }
}

void matmul_at(const Tensor& a, const Tensor& b, Tensor& c) {
    const int m = a.cols, k = a.rows, n = b.cols;
    #pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        double* out = c.row(i);
        for (int j = 0; j < n; ++j) out[j] = 0.0;
        for (int t = 0; t < k; ++t) {
            const double av = a.at(t, i);
            const double* brow = b.row(t);
            for (int j = 0; j < n; ++j) out[j] += av * brow[j];
        }
    }
}

void segment_mean(const Tensor& x, const std::vector<std::vector<int>>& sets, Tensor& out) {
    const int n = static_cast<int>(sets.size());
    const int d = x.cols;
    #pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double* o = out.row(i);
        for (int c = 0; c < d; ++c) o[c] = 0.0;
        const auto& members = sets[static_cast<std::size_t>(i)];
        if (members.empty()) continue;
        for (int j : members) {
            const double* xr = x.row(j);
            for (int c = 0; c < d; ++c) o[c] += xr[c];
        }
        const double inv = 1.0 / static_cast<double>(members.size());
        for (int c = 0; c < d; ++c) o[c] *= inv;
    }
}

void segment_mean_backward(const Tensor& grad_out, const std::vector<std::vector<int>>& sets,
                           Tensor& grad_x) {
    const int d = grad_out.cols;
    // parallel over columns: each (row, col) cell of grad_x is touched by one
    // thread only, scans sets in a fixed order
    #pragma omp parallel for schedule(static)
    for (int c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const auto& members = sets[i];
            if (members.empty()) continue;
            const double g = grad_out.at(static_cast<int>(i), c) / static_cast<double>(members.size());
            for (int j : members) grad_x.at(j, c) += g;
        }
    }
}

void relu(const Tensor& x, Tensor& out) {
    const std::size_t n = x.size();
    #pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const double v = x.data[static_cast<std::size_t>(i)];
        out.data[static_cast<std::size_t>(i)] = v > 0.0 ? v : 0.0;
    }
}

void relu_backward(const Tensor& x, const Tensor& grad_out, Tensor& grad_x) {
    const std::size_t n = x.size();
    #pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        if (x.data[static_cast<std::size_t>(i)] > 0.0) {
            grad_x.data[static_cast<std::size_t>(i)] += grad_out.data[static_cast<std::size_t>(i)];
        }
    }
}

void gather_rows(const Tensor& table, const std::vector<int>& indices, Tensor& out) {
    const int n = static_cast<int>(indices.size());
    const int d = table.cols;
    #pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        const double* src = table.row(indices[static_cast<std::size_t>(r)]);
        double* dst = out.row(r);
        for (int c = 0; c < d; ++c) dst[c] = src[c];
    }
}

void gather_rows_backward(const Tensor& grad_out, const std::vector<int>& indices,
                          Tensor& grad_table) {
    const int d = grad_out.cols;
    // repeated indices accumulate in list order regardless of thread count
    #pragma omp parallel for schedule(static)
    for (int c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < indices.size(); ++r) {
            grad_table.at(indices[r], c) += grad_out.at(static_cast<int>(r), c);
        }
    }
}

void rows_dot(const Tensor& a, const Tensor& b, Tensor& out) {
    const int n = a.rows;
    const int d = a.cols;
    #pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        const double* ar = a.row(r);
        const double* br = b.row(r);
        double acc = 0.0;
        for (int c = 0; c < d; ++c) acc += ar[c] * br[c];
        out.at(r, 0) = acc;
    }
}

}  // namespace hyperroad::kernels
