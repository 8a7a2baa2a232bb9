#pragma once

#include <vector>

#include "hyperroad/tensor.hpp"

namespace hyperroad::kernels {

// OpenMP-parallel dense kernels. Every output cell is written by exactly one
// thread and inner accumulation order is fixed, so results are bit-identical
// across thread counts. Serial twins live in hyperroad::ref for testing and
// benchmarking.

// c = a * b
void matmul(const Tensor& a, const Tensor& b, Tensor& c);

// c = a * b^T
void matmul_bt(const Tensor& a, const Tensor& b, Tensor& c);

// c = a^T * b
void matmul_at(const Tensor& a, const Tensor& b, Tensor& c);

// out[i] = mean over rows x[j], j in sets[i]; empty set -> zero row
void segment_mean(const Tensor& x, const std::vector<std::vector<int>>& sets, Tensor& out);

// grad_x[j] += sum over i with j in sets[i] of grad_out[i] / |sets[i]|
void segment_mean_backward(const Tensor& grad_out, const std::vector<std::vector<int>>& sets,
                           Tensor& grad_x);

// out = max(x, 0)
void relu(const Tensor& x, Tensor& out);

// grad_x += grad_out where x > 0
void relu_backward(const Tensor& x, const Tensor& grad_out, Tensor& grad_x);

// out[r] = rows of table selected by indices
void gather_rows(const Tensor& table, const std::vector<int>& indices, Tensor& out);

// grad_table[indices[r]] += grad_out[r], accumulation in index-list order
void gather_rows_backward(const Tensor& grad_out, const std::vector<int>& indices,
                          Tensor& grad_table);

// out[r][0] = dot(a row r, b row r)
void rows_dot(const Tensor& a, const Tensor& b, Tensor& out);

}  // namespace hyperroad::kernels
