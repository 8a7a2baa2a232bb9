#pragma once

#include <vector>

#include "hyperroad/tensor.hpp"

namespace hyperroad::ref {

// Plain serial twins of hyperroad::kernels, kept as the independent oracle
// for unit tests and the kernel benchmark. Loop order matches the kernels so
// results agree bitwise.

void matmul(const Tensor& a, const Tensor& b, Tensor& c);
void segment_mean(const Tensor& x, const std::vector<std::vector<int>>& sets, Tensor& out);
void relu(const Tensor& x, Tensor& out);
void gather_rows(const Tensor& table, const std::vector<int>& indices, Tensor& out);
void rows_dot(const Tensor& a, const Tensor& b, Tensor& out);

}  // namespace hyperroad::ref
