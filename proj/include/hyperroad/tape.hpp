#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hyperroad/tensor.hpp"

namespace hyperroad {

// Reverse-mode tape. Nodes are appended in topological order by
// construction; backward() walks them in strict reverse insertion order.
// Heavy forward/backward work runs through hyperroad::kernels.
class Tape {
public:
    using Handle = int;

    Tape();

    // NaN/Inf after every forward op trips a NumericError when enabled.
    // Defaults to on in debug builds, off under NDEBUG.
    void set_check_finite(bool on) { check_finite_ = on; }

    Handle leaf(Tensor value);

    Handle matmul(Handle a, Handle b);
    Handle add(Handle a, Handle b);
    Handle add_row_bias(Handle x, Handle bias);  // (n x d) + (1 x d), bias broadcast over rows
    Handle scale(Handle x, double s);
    Handle relu(Handle x);
    Handle concat_cols(const std::vector<Handle>& parts);
    Handle select_col(Handle x, int col);  // n x d -> n x 1
    Handle colvec_mul(Handle w, Handle x);  // (n x 1) broadcast-multiplied into (n x d)
    Handle gather_rows(Handle table, std::vector<int> indices);
    Handle segment_mean(Handle x, std::shared_ptr<const std::vector<std::vector<int>>> sets);
    Handle mean_rows(Handle x);
    Handle rows_dot(Handle a, Handle b);  // per-row dot products -> n x 1
    Handle dot(Handle a, Handle b);       // (1 x d) . (1 x d) -> 1 x 1
    Handle sum_all(Handle x);             // -> 1 x 1
    Handle logsigmoid(Handle x);          // elementwise log(sigmoid(x))
    Handle row_softmax(Handle x);
    // sum over rows of cross-entropy against integer labels; label < 0 = skip row
    Handle softmax_cross_entropy(Handle logits, std::vector<int> labels);
    Handle softmax_cross_entropy(Handle logits, int label);

    // seeds d(loss)=1 and propagates; loss must be 1 x 1
    void backward(Handle loss);

    const Tensor& value(Handle h) const { return nodes_[static_cast<std::size_t>(h)].value; }
    const Tensor& grad(Handle h) const { return nodes_[static_cast<std::size_t>(h)].grad; }
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void(Tape&)> back;  // empty for leaves
    };

    Handle push(Tensor value, std::function<void(Tape&)> back, const char* op);
    Tensor& grad_mut(Handle h) { return nodes_[static_cast<std::size_t>(h)].grad; }

    std::vector<Node> nodes_;
    bool check_finite_;
};

}  // namespace hyperroad
