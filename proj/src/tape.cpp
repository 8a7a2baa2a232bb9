#include "hyperroad/tape.hpp"

#include <cmath>
#include <string>

#include "hyperroad/errors.hpp"
#include "hyperroad/kernels.hpp"

namespace hyperroad {

namespace {

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
    throw ConfigError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows) + "x" +
                      std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                      std::to_string(b.cols) + ")");
}

}  // namespace

Tape::Tape() {
#ifdef NDEBUG
    check_finite_ = false;
#else
    check_finite_ = true;
#endif
}

Tape::Handle Tape::push(Tensor value, std::function<void(Tape&)> back, const char* op) {
    if (check_finite_ && !value.all_finite()) {
        throw NumericError(std::string(op) + ": non-finite value in forward output");
    }
    Node n;
    n.grad = Tensor(value.rows, value.cols);
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<Handle>(nodes_.size() - 1);
}

Tape::Handle Tape::leaf(Tensor value) { return push(std::move(value), nullptr, "leaf"); }

Tape::Handle Tape::matmul(Handle a, Handle b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (av.cols != bv.rows) shape_error("matmul", av, bv);
    Tensor out(av.rows, bv.cols);
    kernels::matmul(av, bv, out);
    Handle h = push(std::move(out), nullptr, "matmul");
    nodes_.back().back = [a, b, h](Tape& t) {
        const Tensor& g = t.grad(h);
        // dA = dC * B^T
        Tensor da(t.value(a).rows, t.value(a).cols);
        kernels::matmul_bt(g, t.value(b), da);
        Tensor& ga = t.grad_mut(a);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data[i] += da.data[i];
        // dB = A^T * dC
        Tensor db(t.value(b).rows, t.value(b).cols);
        kernels::matmul_at(t.value(a), g, db);
        Tensor& gb = t.grad_mut(b);
        for (std::size_t i = 0; i < gb.size(); ++i) gb.data[i] += db.data[i];
    };
    return h;
}

Tape::Handle Tape::add(Handle a, Handle b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) shape_error("add", av, bv);
    Tensor out = av;
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += bv.data[i];
    Handle h = push(std::move(out), nullptr, "add");
    nodes_.back().back = [a, b, h](Tape& t) {
        const Tensor& g = t.grad(h);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga.data[i] += g.data[i];
            gb.data[i] += g.data[i];
        }
    };
    return h;
}

Tape::Handle Tape::add_row_bias(Handle x, Handle bias) {
    const Tensor& xv = value(x);
    const Tensor& bv = value(bias);
    if (bv.rows != 1 || bv.cols != xv.cols) shape_error("add_row_bias", xv, bv);
    Tensor out = xv;
    for (int r = 0; r < out.rows; ++r) {
        double* row = out.row(r);
        for (int c = 0; c < out.cols; ++c) row[c] += bv.data[static_cast<std::size_t>(c)];
    }
    Handle h = push(std::move(out), nullptr, "add_row_bias");
    nodes_.back().back = [x, bias, h](Tape& t) {
        const Tensor& g = t.grad(h);
        Tensor& gx = t.grad_mut(x);
        for (std::size_t i = 0; i < g.size(); ++i) gx.data[i] += g.data[i];
        Tensor& gb = t.grad_mut(bias);
        for (int c = 0; c < g.cols; ++c) {
            double acc = 0.0;
            for (int r = 0; r < g.rows; ++r) acc += g.at(r, c);
            gb.data[static_cast<std::size_t>(c)] += acc;
        }
    };
    return h;
}

Tape::Handle Tape::scale(Handle x, double s) {
    Tensor out = value(x);
    for (double& v : out.data) v *= s;
    Handle h = push(std::move(out), nullptr, "scale");
    nodes_.back().back = [x, s, h](Tape& t) {
        const Tensor& g = t.grad(h);
        Tensor& gx = t.grad_mut(x);
        for (std::size_t i = 0; i < g.size(); ++i) gx.data[i] += s * g.data[i];
    };
    return h;
}

Tape::Handle Tape::relu(Handle x) {
    const Tensor& xv = value(x);
    Tensor out(xv.rows, xv.cols);
    kernels::relu(xv, out);
    Handle h = push(std::move(out), nullptr, "relu");
    nodes_.back().back = [x, h](Tape& t) {
        kernels::relu_backward(t.value(x), t.grad(h), t.grad_mut(x));
    };
    return h;
}

Tape::Handle Tape::concat_cols(const std::vector<Handle>& parts) {
    if (parts.empty()) throw ConfigError("concat_cols: no inputs");
    const int rows = value(parts[0]).rows;
    int cols = 0;
    for (Handle p : parts) {
        if (value(p).rows != rows) shape_error("concat_cols", value(parts[0]), value(p));
        cols += value(p).cols;
    }
    Tensor out(rows, cols);
    int offset = 0;
    for (Handle p : parts) {
        const Tensor& pv = value(p);
        for (int r = 0; r < rows; ++r) {
            const double* src = pv.row(r);
            double* dst = out.row(r) + offset;
            for (int c = 0; c < pv.cols; ++c) dst[c] = src[c];
        }
        offset += pv.cols;
    }
    std::vector<Handle> parts_copy = parts;
    Handle h = push(std::move(out), nullptr, "concat_cols");
    nodes_.back().back = [parts_copy, h](Tape& t) {
        const Tensor& g = t.grad(h);
        int off = 0;
        for (Handle p : parts_copy) {
            Tensor& gp = t.grad_mut(p);
            for (int r = 0; r < g.rows; ++r) {
                const double* src = g.row(r) + off;
                double* dst = gp.row(r);
                for (int c = 0; c < gp.cols; ++c) dst[c] += src[c];
            }
            off += gp.cols;
        }
    };
    return h;
}

Tape::Handle Tape::select_col(Handle x, int col) {
    const Tensor& xv = value(x);
    if (col < 0 || col >= xv.cols) {
        throw ConfigError("select_col: column " + std::to_string(col) + " out of range");
    }
    Tensor out(xv.rows, 1);
    for (int r = 0; r < xv.rows; ++r) out.at(r, 0) = xv.at(r, col);
    Handle h = push(std::move(out), nullptr, "select_col");
    nodes_.back().back = [x, col, h](Tape& t) {
        const Tensor& g = t.grad(h);
        Tensor& gx = t.grad_mut(x);
        for (int r = 0; r < g.rows; ++r) gx.at(r, col) += g.at(r, 0);
    };
    return h;
}

Tape::Handle Tape::colvec_mul(Handle w, Handle x) {
    const Tensor& wv = value(w);
    const Tensor& xv = value(x);
    if (wv.cols != 1 || wv.rows != xv.rows) shape_error("colvec_mul", wv, xv);
    Tensor out(xv.rows, xv.cols);
    for (int r = 0; r < xv.rows; ++r) {
        const double s = wv.at(r, 0);
        const double* src = xv.row(r);
        double* dst = out.row(r);
        for (int c = 0; c < xv.cols; ++c) dst[c] = s * src[c];
    }
    Handle h = push(std::move(out), nullptr, "colvec_mul");
    nodes_.back().back = [w, x, h](Tape& t) {
        const Tensor& g = t.grad(h);
        const Tensor& wv2 = t.value(w);
        const Tensor& xv2 = t.value(x);
        Tensor& gw = t.grad_mut(w);
        Tensor& gx = t.grad_mut(x);
        for (int r = 0; r < g.rows; ++r) {
            const double s = wv2.at(r, 0);
            double acc = 0.0;
            for (int c = 0; c < g.cols; ++c) {
                acc += g.at(r, c) * xv2.at(r, c);
                gx.at(r, c) += s * g.at(r, c);
            }
            gw.at(r, 0) += acc;
        }
    };
    return h;
}

Tape::Handle Tape::gather_rows(Handle table, std::vector<int> indices) {
    const Tensor& tv = value(table);
    for (int i : indices) {
        if (i < 0 || i >= tv.rows) {
            throw ConfigError("gather_rows: index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(tv.rows) + ")");
        }
    }
    Tensor out(static_cast<int>(indices.size()), tv.cols);
    kernels::gather_rows(tv, indices, out);
    auto idx = std::make_shared<const std::vector<int>>(std::move(indices));
    Handle h = push(std::move(out), nullptr, "gather_rows");
    nodes_.back().back = [table, idx, h](Tape& t) {
        kernels::gather_rows_backward(t.grad(h), *idx, t.grad_mut(table));
    };
    return h;
}

Tape::Handle Tape::segment_mean(Handle x, std::shared_ptr<const std::vector<std::vector<int>>> sets) {
    const Tensor& xv = value(x);
    for (const auto& s : *sets) {
        for (int j : s) {
            if (j < 0 || j >= xv.rows) {
                throw ConfigError("segment_mean: member index " + std::to_string(j) +
                                  " out of range");
            }
        }
    }
    Tensor out(static_cast<int>(sets->size()), xv.cols);
    kernels::segment_mean(xv, *sets, out);
    Handle h = push(std::move(out), nullptr, "segment_mean");
    nodes_.back().back = [x, sets, h](Tape& t) {
        kernels::segment_mean_backward(t.grad(h), *sets, t.grad_mut(x));
    };
    return h;
}

Tape::Handle Tape::mean_rows(Handle x) {
    const Tensor& xv = value(x);
    if (xv.rows < 1) throw ConfigError("mean_rows: empty input");
    Tensor out(1, xv.cols);
    const double inv = 1.0 / static_cast<double>(xv.rows);
    for (int c = 0; c < xv.cols; ++c) {
        double acc = 0.0;
        for (int r = 0; r < xv.rows; ++r) acc += xv.at(r, c);
        out.at(0, c) = acc * inv;
    }
    Handle h = push(std::move(out), nullptr, "mean_rows");
    nodes_.back().back = [x, h, inv](Tape& t) {
        const Tensor& g = t.grad(h);
        Tensor& gx = t.grad_mut(x);
        for (int r = 0; r < gx.rows; ++r) {
            for (int c = 0; c < gx.cols; ++c) gx.at(r, c) += g.at(0, c) * inv;
        }
    };
    return h;
}

Tape::Handle Tape::rows_dot(Handle a, Handle b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) shape_error("rows_dot", av, bv);
    Tensor out(av.rows, 1);
    kernels::rows_dot(av, bv, out);
    Handle h = push(std::move(out), nullptr, "rows_dot");
    nodes_.back().back = [a, b, h](Tape& t) {
        const Tensor& g = t.grad(h);
        const Tensor& av2 = t.value(a);
        const Tensor& bv2 = t.value(b);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (int r = 0; r < av2.rows; ++r) {
            const double s = g.at(r, 0);
            for (int c = 0; c < av2.cols; ++c) {
                ga.at(r, c) += s * bv2.at(r, c);
                gb.at(r, c) += s * av2.at(r, c);
            }
        }
    };
    return h;
}

Tape::Handle Tape::dot(Handle a, Handle b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (av.rows != 1 || bv.rows != 1 || av.cols != bv.cols) shape_error("dot", av, bv);
    return rows_dot(a, b);
}

Tape::Handle Tape::sum_all(Handle x) {
    const Tensor& xv = value(x);
    double acc = 0.0;
    for (double v : xv.data) acc += v;
    Handle h = push(Tensor::scalar(acc), nullptr, "sum_all");
    nodes_.back().back = [x, h](Tape& t) {
        const double g = t.grad(h).data[0];
        Tensor& gx = t.grad_mut(x);
        for (double& v : gx.data) v += g;
    };
    return h;
}

Tape::Handle Tape::logsigmoid(Handle x) {
    const Tensor& xv = value(x);
    Tensor out(xv.rows, xv.cols);
    for (std::size_t i = 0; i < xv.size(); ++i) {
        const double v = xv.data[i];
        out.data[i] = v >= 0.0 ? -std::log1p(std::exp(-v)) : v - std::log1p(std::exp(v));
    }
    Handle h = push(std::move(out), nullptr, "logsigmoid");
    nodes_.back().back = [x, h](Tape& t) {
        const Tensor& g = t.grad(h);
        const Tensor& xv2 = t.value(x);
        Tensor& gx = t.grad_mut(x);
        for (std::size_t i = 0; i < xv2.size(); ++i) {
            // d/dx log(sigmoid(x)) = sigmoid(-x)
            const double v = xv2.data[i];
            const double s = v >= 0.0 ? std::exp(-v) / (1.0 + std::exp(-v)) : 1.0 / (1.0 + std::exp(v));
            gx.data[i] += g.data[i] * s;
        }
    };
    return h;
}

Tape::Handle Tape::row_softmax(Handle x) {
    const Tensor& xv = value(x);
    Tensor out(xv.rows, xv.cols);
    for (int r = 0; r < xv.rows; ++r) {
        const double* src = xv.row(r);
        double* dst = out.row(r);
        double mx = src[0];
        for (int c = 1; c < xv.cols; ++c) mx = std::max(mx, src[c]);
        double z = 0.0;
        for (int c = 0; c < xv.cols; ++c) {
            dst[c] = std::exp(src[c] - mx);
            z += dst[c];
        }
        for (int c = 0; c < xv.cols; ++c) dst[c] /= z;
    }
    Handle h = push(std::move(out), nullptr, "row_softmax");
    nodes_.back().back = [x, h](Tape& t) {
        const Tensor& g = t.grad(h);
        const Tensor& p = t.value(h);
        Tensor& gx = t.grad_mut(x);
        for (int r = 0; r < p.rows; ++r) {
            double dp = 0.0;
            for (int c = 0; c < p.cols; ++c) dp += g.at(r, c) * p.at(r, c);
            for (int c = 0; c < p.cols; ++c) {
                gx.at(r, c) += p.at(r, c) * (g.at(r, c) - dp);
            }
        }
    };
    return h;
}

Tape::Handle Tape::softmax_cross_entropy(Handle logits, std::vector<int> labels) {
    const Tensor& xv = value(logits);
    if (static_cast<int>(labels.size()) != xv.rows) {
        throw ConfigError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(xv.rows) + " rows");
    }
    for (int y : labels) {
        if (y >= xv.cols) {
            throw ConfigError("softmax_cross_entropy: label " + std::to_string(y) +
                              " out of range for " + std::to_string(xv.cols) + " classes");
        }
    }
    // cache softmax probabilities for the backward rule
    auto probs = std::make_shared<Tensor>(xv.rows, xv.cols);
    double loss = 0.0;
    for (int r = 0; r < xv.rows; ++r) {
        const double* src = xv.row(r);
        double* dst = probs->row(r);
        double mx = src[0];
        for (int c = 1; c < xv.cols; ++c) mx = std::max(mx, src[c]);
        double z = 0.0;
        for (int c = 0; c < xv.cols; ++c) {
            dst[c] = std::exp(src[c] - mx);
            z += dst[c];
        }
        for (int c = 0; c < xv.cols; ++c) dst[c] /= z;
        const int y = labels[static_cast<std::size_t>(r)];
        if (y < 0) continue;  // missing label contributes nothing
        loss += std::log(z) + mx - src[y];
    }
    auto lab = std::make_shared<const std::vector<int>>(std::move(labels));
    Handle h = push(Tensor::scalar(loss), nullptr, "softmax_cross_entropy");
    nodes_.back().back = [logits, lab, probs, h](Tape& t) {
        const double g = t.grad(h).data[0];
        Tensor& gx = t.grad_mut(logits);
        for (int r = 0; r < gx.rows; ++r) {
            const int y = (*lab)[static_cast<std::size_t>(r)];
            if (y < 0) continue;
            for (int c = 0; c < gx.cols; ++c) {
                const double delta = c == y ? 1.0 : 0.0;
                gx.at(r, c) += g * (probs->at(r, c) - delta);
            }
        }
    };
    return h;
}

Tape::Handle Tape::softmax_cross_entropy(Handle logits, int label) {
    return softmax_cross_entropy(logits, std::vector<int>{label});
}

void Tape::backward(Handle loss) {
    const Tensor& lv = value(loss);
    if (lv.rows != 1 || lv.cols != 1) {
        throw ConfigError("backward: loss must be scalar, got " + std::to_string(lv.rows) + "x" +
                          std::to_string(lv.cols));
    }
    for (auto& n : nodes_) {
        std::fill(n.grad.data.begin(), n.grad.data.end(), 0.0);
    }
    grad_mut(loss).data[0] = 1.0;
    for (std::size_t i = static_cast<std::size_t>(loss) + 1; i-- > 0;) {
        if (nodes_[i].back) nodes_[i].back(*this);
    }
}

}  // namespace hyperroad
