#include "hyperroad/probe.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>

#include "hyperroad/errors.hpp"
#include "hyperroad/rng.hpp"

#include "json.hpp"

namespace hyperroad {

F1Triple f1_scores(const std::vector<int>& pred, const std::vector<int>& gold) {
    if (pred.size() != gold.size()) {
        throw ConfigError("f1_scores: " + std::to_string(pred.size()) + " predictions vs " +
                          std::to_string(gold.size()) + " gold labels");
    }
    if (pred.empty()) throw ConfigError("f1_scores: empty input");

    // classes processed in sorted label order so aggregation is canonical
    std::map<int, std::size_t> class_id;
    for (int v : gold) class_id.emplace(v, 0);
    for (int v : pred) class_id.emplace(v, 0);
    {
        std::size_t next = 0;
        for (auto& [value, id] : class_id) id = next++;
    }
    const std::size_t k = class_id.size();

    std::vector<long long> tp(k, 0), fp(k, 0), fn(k, 0), support(k, 0);
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const std::size_t g = class_id[gold[i]];
        const std::size_t p = class_id[pred[i]];
        ++support[g];
        if (g == p) {
            ++tp[g];
        } else {
            ++fn[g];
            ++fp[p];
        }
    }

    long long tp_all = 0, fp_all = 0, fn_all = 0;
    for (std::size_t c = 0; c < k; ++c) {
        tp_all += tp[c];
        fp_all += fp[c];
        fn_all += fn[c];
    }
    F1Triple out;
    const double micro_den = static_cast<double>(2 * tp_all + fp_all + fn_all);
    out.micro = micro_den > 0.0 ? 2.0 * static_cast<double>(tp_all) / micro_den : 0.0;

    double macro_sum = 0.0;
    double weighted_sum = 0.0;
    long long total_support = 0;
    std::size_t supported = 0;
    for (std::size_t c = 0; c < k; ++c) {
        if (support[c] == 0) continue;  // absent from gold: excluded
        const double den = static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
        const double f1 = den > 0.0 ? 2.0 * static_cast<double>(tp[c]) / den : 0.0;
        macro_sum += f1;
        weighted_sum += (static_cast<double>(support[c])) * f1;
        total_support += support[c];
        ++supported;
    }
    out.macro = supported > 0 ? macro_sum / static_cast<double>(supported) : 0.0;
    out.weighted =
        total_support > 0 ? weighted_sum / static_cast<double>(total_support) : 0.0;
    return out;
}

namespace {

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// full-batch gradient descent on L2-regularized logistic loss; lr halves on
// validation plateau
std::vector<double> train_binary_lr(const std::vector<double>& x_train, const std::vector<char>& y_train,
                                    const std::vector<double>& x_val, const std::vector<char>& y_val,
                                    int dim, const ProbeOptions& opt) {
    const int n = static_cast<int>(y_train.size());
    const int nv = static_cast<int>(y_val.size());
    std::vector<double> w(static_cast<std::size_t>(dim) + 1, 0.0);  // last slot is the bias
    std::vector<double> grad(w.size());
    double lr = opt.lr;
    double best_val = std::numeric_limits<double>::infinity();
    int stale = 0;

    auto val_loss = [&]() {
        if (nv == 0) return 0.0;
        double acc = 0.0;
        for (int r = 0; r < nv; ++r) {
            double z = w.back();
            const double* row = x_val.data() + static_cast<std::size_t>(r) * dim;
            for (int c = 0; c < dim; ++c) z += w[static_cast<std::size_t>(c)] * row[c];
            const double p = sigmoid(z);
            const double eps = 1e-12;
            acc -= y_val[static_cast<std::size_t>(r)] ? std::log(p + eps) : std::log(1.0 - p + eps);
        }
        return acc / static_cast<double>(nv);
    };

    for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int r = 0; r < n; ++r) {
            double z = w.back();
            const double* row = x_train.data() + static_cast<std::size_t>(r) * dim;
            for (int c = 0; c < dim; ++c) z += w[static_cast<std::size_t>(c)] * row[c];
            const double err = sigmoid(z) - (y_train[static_cast<std::size_t>(r)] ? 1.0 : 0.0);
            for (int c = 0; c < dim; ++c) grad[static_cast<std::size_t>(c)] += err * row[c];
            grad.back() += err;
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (int c = 0; c < dim; ++c) {
            grad[static_cast<std::size_t>(c)] =
                grad[static_cast<std::size_t>(c)] * inv_n + opt.l2 * w[static_cast<std::size_t>(c)];
        }
        grad.back() *= inv_n;  // bias unregularized
        for (std::size_t c = 0; c < w.size(); ++c) w[c] -= lr * grad[c];

        if (nv > 0 && (epoch + 1) % 10 == 0) {
            const double v = val_loss();
            if (v < best_val - 1e-9) {
                best_val = v;
                stale = 0;
            } else if (++stale >= 3) {
                lr *= 0.5;
                stale = 0;
                if (lr < opt.lr / 64.0) break;  // plateau: stop early
            }
        }
    }
    return w;
}

}  // namespace

EvalReport logistic_probe(const Tensor& embeddings, const std::vector<int>& labels,
                          std::uint64_t seed, const ProbeOptions& opt) {
    if (static_cast<int>(labels.size()) != embeddings.rows) {
        throw ConfigError("logistic_probe: " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(embeddings.rows) + " embedding rows");
    }
    std::vector<int> labeled;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= 0) labeled.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(labeled.size()) < opt.folds) {
        throw ConfigError("logistic_probe: " + std::to_string(labeled.size()) +
                          " labeled roads for " + std::to_string(opt.folds) + " folds");
    }

    // global class axis, sorted by original label value
    std::map<int, int> class_id;
    for (int i : labeled) class_id.emplace(labels[static_cast<std::size_t>(i)], 0);
    {
        int next = 0;
        for (auto& [value, id] : class_id) id = next++;
    }
    const int k = static_cast<int>(class_id.size());
    const int d = embeddings.cols;

    EvalReport report;
    report.labeled = labeled.size();
    for (const auto& [value, id] : class_id) report.class_values.push_back(value);

    // disjoint folds of near-equal size via seeded shuffle + round robin
    Rng rng(seed);
    rng.shuffle(labeled);
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(opt.folds));
    for (std::size_t t = 0; t < labeled.size(); ++t) {
        folds[t % static_cast<std::size_t>(opt.folds)].push_back(labeled[t]);
    }

    for (int f = 0; f < opt.folds; ++f) {
        std::vector<int> train_rows;
        for (int g = 0; g < opt.folds; ++g) {
            if (g == f) continue;
            train_rows.insert(train_rows.end(), folds[static_cast<std::size_t>(g)].begin(),
                              folds[static_cast<std::size_t>(g)].end());
        }
        const std::vector<int>& test_rows = folds[static_cast<std::size_t>(f)];

        // 10% of the training fold held out for early stopping
        Rng fold_rng(seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(f)));
        fold_rng.shuffle(train_rows);
        const std::size_t n_val =
            std::max<std::size_t>(1, static_cast<std::size_t>(
                                         static_cast<double>(train_rows.size()) * opt.validation_fraction));
        std::vector<int> val_rows(train_rows.begin(), train_rows.begin() + static_cast<long>(n_val));
        std::vector<int> fit_rows(train_rows.begin() + static_cast<long>(n_val), train_rows.end());
        if (fit_rows.empty()) throw ConfigError("logistic_probe: training fold too small");

        // z-score standardization from the fit rows
        std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
        std::vector<double> sd(static_cast<std::size_t>(d), 0.0);
        for (int r : fit_rows) {
            for (int c = 0; c < d; ++c) mean[static_cast<std::size_t>(c)] += embeddings.at(r, c);
        }
        for (int c = 0; c < d; ++c) mean[static_cast<std::size_t>(c)] /= static_cast<double>(fit_rows.size());
        for (int r : fit_rows) {
            for (int c = 0; c < d; ++c) {
                const double diff = embeddings.at(r, c) - mean[static_cast<std::size_t>(c)];
                sd[static_cast<std::size_t>(c)] += diff * diff;
            }
        }
        for (int c = 0; c < d; ++c) {
            sd[static_cast<std::size_t>(c)] =
                std::sqrt(sd[static_cast<std::size_t>(c)] / static_cast<double>(fit_rows.size()));
            if (sd[static_cast<std::size_t>(c)] <= 0.0) sd[static_cast<std::size_t>(c)] = 1.0;
        }
        auto standardize = [&](const std::vector<int>& rows) {
            std::vector<double> x(rows.size() * static_cast<std::size_t>(d));
            for (std::size_t t = 0; t < rows.size(); ++t) {
                for (int c = 0; c < d; ++c) {
                    x[t * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] =
                        (embeddings.at(rows[t], c) - mean[static_cast<std::size_t>(c)]) /
                        sd[static_cast<std::size_t>(c)];
                }
            }
            return x;
        };
        const std::vector<double> x_fit = standardize(fit_rows);
        const std::vector<double> x_val = standardize(val_rows);
        const std::vector<double> x_test = standardize(test_rows);

        // one-vs-rest classifiers, trainable classes = present in the fit rows
        std::vector<char> class_present(static_cast<std::size_t>(k), 0);
        for (int r : fit_rows) class_present[static_cast<std::size_t>(class_id.at(labels[static_cast<std::size_t>(r)]))] = 1;
        for (int c = 0; c < k; ++c) {
            if (!class_present[static_cast<std::size_t>(c)]) {
                std::cerr << "logistic_probe: class " << report.class_values[static_cast<std::size_t>(c)]
                          << " absent from the training data of fold " << f << "\n";
            }
        }

        std::vector<std::vector<double>> weights(static_cast<std::size_t>(k));
        #pragma omp parallel for schedule(dynamic)
        for (int c = 0; c < k; ++c) {
            if (!class_present[static_cast<std::size_t>(c)]) continue;
            std::vector<char> y_fit(fit_rows.size()), y_val(val_rows.size());
            for (std::size_t t = 0; t < fit_rows.size(); ++t) {
                y_fit[t] = class_id.at(labels[static_cast<std::size_t>(fit_rows[t])]) == c;
            }
            for (std::size_t t = 0; t < val_rows.size(); ++t) {
                y_val[t] = class_id.at(labels[static_cast<std::size_t>(val_rows[t])]) == c;
            }
            weights[static_cast<std::size_t>(c)] = train_binary_lr(x_fit, y_fit, x_val, y_val, d, opt);
        }

        FoldResult fr;
        fr.confusion.assign(static_cast<std::size_t>(k),
                            std::vector<long long>(static_cast<std::size_t>(k), 0));
        std::vector<int> pred(test_rows.size()), gold(test_rows.size());
        for (std::size_t t = 0; t < test_rows.size(); ++t) {
            int best = -1;
            double best_score = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                if (!class_present[static_cast<std::size_t>(c)]) continue;
                const auto& w = weights[static_cast<std::size_t>(c)];
                double z = w.back();
                const double* row = x_test.data() + t * static_cast<std::size_t>(d);
                for (int cc = 0; cc < d; ++cc) z += w[static_cast<std::size_t>(cc)] * row[cc];
                if (z > best_score) {
                    best_score = z;
                    best = c;
                }
            }
            pred[t] = report.class_values[static_cast<std::size_t>(best)];
            gold[t] = labels[static_cast<std::size_t>(test_rows[t])];
            ++fr.confusion[static_cast<std::size_t>(class_id.at(gold[t]))]
                          [static_cast<std::size_t>(best)];
        }
        fr.f1 = f1_scores(pred, gold);
        report.folds.push_back(std::move(fr));
    }

    for (const auto& fr : report.folds) {
        report.mean.micro += fr.f1.micro;
        report.mean.macro += fr.f1.macro;
        report.mean.weighted += fr.f1.weighted;
    }
    const double inv = 1.0 / static_cast<double>(report.folds.size());
    report.mean.micro *= inv;
    report.mean.macro *= inv;
    report.mean.weighted *= inv;
    return report;
}

void write_eval_report(const EvalReport& report, std::ostream& out) {
    nlohmann::json j;
    j["labeled"] = report.labeled;
    j["classes"] = report.class_values;
    j["mean"] = {{"micro_f1", report.mean.micro},
                 {"macro_f1", report.mean.macro},
                 {"weighted_f1", report.mean.weighted}};
    j["folds"] = nlohmann::json::array();
    for (const auto& fr : report.folds) {
        j["folds"].push_back({{"micro_f1", fr.f1.micro},
                              {"macro_f1", fr.f1.macro},
                              {"weighted_f1", fr.f1.weighted},
                              {"confusion", fr.confusion}});
    }
    out << j.dump(2) << '\n';
}

std::vector<SimilarRoad> query_similar(const Tensor& embeddings, int road, int top_k) {
    if (road < 0 || road >= embeddings.rows) {
        throw ConfigError("query_similar: road index " + std::to_string(road) + " out of range");
    }
    const double* q = embeddings.row(road);
    double qn = 0.0;
    for (int c = 0; c < embeddings.cols; ++c) qn += q[c] * q[c];
    qn = std::sqrt(qn);
    if (qn <= 0.0) throw ConfigError("query_similar: zero-norm query embedding");

    std::vector<SimilarRoad> scored;
    scored.reserve(static_cast<std::size_t>(embeddings.rows) - 1);
    for (int r = 0; r < embeddings.rows; ++r) {
        if (r == road) continue;
        const double* v = embeddings.row(r);
        double dot = 0.0, vn = 0.0;
        for (int c = 0; c < embeddings.cols; ++c) {
            dot += q[c] * v[c];
            vn += v[c] * v[c];
        }
        const double score = vn > 0.0 ? dot / (qn * std::sqrt(vn)) : 0.0;
        scored.push_back({r, score});
    }
    std::sort(scored.begin(), scored.end(), [](const SimilarRoad& a, const SimilarRoad& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.road < b.road;
    });
    if (top_k >= 0 && static_cast<std::size_t>(top_k) < scored.size()) {
        scored.resize(static_cast<std::size_t>(top_k));
    }
    return scored;
}

}  // namespace hyperroad
