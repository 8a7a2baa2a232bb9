#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hyperroad/tensor.hpp"

namespace hyperroad {

struct F1Triple {
    double micro = 0.0;
    double macro = 0.0;
    double weighted = 0.0;
};

// Micro from global TP/FP/FN; macro = unweighted mean of per-class F1;
// weighted = support-weighted mean. Classes with zero gold support are
// excluded from macro/weighted; per-class F1 with a zero denominator is 0.
F1Triple f1_scores(const std::vector<int>& pred, const std::vector<int>& gold);

struct FoldResult {
    F1Triple f1;
    std::vector<std::vector<long long>> confusion;  // gold x pred over global classes
};

struct EvalReport {
    std::vector<FoldResult> folds;
    F1Triple mean;
    std::vector<int> class_values;  // original label values, confusion axis order
    std::size_t labeled = 0;
};

struct ProbeOptions {
    int folds = 5;
    double l2 = 1e-4;
    int max_epochs = 500;
    double lr = 0.1;
    double validation_fraction = 0.1;
};

// One-vs-rest logistic regression on frozen embeddings with 5-fold cross
// validation; labels < 0 are treated as missing and excluded. Deterministic
// given the seed.
EvalReport logistic_probe(const Tensor& embeddings, const std::vector<int>& labels,
                          std::uint64_t seed, const ProbeOptions& opt = {});

void write_eval_report(const EvalReport& report, std::ostream& out);

struct SimilarRoad {
    int road = 0;
    double score = 0.0;
};

// Descending cosine similarity, query road excluded, ties broken by index.
// Throws ConfigError on a zero-norm query embedding.
std::vector<SimilarRoad> query_similar(const Tensor& embeddings, int road, int top_k);

}  // namespace hyperroad
