#pragma once

#include <cstdint>
#include <string>

namespace hyperroad {

enum class FusionVariant { mean, attention, mlp };
enum class SamplerVariant { random, dbs };
enum class ModelMode { base, attr };

struct AblationFlags {
    bool no_pe = false;   // zero out the positional block of the input embedding
    bool no_dam = false;  // hyperedge channel + self residual only
    bool no_gpt = false;  // drop the graph reconstruction loss
    bool no_hpt = false;  // drop both hypergraph-level losses
    bool no_hec = false;  // drop only the hyperedge classification loss
};

struct TrainConfig {
    int d = 64;
    int layers = 2;
    double alpha = 0.1;
    double lr = 0.001;
    int batch_size = 1024;
    int epochs = 50;
    int steps = 0;  // > 0 overrides epochs with an explicit step count
    int n_g = 5;    // negatives per positive road pair
    int n_h = 2;    // negatives per positive road-hyperedge pair
    int k = 0;      // hyperedge cluster count; required, no default
    double phi = 10.0;
    double lambda = 1000.0;
    std::uint64_t seed = 42;
    FusionVariant fusion = FusionVariant::mean;
    SamplerVariant sampler = SamplerVariant::random;
    AblationFlags ablation;
    ModelMode mode = ModelMode::base;
    bool directed_neighbors = false;  // use out-neighbors only instead of symmetrized
    bool logsigmoid = false;          // squash reconstruction dots (documented departure)
    int dbs_node_cap = 50000;
    bool early_stop = false;
    int patience = 50;

    void validate() const;  // throws ConfigError
};

FusionVariant parse_fusion(const std::string& s);
SamplerVariant parse_sampler(const std::string& s);
ModelMode parse_mode(const std::string& s);
const char* to_string(FusionVariant v);
const char* to_string(SamplerVariant v);
const char* to_string(ModelMode v);

}  // namespace hyperroad
