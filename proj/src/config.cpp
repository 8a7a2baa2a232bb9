#include "hyperroad/config.hpp"

#include "hyperroad/errors.hpp"

namespace hyperroad {

void TrainConfig::validate() const {
    if (d <= 0 || d % 4 != 0) {
        throw ConfigError("d must be divisible by 4 and positive, got " + std::to_string(d));
    }
    if (layers < 1) throw ConfigError("L must be >= 1, got " + std::to_string(layers));
    if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
    if (lr <= 0.0) throw ConfigError("learning rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (steps < 0) throw ConfigError("steps must be >= 0");
    if (n_g < 0 || n_h < 0) throw ConfigError("negative sample sizes must be >= 0");
    if (k < 1) throw ConfigError("K (hyperedge clusters) is required and must be >= 1");
    if (phi <= 0.0) throw ConfigError("phi must be > 0");
    if (lambda <= 1.0) throw ConfigError("lambda must be > 1");
    if (dbs_node_cap < 1) throw ConfigError("dbs_node_cap must be >= 1");
}

FusionVariant parse_fusion(const std::string& s) {
    if (s == "mean") return FusionVariant::mean;
    if (s == "attention") return FusionVariant::attention;
    if (s == "mlp") return FusionVariant::mlp;
    throw ConfigError("unknown fusion variant '" + s + "' (mean|attention|mlp)");
}

SamplerVariant parse_sampler(const std::string& s) {
    if (s == "random") return SamplerVariant::random;
    if (s == "dbs") return SamplerVariant::dbs;
    throw ConfigError("unknown sampler variant '" + s + "' (random|dbs)");
}

ModelMode parse_mode(const std::string& s) {
    if (s == "base") return ModelMode::base;
    if (s == "attr") return ModelMode::attr;
    throw ConfigError("unknown mode '" + s + "' (base|attr)");
}

const char* to_string(FusionVariant v) {
    switch (v) {
        case FusionVariant::mean: return "mean";
        case FusionVariant::attention: return "attention";
        default: return "mlp";
    }
}

const char* to_string(SamplerVariant v) {
    return v == SamplerVariant::random ? "random" : "dbs";
}

const char* to_string(ModelMode v) { return v == ModelMode::base ? "base" : "attr"; }

}  // namespace hyperroad
