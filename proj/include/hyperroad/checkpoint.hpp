#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyperroad/config.hpp"
#include "hyperroad/model.hpp"

namespace hyperroad {

// flat key=value view of a config, also the checkpoint header block
std::vector<std::pair<std::string, std::string>> config_to_kv(const TrainConfig& cfg);
void apply_kv(TrainConfig& cfg, const std::string& key, const std::string& value);

// Versioned binary checkpoint: magic, embedded config, then every parameter
// tensor with a shape header. Byte-deterministic for identical params.
void save_checkpoint(const ModelParams& params, const TrainConfig& cfg, std::ostream& out);

struct Checkpoint {
    ModelParams params;
    TrainConfig config;
};

Checkpoint load_checkpoint(std::istream& in, const std::string& name = "checkpoint");

// road id + d tab-separated floats per line
void export_embeddings_tsv(const Tensor& embeddings, const std::vector<std::string>& road_ids,
                           std::ostream& out);

struct EmbeddingsFile {
    std::vector<std::string> road_ids;
    Tensor embeddings;
};

EmbeddingsFile load_embeddings_tsv(std::istream& in, const std::string& name = "embeddings");

}  // namespace hyperroad
