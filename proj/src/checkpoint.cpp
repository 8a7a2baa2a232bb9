#include "hyperroad/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "hyperroad/errors.hpp"

namespace hyperroad {

namespace {

constexpr char kMagic[8] = {'H', 'R', 'C', 'K', 'P', 'T', '0', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    std::memcpy(buf, &v, 4);
    out.write(buf, 4);
}

std::uint32_t read_u32(std::istream& in, const std::string& name) {
    char buf[4];
    if (!in.read(buf, 4)) throw FileError(name + ": truncated");
    std::uint32_t v;
    std::memcpy(&v, buf, 4);
    return v;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_to_kv(const TrainConfig& cfg) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("d", std::to_string(cfg.d));
    kv.emplace_back("layers", std::to_string(cfg.layers));
    kv.emplace_back("alpha", num(cfg.alpha));
    kv.emplace_back("lr", num(cfg.lr));
    kv.emplace_back("batch_size", std::to_string(cfg.batch_size));
    kv.emplace_back("epochs", std::to_string(cfg.epochs));
    kv.emplace_back("steps", std::to_string(cfg.steps));
    kv.emplace_back("n_g", std::to_string(cfg.n_g));
    kv.emplace_back("n_h", std::to_string(cfg.n_h));
    kv.emplace_back("k", std::to_string(cfg.k));
    kv.emplace_back("phi", num(cfg.phi));
    kv.emplace_back("lambda", num(cfg.lambda));
    kv.emplace_back("seed", std::to_string(cfg.seed));
    kv.emplace_back("fusion", to_string(cfg.fusion));
    kv.emplace_back("sampler", to_string(cfg.sampler));
    kv.emplace_back("mode", to_string(cfg.mode));
    kv.emplace_back("no_pe", cfg.ablation.no_pe ? "1" : "0");
    kv.emplace_back("no_dam", cfg.ablation.no_dam ? "1" : "0");
    kv.emplace_back("no_gpt", cfg.ablation.no_gpt ? "1" : "0");
    kv.emplace_back("no_hpt", cfg.ablation.no_hpt ? "1" : "0");
    kv.emplace_back("no_hec", cfg.ablation.no_hec ? "1" : "0");
    kv.emplace_back("directed_neighbors", cfg.directed_neighbors ? "1" : "0");
    kv.emplace_back("logsigmoid", cfg.logsigmoid ? "1" : "0");
    kv.emplace_back("dbs_node_cap", std::to_string(cfg.dbs_node_cap));
    kv.emplace_back("early_stop", cfg.early_stop ? "1" : "0");
    kv.emplace_back("patience", std::to_string(cfg.patience));
    return kv;
}

void apply_kv(TrainConfig& cfg, const std::string& key, const std::string& value) {
    auto as_bool = [&] {
        if (value == "1" || value == "true") return true;
        if (value == "0" || value == "false") return false;
        throw ConfigError("config key '" + key + "': expected boolean, got '" + value + "'");
    };
    try {
        if (key == "d") cfg.d = std::stoi(value);
        else if (key == "layers" || key == "L") cfg.layers = std::stoi(value);
        else if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "lr") cfg.lr = std::stod(value);
        else if (key == "batch_size") cfg.batch_size = std::stoi(value);
        else if (key == "epochs") cfg.epochs = std::stoi(value);
        else if (key == "steps") cfg.steps = std::stoi(value);
        else if (key == "n_g") cfg.n_g = std::stoi(value);
        else if (key == "n_h") cfg.n_h = std::stoi(value);
        else if (key == "k" || key == "K") cfg.k = std::stoi(value);
        else if (key == "phi") cfg.phi = std::stod(value);
        else if (key == "lambda") cfg.lambda = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "fusion") cfg.fusion = parse_fusion(value);
        else if (key == "sampler") cfg.sampler = parse_sampler(value);
        else if (key == "mode") cfg.mode = parse_mode(value);
        else if (key == "no_pe") cfg.ablation.no_pe = as_bool();
        else if (key == "no_dam") cfg.ablation.no_dam = as_bool();
        else if (key == "no_gpt") cfg.ablation.no_gpt = as_bool();
        else if (key == "no_hpt") cfg.ablation.no_hpt = as_bool();
        else if (key == "no_hec") cfg.ablation.no_hec = as_bool();
        else if (key == "directed_neighbors") cfg.directed_neighbors = as_bool();
        else if (key == "logsigmoid") cfg.logsigmoid = as_bool();
        else if (key == "dbs_node_cap") cfg.dbs_node_cap = std::stoi(value);
        else if (key == "early_stop") cfg.early_stop = as_bool();
        else if (key == "patience") cfg.patience = std::stoi(value);
        else throw ConfigError("unknown config key '" + key + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse value '" + value + "'");
    }
}

void save_checkpoint(const ModelParams& params, const TrainConfig& cfg, std::ostream& out) {
    out.write(kMagic, sizeof(kMagic));

    std::ostringstream cfg_block;
    for (const auto& [k, v] : config_to_kv(cfg)) cfg_block << k << '=' << v << '\n';
    const std::string cfg_str = cfg_block.str();
    write_u32(out, static_cast<std::uint32_t>(cfg_str.size()));
    out.write(cfg_str.data(), static_cast<std::streamsize>(cfg_str.size()));

    const auto named = params.named_tensors();
    write_u32(out, static_cast<std::uint32_t>(named.size()));
    for (const auto& [name, t] : named) {
        write_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u32(out, static_cast<std::uint32_t>(t->rows));
        write_u32(out, static_cast<std::uint32_t>(t->cols));
        out.write(reinterpret_cast<const char*>(t->data.data()),
                  static_cast<std::streamsize>(t->data.size() * sizeof(double)));
    }
}

Checkpoint load_checkpoint(std::istream& in, const std::string& name) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
        throw FileError(name + ": not a checkpoint file (bad magic)");
    }
    Checkpoint ck;
    const std::uint32_t cfg_len = read_u32(in, name);
    std::string cfg_str(cfg_len, '\0');
    if (!in.read(cfg_str.data(), cfg_len)) throw FileError(name + ": truncated config block");
    std::istringstream cfg_in(cfg_str);
    std::string line;
    while (std::getline(cfg_in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FileError(name + ": malformed config line '" + line + "'");
        apply_kv(ck.config, line.substr(0, eq), line.substr(eq + 1));
    }

    // tensors arrive in named_tensors order; rebuild the containers by name
    const std::uint32_t count = read_u32(in, name);
    std::vector<std::pair<std::string, Tensor>> tensors;
    tensors.reserve(count);
    for (std::uint32_t t = 0; t < count; ++t) {
        const std::uint32_t name_len = read_u32(in, name);
        std::string tname(name_len, '\0');
        if (!in.read(tname.data(), name_len)) throw FileError(name + ": truncated tensor name");
        const std::uint32_t rows = read_u32(in, name);
        const std::uint32_t cols = read_u32(in, name);
        Tensor tensor(static_cast<int>(rows), static_cast<int>(cols));
        if (!in.read(reinterpret_cast<char*>(tensor.data.data()),
                     static_cast<std::streamsize>(tensor.data.size() * sizeof(double)))) {
            throw FileError(name + ": truncated tensor data for '" + tname + "'");
        }
        tensors.emplace_back(std::move(tname), std::move(tensor));
    }

    // size the parameter containers from the stored names
    std::size_t n_layers = 0, n_att = 0, n_attr = 0;
    bool has_fusion = false;
    for (const auto& [tname, tensor] : tensors) {
        if (tname.rfind("layer", 0) == 0) {
            n_layers = std::max(n_layers, static_cast<std::size_t>(std::stoi(tname.substr(5)) + 1));
        } else if (tname.rfind("att", 0) == 0 && tname.find('.') != std::string::npos &&
                   tname.rfind("attr", 0) != 0) {
            n_att = std::max(n_att, static_cast<std::size_t>(std::stoi(tname.substr(3)) + 1));
        } else if (tname.rfind("attr", 0) == 0) {
            n_attr = std::max(n_attr, static_cast<std::size_t>(std::stoi(tname.substr(4)) + 1));
        } else if (tname == "fusion_w") {
            has_fusion = true;
        }
    }
    ck.params.layers.resize(n_layers);
    ck.params.attention.resize(n_att);
    ck.params.attr_decoders.resize(n_attr);
    if (has_fusion) ck.params.fusion_w = Tensor(1, 1);  // placeholder so named_tensors lists it

    auto slots = ck.params.named_tensors();
    if (slots.size() != tensors.size()) {
        throw FileError(name + ": tensor inventory does not match config (" +
                        std::to_string(tensors.size()) + " stored, " +
                        std::to_string(slots.size()) + " expected)");
    }
    for (std::size_t t = 0; t < slots.size(); ++t) {
        if (slots[t].first != tensors[t].first) {
            throw FileError(name + ": unexpected tensor '" + tensors[t].first + "', expected '" +
                            slots[t].first + "'");
        }
        *slots[t].second = std::move(tensors[t].second);
    }
    return ck;
}

void export_embeddings_tsv(const Tensor& embeddings, const std::vector<std::string>& road_ids,
                           std::ostream& out) {
    if (static_cast<int>(road_ids.size()) != embeddings.rows) {
        throw ConfigError("export_embeddings: id count does not match embedding rows");
    }
    char buf[40];
    for (int r = 0; r < embeddings.rows; ++r) {
        out << road_ids[static_cast<std::size_t>(r)];
        for (int c = 0; c < embeddings.cols; ++c) {
            const int len = std::snprintf(buf, sizeof(buf), "%.17g", embeddings.at(r, c));
            out.put('\t');
            out.write(buf, len);
        }
        out.put('\n');
    }
}

EmbeddingsFile load_embeddings_tsv(std::istream& in, const std::string& name) {
    EmbeddingsFile file;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = line.find('\t');
        if (start == std::string::npos) {
            throw FileError(name + ": line " + std::to_string(line_no) + ": no embedding values");
        }
        file.road_ids.push_back(line.substr(0, start));
        while (start != std::string::npos) {
            const std::size_t next = line.find('\t', start + 1);
            const std::string field = line.substr(start + 1, next == std::string::npos
                                                                ? std::string::npos
                                                                : next - start - 1);
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw FileError(name + ": line " + std::to_string(line_no) +
                                ": cannot parse value '" + field + "'");
            }
            start = next;
        }
        if (!rows.empty() && row.size() != rows.back().size()) {
            throw FileError(name + ": line " + std::to_string(line_no) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FileError(name + ": empty embeddings file");
    file.embeddings = Tensor(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            file.embeddings.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
        }
    }
    return file;
}

}  // namespace hyperroad
