#include "hyperroad/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <unordered_map>

#include "hyperroad/checkpoint.hpp"
#include "hyperroad/csv.hpp"
#include "hyperroad/errors.hpp"
#include "hyperroad/faces.hpp"
#include "hyperroad/hypergraph.hpp"
#include "hyperroad/manifest.hpp"
#include "hyperroad/probe.hpp"
#include "hyperroad/roadnet.hpp"
#include "hyperroad/synthgen.hpp"
#include "hyperroad/trainer.hpp"

#include "CLI11.hpp"

namespace hyperroad {

namespace {

namespace fs = std::filesystem;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write '" + path + "'");
    return out;
}

std::string out_path(const std::string& dir, const std::string& file) {
    fs::create_directories(dir);
    return (fs::path(dir) / file).string();
}

struct DataFiles {
    std::string nodes;
    std::string edges;
    std::string schema;      // optional
    std::string hypergraph;  // optional
};

void add_data_options(CLI::App* cmd, DataFiles& files, bool with_hypergraph) {
    cmd->add_option("--nodes", files.nodes, "nodes CSV (id,lon,lat[,attr...])")->required();
    cmd->add_option("--edges", files.edges, "edges CSV (src,dst)")->required();
    cmd->add_option("--schema", files.schema, "attribute schema JSON");
    if (with_hypergraph) {
        cmd->add_option("--hypergraph", files.hypergraph, "hypergraph JSON")->required();
    }
}

RoadNetwork load_net(const DataFiles& files) {
    std::optional<AttributeSchema> schema;
    if (!files.schema.empty()) {
        auto in = open_input(files.schema);
        schema = load_schema(in, files.schema);
    }
    auto nodes = open_input(files.nodes);
    auto edges = open_input(files.edges);
    return load_network(nodes, edges, schema, files.nodes, files.edges);
}

Hypergraph load_hg(const DataFiles& files, const RoadNetwork& net) {
    auto in = open_input(files.hypergraph);
    return load_hypergraph(in, net.size(), files.hypergraph);
}

// optional-typed config flags so precedence is CLI > config file > defaults
struct ConfigFlags {
    std::optional<int> d, layers, batch_size, epochs, steps, n_g, n_h, k, patience, dbs_node_cap;
    std::optional<double> alpha, lr, phi, lambda;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> fusion, sampler, mode;
    std::optional<bool> directed_neighbors, logsigmoid, early_stop;
    std::vector<std::string> ablations;
    std::string config_file;
};

void add_config_options(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--config", f.config_file, "key=value config file; CLI flags override it");
    cmd->add_option("--d", f.d, "embedding dimension (divisible by 4)");
    cmd->add_option("--layers,-L", f.layers, "aggregation layers");
    cmd->add_option("--alpha", f.alpha, "hypergraph-level loss weight");
    cmd->add_option("--lr", f.lr, "Adam learning rate");
    cmd->add_option("--batch-size", f.batch_size, "positive pairs per step");
    cmd->add_option("--epochs", f.epochs, "training epochs");
    cmd->add_option("--steps", f.steps, "explicit step count (overrides epochs)");
    cmd->add_option("--n-g", f.n_g, "negatives per road pair");
    cmd->add_option("--n-h", f.n_h, "negatives per road-hyperedge pair");
    cmd->add_option("--k", f.k, "hyperedge cluster count (defaults to the hypergraph file)");
    cmd->add_option("--phi", f.phi, "positional encoding scale");
    cmd->add_option("--lambda", f.lambda, "positional encoding frequency");
    cmd->add_option("--seed", f.seed, "run seed");
    cmd->add_option("--fusion", f.fusion, "channel fusion: mean|attention|mlp");
    cmd->add_option("--sampler", f.sampler, "negative sampler: random|dbs");
    cmd->add_option("--mode", f.mode, "base|attr (attr adds one-hot inputs and L_AR)");
    cmd->add_option("--directed-neighbors", f.directed_neighbors,
                    "use out-neighbors instead of the symmetrized neighborhood");
    cmd->add_option("--logsigmoid", f.logsigmoid, "squash reconstruction dots (SGNS form)");
    cmd->add_option("--early-stop", f.early_stop, "stop on training-loss plateau");
    cmd->add_option("--patience", f.patience, "plateau patience in steps");
    cmd->add_option("--dbs-node-cap", f.dbs_node_cap, "refuse dbs all-pairs BFS above this");
    cmd->add_option("--ablation", f.ablations,
                    "repeatable: no_pe|no_dam|no_gpt|no_hpt|no_hec|dam_att|dam_mlp|dbs")
        ->take_all();
}

void apply_config_file(TrainConfig& cfg, const std::string& path) {
    auto in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // strip comments and whitespace-only lines
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        apply_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

TrainConfig resolve_config(const ConfigFlags& f, int hypergraph_k) {
    TrainConfig cfg;
    if (!f.config_file.empty()) apply_config_file(cfg, f.config_file);
    if (f.d) cfg.d = *f.d;
    if (f.layers) cfg.layers = *f.layers;
    if (f.alpha) cfg.alpha = *f.alpha;
    if (f.lr) cfg.lr = *f.lr;
    if (f.batch_size) cfg.batch_size = *f.batch_size;
    if (f.epochs) cfg.epochs = *f.epochs;
    if (f.steps) cfg.steps = *f.steps;
    if (f.n_g) cfg.n_g = *f.n_g;
    if (f.n_h) cfg.n_h = *f.n_h;
    if (f.k) cfg.k = *f.k;
    if (f.phi) cfg.phi = *f.phi;
    if (f.lambda) cfg.lambda = *f.lambda;
    if (f.seed) cfg.seed = *f.seed;
    if (f.fusion) cfg.fusion = parse_fusion(*f.fusion);
    if (f.sampler) cfg.sampler = parse_sampler(*f.sampler);
    if (f.mode) cfg.mode = parse_mode(*f.mode);
    if (f.directed_neighbors) cfg.directed_neighbors = *f.directed_neighbors;
    if (f.logsigmoid) cfg.logsigmoid = *f.logsigmoid;
    if (f.early_stop) cfg.early_stop = *f.early_stop;
    if (f.patience) cfg.patience = *f.patience;
    if (f.dbs_node_cap) cfg.dbs_node_cap = *f.dbs_node_cap;
    for (const std::string& a : f.ablations) {
        if (a == "no_pe") cfg.ablation.no_pe = true;
        else if (a == "no_dam") cfg.ablation.no_dam = true;
        else if (a == "no_gpt") cfg.ablation.no_gpt = true;
        else if (a == "no_hpt") cfg.ablation.no_hpt = true;
        else if (a == "no_hec") cfg.ablation.no_hec = true;
        else if (a == "dam_att") cfg.fusion = FusionVariant::attention;
        else if (a == "dam_mlp") cfg.fusion = FusionVariant::mlp;
        else if (a == "dbs") cfg.sampler = SamplerVariant::dbs;
        else throw ConfigError("unknown ablation '" + a + "'");
    }
    if (cfg.k == 0 && !f.k) cfg.k = hypergraph_k;  // adopt K from the hypergraph file
    cfg.validate();
    if (hypergraph_k > 0 && cfg.k != hypergraph_k) {
        throw ConfigError("config K = " + std::to_string(cfg.k) +
                          " does not match the hypergraph file (K = " +
                          std::to_string(hypergraph_k) + ")");
    }
    return cfg;
}

// labels CSV keyed by road id; --task selects the column
std::vector<int> load_labels(const std::string& path, const std::string& task,
                             const std::vector<std::string>& road_ids) {
    auto in = open_input(path);
    CsvReader reader(in, path);
    int col = -1;
    for (std::size_t c = 1; c < reader.header().size(); ++c) {
        if (reader.header()[c] == task) col = static_cast<int>(c);
    }
    if (reader.header().empty() || reader.header()[0] != "id" || col < 0) {
        throw FileError(path + ": expected header id,...," + task);
    }
    std::unordered_map<std::string, int> by_id;
    CsvRow row;
    while (reader.next(row)) {
        int value = -1;
        const std::string& field = row.fields[static_cast<std::size_t>(col)];
        if (!field.empty()) {
            try {
                value = std::stoi(field);
            } catch (const std::exception&) {
                throw FileError(path + ": line " + std::to_string(row.line_no) +
                                ": cannot parse label '" + field + "'");
            }
        }
        by_id[row.fields[0]] = value;
    }
    if (by_id.size() != road_ids.size()) {
        throw FileError(path + ": " + std::to_string(by_id.size()) + " label rows for " +
                        std::to_string(road_ids.size()) + " roads");
    }
    std::vector<int> labels(road_ids.size(), -1);
    for (std::size_t i = 0; i < road_ids.size(); ++i) {
        auto it = by_id.find(road_ids[i]);
        if (it == by_id.end()) throw FileError(path + ": no label row for road '" + road_ids[i] + "'");
        labels[i] = it->second;
    }
    return labels;
}

std::vector<std::string> road_id_list(const RoadNetwork& net) {
    std::vector<std::string> ids;
    ids.reserve(net.size());
    for (const auto& r : net.roads) ids.push_back(r.id);
    return ids;
}

int cmd_generate(const std::string& spec_path, const std::string& out_dir) {
    GridCitySpec spec;
    {
        auto in = open_input(spec_path);
        spec = load_city_spec(in, spec_path);
    }
    RunManifest manifest;
    manifest.command = "generate";
    manifest.add_input(spec_path);
    GridCity city;
    {
        PhaseTimer t(manifest, "generate");
        city = generate(spec);
    }
    auto nodes = open_output(out_path(out_dir, "nodes.csv"));
    auto edges = open_output(out_path(out_dir, "edges.csv"));
    auto labels = open_output(out_path(out_dir, "labels.csv"));
    auto schema = open_output(out_path(out_dir, "schema.json"));
    write_city(city, nodes, edges, labels, schema);
    manifest.write_atomic(out_path(out_dir, "manifest.json"));
    std::cout << "generated " << city.net.size() << " roads, " << city.net.edge_count()
              << " directed edges -> " << out_dir << "\n";
    return 0;
}

int cmd_build_hypergraph(const DataFiles& files, int k, const std::string& features,
                         std::uint64_t seed, const std::string& out_dir) {
    RunManifest manifest;
    manifest.command = "build-hypergraph";
    manifest.add_input(files.nodes);
    manifest.add_input(files.edges);
    if (!files.schema.empty()) manifest.add_input(files.schema);

    RoadNetwork net = load_net(files);
    const RoadNetwork sym = symmetrize_neighbors(net);
    std::vector<std::vector<int>> faces;
    {
        PhaseTimer t(manifest, "extract_faces");
        faces = extract_faces(sym);
    }
    const ClusterFeatures kind = features == "size_only" ? ClusterFeatures::size_only
                                                         : ClusterFeatures::geometric;
    if (features != "size_only" && features != "geometric") {
        throw ConfigError("unknown --cluster-features '" + features + "' (geometric|size_only)");
    }
    Hypergraph hg;
    {
        PhaseTimer t(manifest, "build_hypergraph");
        hg = build_hypergraph(sym, faces, k, seed, kind);
    }
    auto out = open_output(out_path(out_dir, "hypergraph.json"));
    save_hypergraph(hg, out);
    manifest.write_atomic(out_path(out_dir, "manifest.json"));
    std::cout << "extracted " << faces.size() << " faces, built " << hg.hyperedge_count()
              << " hyperedges (K = " << k << ") -> " << out_dir << "\n";
    return 0;
}

int cmd_pretrain(const DataFiles& files, const ConfigFlags& flags, const std::string& out_dir) {
    RunManifest manifest;
    manifest.command = "pretrain";
    manifest.add_input(files.nodes);
    manifest.add_input(files.edges);
    if (!files.schema.empty()) manifest.add_input(files.schema);
    manifest.add_input(files.hypergraph);
    if (!flags.config_file.empty()) manifest.add_input(flags.config_file);

    RoadNetwork net = load_net(files);
    Hypergraph hg = load_hg(files, net);
    const TrainConfig cfg = resolve_config(flags, hg.k);
    manifest.config = cfg;
    manifest.has_config = true;

    PretrainResult result;
    {
        PhaseTimer t(manifest, "pretrain");
        result = pretrain(net, hg, cfg);
    }
    {
        auto out = open_output(out_path(out_dir, "checkpoint.bin"));
        save_checkpoint(result.params, cfg, out);
    }
    {
        auto out = open_output(out_path(out_dir, "loss.csv"));
        write_loss_csv(result.history, out);
    }
    {
        PhaseTimer t(manifest, "export_embeddings");
        const Tensor emb = compute_embeddings(result.params, net, hg, cfg);
        auto out = open_output(out_path(out_dir, "embeddings.tsv"));
        export_embeddings_tsv(emb, road_id_list(net), out);
    }
    manifest.write_atomic(out_path(out_dir, "manifest.json"));
    const double final_loss = result.history.empty() ? 0.0 : result.history.back().loss.total;
    std::cout << "pretrained " << result.history.size() << " steps, final total loss "
              << final_loss << " -> " << out_dir << "\n";
    return 0;
}

int cmd_export(const std::string& checkpoint_path, const DataFiles& files,
               const std::string& out_dir) {
    auto in = open_input(checkpoint_path);
    Checkpoint ck = load_checkpoint(in, checkpoint_path);
    RoadNetwork net = load_net(files);
    Hypergraph hg = load_hg(files, net);
    const Tensor emb = compute_embeddings(ck.params, net, hg, ck.config);
    auto out = open_output(out_path(out_dir, "embeddings.tsv"));
    export_embeddings_tsv(emb, road_id_list(net), out);
    std::cout << "exported " << emb.rows << " x " << emb.cols << " embeddings -> " << out_dir
              << "\n";
    return 0;
}

int cmd_eval(const std::string& embeddings_path, const std::string& checkpoint_path,
             const DataFiles& files, const std::string& labels_path, const std::string& task,
             int folds, std::uint64_t seed, const std::string& out_dir) {
    RunManifest manifest;
    manifest.command = "eval";

    EmbeddingsFile emb;
    if (!embeddings_path.empty()) {
        manifest.add_input(embeddings_path);
        auto in = open_input(embeddings_path);
        emb = load_embeddings_tsv(in, embeddings_path);
    } else {
        if (checkpoint_path.empty()) {
            throw ConfigError("eval needs --embeddings or --checkpoint with data files");
        }
        manifest.add_input(checkpoint_path);
        auto in = open_input(checkpoint_path);
        Checkpoint ck = load_checkpoint(in, checkpoint_path);
        RoadNetwork net = load_net(files);
        Hypergraph hg = load_hg(files, net);
        emb.embeddings = compute_embeddings(ck.params, net, hg, ck.config);
        emb.road_ids = road_id_list(net);
    }
    manifest.add_input(labels_path);

    const std::vector<int> labels = load_labels(labels_path, task, emb.road_ids);
    ProbeOptions opt;
    opt.folds = folds;
    EvalReport report;
    {
        PhaseTimer t(manifest, "probe");
        report = logistic_probe(emb.embeddings, labels, seed, opt);
    }
    auto out = open_output(out_path(out_dir, "eval_" + task + ".json"));
    write_eval_report(report, out);
    manifest.write_atomic(out_path(out_dir, "manifest.json"));
    std::cout << task << ": micro-F1 " << report.mean.micro << ", macro-F1 " << report.mean.macro
              << ", weighted-F1 " << report.mean.weighted << " over " << folds << " folds -> "
              << out_dir << "\n";
    return 0;
}

int cmd_query(const std::string& embeddings_path, const std::string& road_id, int top) {
    auto in = open_input(embeddings_path);
    const EmbeddingsFile emb = load_embeddings_tsv(in, embeddings_path);
    int row = -1;
    for (std::size_t r = 0; r < emb.road_ids.size(); ++r) {
        if (emb.road_ids[r] == road_id) row = static_cast<int>(r);
    }
    if (row < 0) throw FileError("road '" + road_id + "' not present in " + embeddings_path);
    for (const auto& s : query_similar(emb.embeddings, row, top)) {
        std::cout << emb.road_ids[static_cast<std::size_t>(s.road)] << '\t' << s.score << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"HyperRoad: hypergraph road-network representation learning"};
    app.require_subcommand(1);

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "synthesize a grid-city fixture");
    std::string spec_path, out_dir;
    generate_cmd->add_option("--spec", spec_path, "grid city spec JSON")->required();
    generate_cmd->add_option("--out", out_dir, "output directory")->required();

    // build-hypergraph
    auto* build_cmd = app.add_subcommand("build-hypergraph",
                                         "extract faces and build the region hypergraph");
    DataFiles build_files;
    add_data_options(build_cmd, build_files, false);
    int build_k = 0;
    std::string build_features = "geometric";
    std::uint64_t build_seed = 42;
    std::string build_out;
    build_cmd->add_option("--k", build_k, "hyperedge cluster count")->required();
    build_cmd->add_option("--cluster-features", build_features, "geometric|size_only");
    build_cmd->add_option("--seed", build_seed, "k-means seed");
    build_cmd->add_option("--out", build_out, "output directory")->required();

    // pretrain
    auto* pretrain_cmd = app.add_subcommand("pretrain", "run bi-level self-supervised training");
    DataFiles pretrain_files;
    add_data_options(pretrain_cmd, pretrain_files, true);
    ConfigFlags pretrain_flags;
    add_config_options(pretrain_cmd, pretrain_flags);
    std::string pretrain_out;
    pretrain_cmd->add_option("--out", pretrain_out, "output directory")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "5-fold logistic probe on frozen embeddings");
    std::string eval_embeddings, eval_checkpoint, eval_labels, eval_task = "road_type";
    int eval_folds = 5;
    std::uint64_t eval_seed = 42;
    std::string eval_out;
    DataFiles eval_files;
    eval_cmd->add_option("--embeddings", eval_embeddings, "embeddings TSV");
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint (needs data files)");
    eval_cmd->add_option("--nodes", eval_files.nodes, "nodes CSV (with --checkpoint)");
    eval_cmd->add_option("--edges", eval_files.edges, "edges CSV (with --checkpoint)");
    eval_cmd->add_option("--schema", eval_files.schema, "schema JSON");
    eval_cmd->add_option("--hypergraph", eval_files.hypergraph, "hypergraph JSON");
    eval_cmd->add_option("--labels", eval_labels, "gold label CSV")->required();
    eval_cmd->add_option("--task", eval_task, "label column to probe");
    eval_cmd->add_option("--folds", eval_folds, "cross-validation folds");
    eval_cmd->add_option("--seed", eval_seed, "fold split seed");
    eval_cmd->add_option("--out", eval_out, "output directory")->required();

    // query
    auto* query_cmd = app.add_subcommand("query", "top similar roads by cosine similarity");
    std::string query_embeddings, query_road;
    int query_top = 5;
    query_cmd->add_option("--embeddings", query_embeddings, "embeddings TSV")->required();
    query_cmd->add_option("--road", query_road, "query road id")->required();
    query_cmd->add_option("--top", query_top, "result count");

    // export
    auto* export_cmd = app.add_subcommand("export", "recompute embeddings from a checkpoint");
    std::string export_checkpoint, export_out;
    DataFiles export_files;
    export_cmd->add_option("--checkpoint", export_checkpoint, "checkpoint file")->required();
    add_data_options(export_cmd, export_files, true);
    export_cmd->add_option("--out", export_out, "output directory")->required();

    std::vector<const char*> argv;
    argv.push_back("hyperroad");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (generate_cmd->parsed()) return cmd_generate(spec_path, out_dir);
        if (build_cmd->parsed()) {
            return cmd_build_hypergraph(build_files, build_k, build_features, build_seed,
                                        build_out);
        }
        if (pretrain_cmd->parsed()) return cmd_pretrain(pretrain_files, pretrain_flags, pretrain_out);
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_embeddings, eval_checkpoint, eval_files, eval_labels, eval_task,
                            eval_folds, eval_seed, eval_out);
        }
        if (query_cmd->parsed()) return cmd_query(query_embeddings, query_road, query_top);
        if (export_cmd->parsed()) return cmd_export(export_checkpoint, export_files, export_out);
        std::cerr << "error: no subcommand\n";
        return 3;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace hyperroad
