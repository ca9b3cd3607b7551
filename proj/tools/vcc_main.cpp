// vcc — command-line front end for the clustering library.
//
// Subcommands: fit, evaluate, embed, boundary-score, export-plot.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <vcc/checkpoint.hpp>
#include <vcc/dataset.hpp>
#include <vcc/errors.hpp>
#include <vcc/graph.hpp>
#include <vcc/loss.hpp>
#include <vcc/metrics.hpp>
#include <vcc/trainer.hpp>

#include "manifest.hpp"
#include "png_writer.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef VCC_VERSION
#define VCC_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vcc;

namespace {

// ---------------------------------------------------------------------- input

// One dataset source per invocation: a CSV file, an IDX image/label pair, or
// synthetic blobs.
struct InputOpts {
    std::string csv;
    std::string format = "csv";  // csv | idx, interprets --input
    std::string labels_path;     // IDX label file (with --format idx)
    bool labels_last = false;
    std::string idx_images, idx_labels;
    std::string blobs;  // "N_PER_CLUSTERxK", e.g. "250x4"
    int blobs_dim = 2;
    double blobs_spread = 1.0;
    double blobs_separation = 10.0;
};

void add_input_flags(CLI::App* cmd, InputOpts& in) {
    cmd->add_option("--input", in.csv, "input feature file (one sample per row for csv)");
    cmd->add_option("--format", in.format, "format of --input: csv or idx")
        ->capture_default_str();
    cmd->add_option("--labels", in.labels_path,
                    "IDX label file paired with an idx-format --input");
    cmd->add_flag("--labels-in-last-column", in.labels_last,
                  "treat the last CSV column as integer labels");
    cmd->add_option("--idx-images", in.idx_images, "IDX image file (e.g. MNIST)");
    cmd->add_option("--idx-labels", in.idx_labels, "IDX label file paired with --idx-images");
    cmd->add_option("--blobs", in.blobs,
                    "generate Gaussian blobs instead of reading a file: N_PERxK (e.g. 250x4)");
    cmd->add_option("--dim", in.blobs_dim, "blob feature dimension")->capture_default_str();
    cmd->add_option("--spread", in.blobs_spread, "blob standard deviation")
        ->capture_default_str();
    cmd->add_option("--separation", in.blobs_separation, "minimum blob center separation")
        ->capture_default_str();
}

// Returns the dataset plus (for the manifest) the list of files it came from.
Dataset load_input(const InputOpts& in, uint64_t seed, std::vector<std::string>& files,
                   json& source_desc) {
    if (in.format != "csv" && in.format != "idx")
        throw ArgumentError("--format must be csv or idx, got '" + in.format + "'");

    // --format idx routes --input/--labels onto the IDX pair; otherwise
    // --input is a CSV and --labels has no meaning.
    std::string idx_images = in.idx_images, idx_labels = in.idx_labels;
    std::string csv = in.csv;
    if (in.format == "idx" && !in.csv.empty()) {
        idx_images = in.csv;
        csv.clear();
        if (!in.labels_path.empty()) idx_labels = in.labels_path;
    } else if (!in.labels_path.empty()) {
        throw ArgumentError("--labels names an IDX label file and needs --format idx; "
                            "CSV labels ride in the last column (--labels-in-last-column)");
    }

    int sources = (!csv.empty()) + (!idx_images.empty()) + (!in.blobs.empty());
    if (sources != 1)
        throw ArgumentError("exactly one of --input, --idx-images, --blobs is required");
    if (!csv.empty()) {
        files.push_back(csv);
        source_desc = {{"type", "csv"}, {"path", csv}, {"labels_in_last_column", in.labels_last}};
        return load_csv(csv, in.labels_last);
    }
    if (!idx_images.empty()) {
        if (idx_labels.empty())
            throw ArgumentError("an IDX image input requires an IDX label file "
                                "(--labels or --idx-labels)");
        files.push_back(idx_images);
        files.push_back(idx_labels);
        source_desc = {{"type", "idx"}, {"images", idx_images}, {"labels", idx_labels}};
        return load_idx(idx_images, idx_labels);
    }
    int n_per = 0, k = 0;
    if (std::sscanf(in.blobs.c_str(), "%dx%d", &n_per, &k) != 2 || n_per < 1 || k < 1)
        throw ArgumentError("--blobs expects N_PERxK, e.g. 250x4");
    source_desc = {{"type", "blobs"}, {"n_per_cluster", n_per}, {"k", k},
                   {"dim", in.blobs_dim}, {"spread", in.blobs_spread},
                   {"separation", in.blobs_separation}, {"seed", seed}};
    return make_blobs(n_per, k, in.blobs_dim, in.blobs_spread, in.blobs_separation, seed);
}

// ----------------------------------------------------------------- run config

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw ArgumentError("bad integer list element '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ArgumentError("empty integer list");
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ArgumentError("config key '" + key + "' expects true/false, got '" + v + "'");
}

Metric parse_metric(const std::string& v, const std::string& what) {
    if (v == "euclidean") return Metric::kEuclidean;
    throw ArgumentError(what + " must be euclidean, got '" + v + "'");
}

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::kEuclidean: return "euclidean";
    }
    return "unknown";
}

// key=value lines mirroring the TrainConfig fields; '#' starts a comment.
void apply_config_file(const std::string& path, TrainConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw ArgumentError("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        auto trim = [&](std::string& s) {
            s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
            s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        };
        trim(key);
        trim(val);
        try {
            if (key == "m_neighbors") cfg.m_neighbors = std::stoi(val);
            else if (key == "metric") cfg.metric = parse_metric(val, "config key 'metric'");
            else if (key == "k_clusters") cfg.k_clusters = std::stoi(val);
            else if (key == "latent_dim") cfg.latent_dim = std::stoi(val);
            else if (key == "epochs") cfg.epochs = std::stoi(val);
            else if (key == "batch_size") cfg.batch_size = std::stoi(val);
            else if (key == "learning_rate") cfg.learning_rate = std::stod(val);
            else if (key == "momentum") cfg.momentum = std::stod(val);
            else if (key == "weight_decay") cfg.weight_decay = std::stod(val);
            else if (key == "gamma") cfg.gamma = std::stod(val);
            else if (key == "n_neg") cfg.n_neg = std::stoi(val);
            else if (key == "center_init_epoch") cfg.center_init_epoch = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "clamp_eps") cfg.clamp_eps = std::stod(val);
            else if (key == "enable_contraction") cfg.enable_contraction = parse_bool(val, key);
            else if (key == "enable_expansion") cfg.enable_expansion = parse_bool(val, key);
            else if (key == "multiplicity_cap") cfg.multiplicity_cap = std::stoi(val);
            else if (key == "hidden_dims") cfg.hidden_dims = parse_int_list(val);
            else if (key == "precision") {
                if (val == "f32") cfg.precision = Precision::F32;
                else if (val == "f64") cfg.precision = Precision::F64;
                else throw ArgumentError("precision must be f32 or f64, got '" + val + "'");
            } else {
                throw ArgumentError(path + ":" + std::to_string(lineno) + ": unknown key '" +
                                    key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw ArgumentError(path + ":" + std::to_string(lineno) + ": bad value for '" +
                                key + "'");
        }
    }
}

json config_to_json(const TrainConfig& cfg) {
    return json{{"m_neighbors", cfg.m_neighbors},
                {"metric", metric_name(cfg.metric)},
                {"k_clusters", cfg.k_clusters},
                {"latent_dim", cfg.latent_dim},
                {"epochs", cfg.epochs},
                {"batch_size", cfg.batch_size},
                {"learning_rate", cfg.learning_rate},
                {"momentum", cfg.momentum},
                {"weight_decay", cfg.weight_decay},
                {"gamma", cfg.gamma},
                {"n_neg", cfg.n_neg},
                {"center_init_epoch", cfg.center_init_epoch},
                {"seed", cfg.seed},
                {"clamp_eps", cfg.clamp_eps},
                {"enable_contraction", cfg.enable_contraction},
                {"enable_expansion", cfg.enable_expansion},
                {"multiplicity_cap", cfg.multiplicity_cap},
                {"hidden_dims", cfg.hidden_dims},
                {"precision", cfg.precision == Precision::F64 ? "f64" : "f32"}};
}

// Flag holders so a flag given on the command line overrides the config file.
struct ConfigOverrides {
    std::optional<int> k, latent_dim, epochs, batch_size, n_neg, center_init_epoch, m, cap;
    std::optional<double> lr, momentum, weight_decay, gamma, clamp_eps;
    std::optional<std::string> hidden, precision;
    bool no_contraction = false, no_expansion = false;

    void apply(TrainConfig& cfg) const {
        if (k) cfg.k_clusters = *k;
        if (latent_dim) cfg.latent_dim = *latent_dim;
        if (epochs) cfg.epochs = *epochs;
        if (batch_size) cfg.batch_size = *batch_size;
        if (n_neg) cfg.n_neg = *n_neg;
        if (center_init_epoch) cfg.center_init_epoch = *center_init_epoch;
        if (m) cfg.m_neighbors = *m;
        if (cap) cfg.multiplicity_cap = *cap;
        if (lr) cfg.learning_rate = *lr;
        if (momentum) cfg.momentum = *momentum;
        if (weight_decay) cfg.weight_decay = *weight_decay;
        if (gamma) cfg.gamma = *gamma;
        if (clamp_eps) cfg.clamp_eps = *clamp_eps;
        if (hidden) cfg.hidden_dims = parse_int_list(*hidden);
        if (precision) {
            if (*precision == "f32") cfg.precision = Precision::F32;
            else if (*precision == "f64") cfg.precision = Precision::F64;
            else throw ArgumentError("--precision must be f32 or f64");
        }
        if (no_contraction) cfg.enable_contraction = false;
        if (no_expansion) cfg.enable_expansion = false;
    }
};

void add_config_flags(CLI::App* cmd, ConfigOverrides& ov) {
    cmd->add_option("--k", ov.k, "number of clusters");
    cmd->add_option("--latent-dim,-d", ov.latent_dim, "embedding dimension");
    cmd->add_option("--epochs", ov.epochs, "training epochs");
    cmd->add_option("--batch-size", ov.batch_size, "boundary pairs per batch");
    cmd->add_option("--n-neg", ov.n_neg, "disconnected pairs per boundary pair");
    cmd->add_option("--center-init-epoch", ov.center_init_epoch,
                    "epoch at which cluster centers are initialized");
    cmd->add_option("--m", ov.m, "nearest-neighbor count for the latent graph");
    cmd->add_option("--multiplicity-cap", ov.cap, "edge multiplicity guard");
    cmd->add_option("--lr", ov.lr, "learning rate");
    cmd->add_option("--momentum", ov.momentum, "SGD momentum");
    cmd->add_option("--weight-decay", ov.weight_decay, "weight decay");
    cmd->add_option("--gamma", ov.gamma, "clustering-weight slope (beta = gamma * epoch)");
    cmd->add_option("--clamp-eps", ov.clamp_eps, "similarity clamp epsilon");
    cmd->add_option("--hidden", ov.hidden, "hidden layer widths, comma separated");
    cmd->add_option("--precision", ov.precision, "f32 or f64");
    cmd->add_flag("--no-contraction", ov.no_contraction, "disable the contraction loss");
    cmd->add_flag("--no-expansion", ov.no_expansion, "disable the expansion loss");
}

// -------------------------------------------------------------------- output

void write_embeddings_csv(const std::string& path, const std::vector<int64_t>& ids,
                          const Mat<double>& H, const std::vector<int>* assignments) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << "id";
    for (int c = 1; c <= H.cols; ++c) out << ",h" << c;
    if (assignments) out << ",assignment";
    out << "\n";
    char buf[64];
    for (int i = 0; i < H.rows; ++i) {
        out << ids[i];
        for (int c = 0; c < H.cols; ++c) {
            std::snprintf(buf, sizeof buf, ",%.10g", H(i, c));
            out << buf;
        }
        if (assignments) out << "," << (*assignments)[i];
        out << "\n";
    }
    if (!out.flush()) throw IoError("short write to " + path);
}

void write_loss_log(const std::string& path, const std::vector<LossBreakdown>& hist) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << "epoch,l_bps,l_c,l_e,l_clu,beta,total\n";
    char buf[160];
    for (size_t e = 0; e < hist.size(); ++e) {
        const LossBreakdown& l = hist[e];
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", e, l.l_bps,
                      l.l_c, l.l_e, l.l_clu, l.beta, l.total);
        out << buf;
    }
    if (!out.flush()) throw IoError("short write to " + path);
}

std::vector<int> argmax_rows(const Mat<double>& Q) {
    std::vector<int> out(Q.rows);
    for (int i = 0; i < Q.rows; ++i) {
        int best = 0;
        for (int k = 1; k < Q.cols; ++k)
            if (Q(i, k) > Q(i, best)) best = k;
        out[i] = best;
    }
    return out;
}

// Integer labels from a CSV file: last comma-separated field of each row, a
// leading non-numeric header line is skipped.
std::vector<int> read_label_column(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    std::vector<int> out;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find_last_of(',');
        std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            size_t pos = 0;
            int v = std::stoi(cell, &pos);
            if (pos != cell.size()) throw std::invalid_argument(cell);
            out.push_back(v);
        } catch (const std::invalid_argument&) {
            if (first) {  // header row
                first = false;
                continue;
            }
            throw ParseError(path + ": non-integer label '" + cell + "'");
        }
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------------- fit

int cmd_fit(const InputOpts& in, const ConfigOverrides& ov, const std::string& config_path,
            uint64_t seed, const std::string& out_dir, const std::string& checkpoint_in,
            std::string checkpoint_out, bool dump_graph) {
    TrainConfig cfg;
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    ov.apply(cfg);
    cfg.seed = seed;

    fs::create_directories(out_dir);
    std::vector<std::string> input_files;
    json source;
    Dataset ds = load_input(in, seed, input_files, source);
    validate(ds);
    if (cfg.k_clusters == 0 && source.contains("k")) cfg.k_clusters = source["k"];
    if (cfg.k_clusters == 0)
        throw ArgumentError("--k is required (or set k_clusters in the config file)");

    std::string emb_path = out_dir + "/embeddings.csv";
    std::string loss_path = out_dir + "/loss_log.csv";
    std::string metrics_path = out_dir + "/metrics.json";
    if (checkpoint_out.empty()) checkpoint_out = out_dir + "/checkpoint.bin";
    std::string graph_path = out_dir + "/graph_edges.csv";
    std::string manifest_path = out_dir + "/manifest.json";

    bool labeled = !ds.labels.empty();
    json outputs = {{"embeddings", emb_path}, {"loss_log", loss_path},
                    {"checkpoint", checkpoint_out}};
    if (labeled) outputs["metrics"] = metrics_path;
    if (dump_graph) outputs["graph_edges"] = graph_path;

    json manifest = {{"version", VCC_VERSION},
                     {"command", "fit"},
                     {"created", vcctools::iso_utc_now()},
                     {"config", config_to_json(cfg)},
                     {"source", source},
                     {"inputs", json::array()},
                     {"outputs", outputs}};
    for (const std::string& p : input_files) {
        vcctools::FileDigest d = vcctools::digest_file(p);
        manifest["inputs"].push_back({{"path", p}, {"bytes", d.bytes}, {"crc32", d.crc32}});
    }
    vcctools::write_json_atomic(manifest, manifest_path);

    if (dump_graph) {
        LatentGraph g = build_latent_graph(ds, cfg.m_neighbors);
        std::ofstream gout(graph_path, std::ios::trunc);
        if (!gout) throw IoError("cannot write " + graph_path);
        gout << "i,j,w\n";
        char buf[96];
        for (const auto& e : g.edges) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.10g\n", e.i, e.j, e.w);
            gout << buf;
        }
    }

    Checkpoint resume;
    bool resuming = !checkpoint_in.empty();
    if (resuming) resume = load_checkpoint(checkpoint_in);

    // The resume point is already a good state: an abort before the first
    // freshly completed epoch can still fall back to it.
    Checkpoint last_good;
    bool have_good = false;
    if (resuming) {
        last_good = resume;
        have_good = true;
    }
    auto on_epoch = [&](int epoch, const LossBreakdown& l, const Checkpoint& ck) {
        last_good = ck;
        have_good = true;
        std::fprintf(stderr, "epoch %d/%d  total %.6f  (bps %.4f  c %.4f  e %.4f  clu %.4f)\n",
                     epoch + 1, cfg.epochs, l.total, l.l_bps, l.l_c, l.l_e, l.l_clu);
    };

    RunResult rr;
    try {
        rr = fit(ds, cfg, resuming ? &resume : nullptr, on_epoch);
    } catch (const NonFiniteError& e) {
        if (have_good) {
            save_checkpoint(last_good, checkpoint_out);
            std::fprintf(stderr,
                         "error: %s\nlast good state (epoch %d) saved to %s\n", e.what(),
                         last_good.epoch_next, checkpoint_out.c_str());
        } else {
            std::fprintf(stderr, "error: %s (no completed epoch to save)\n", e.what());
        }
        return 1;
    }

    write_embeddings_csv(emb_path, ds.sample_ids, rr.embeddings, &rr.assignments);
    write_loss_log(loss_path, rr.loss_history);
    save_checkpoint(rr.checkpoint, checkpoint_out);
    if (labeled) {
        MetricsReport m = evaluate(rr.assignments, ds.labels);
        std::printf("acc %.6f nmi %.6f\n", m.acc, m.nmi);
        vcctools::write_json_atomic(json{{"acc", m.acc}, {"nmi", m.nmi}}, metrics_path);
    } else {
        std::printf("done (no labels; metrics skipped)\n");
    }
    return 0;
}

// ----------------------------------------------------------------- the rest

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path,
                 const std::string& out_dir) {
    std::vector<int> pred = read_label_column(pred_path);
    std::vector<int> truth = read_label_column(truth_path);
    MetricsReport m = evaluate(pred, truth);
    std::printf("acc %.6f nmi %.6f\n", m.acc, m.nmi);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        vcctools::write_json_atomic(json{{"acc", m.acc}, {"nmi", m.nmi}},
                                    out_dir + "/metrics.json");
    }
    return 0;
}

int cmd_embed(const InputOpts& in, const std::string& checkpoint_in, uint64_t seed,
              const std::string& out_dir) {
    Checkpoint ck = load_checkpoint(checkpoint_in);
    std::vector<std::string> files;
    json source;
    Dataset ds = load_input(in, seed, files, source);
    validate(ds);
    Mat<double> H = embed(ck, ds);
    fs::create_directories(out_dir);
    std::string path = out_dir + "/embeddings.csv";
    if (ck.has_centers) {
        std::vector<int> assign = argmax_rows(assignment_q(H, ck.centers));
        write_embeddings_csv(path, ds.sample_ids, H, &assign);
    } else {
        write_embeddings_csv(path, ds.sample_ids, H, nullptr);
    }
    std::printf("wrote %s (%d rows, d=%d)\n", path.c_str(), H.rows, H.cols);
    return 0;
}

int cmd_boundary_score(const InputOpts& in, int m, uint64_t seed, const std::string& out_dir) {
    std::vector<std::string> files;
    json source;
    Dataset ds = load_input(in, seed, files, source);
    validate(ds);
    Mat<int> idx;
    Mat<double> dist;
    knn_distances(ds, m, idx, dist);
    std::vector<double> score = boundary_scores(dist);
    fs::create_directories(out_dir);
    std::string path = out_dir + "/scores.csv";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << "id,score\n";
    char buf[64];
    for (size_t i = 0; i < score.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld,%.10g\n",
                      static_cast<long long>(ds.sample_ids[i]), score[i]);
        out << buf;
    }
    if (!out.flush()) throw IoError("short write to " + path);
    std::printf("wrote %s (%zu rows)\n", path.c_str(), score.size());
    return 0;
}

// Embedding CSV rows as written by fit/embed: id, h1..hd [, assignment].
struct EmbeddingFile {
    std::vector<double> x, y;        // first two coordinates
    std::vector<int> cls;            // assignment column (0 when absent)
    int d = 0;
    std::vector<std::vector<double>> coords;  // all coordinates, row major
    std::vector<long long> ids;
};

EmbeddingFile read_embeddings_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    EmbeddingFile ef;
    std::string line;
    bool has_assignment = false, header_seen = false;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            header_seen = true;
            // header row: "id,h1,...,[assignment]"
            if (!cells.empty() && cells[0] == "id") {
                has_assignment = cells.back() == "assignment";
                ef.d = static_cast<int>(cells.size()) - 1 - (has_assignment ? 1 : 0);
                continue;
            }
            // no header: infer d assuming a trailing assignment column
            has_assignment = cells.size() >= 3;
            ef.d = static_cast<int>(cells.size()) - 1 - (has_assignment ? 1 : 0);
        }
        int want = 1 + ef.d + (has_assignment ? 1 : 0);
        if (static_cast<int>(cells.size()) != want)
            throw ShapeError(path + ": expected " + std::to_string(want) + " columns, got " +
                             std::to_string(cells.size()));
        try {
            ef.ids.push_back(std::stoll(cells[0]));
            std::vector<double> row(ef.d);
            for (int c = 0; c < ef.d; ++c) row[c] = std::stod(cells[1 + c]);
            ef.coords.push_back(row);
            ef.x.push_back(row[0]);
            ef.y.push_back(ef.d > 1 ? row[1] : 0.0);
            ef.cls.push_back(has_assignment ? std::stoi(cells.back()) : 0);
        } catch (const std::invalid_argument&) {
            throw ParseError(path + ": non-numeric cell in row " +
                             std::to_string(ef.ids.size() + 1));
        }
    }
    if (ef.ids.empty()) throw ShapeError(path + ": no data rows");
    return ef;
}

int cmd_export_plot(const std::string& embeddings_path, const std::string& out_dir,
                    bool csv_only, int size_px) {
    EmbeddingFile ef = read_embeddings_csv(embeddings_path);
    fs::create_directories(out_dir);
    std::string csv_path = out_dir + "/plot.csv";
    {
        std::ofstream out(csv_path, std::ios::trunc);
        if (!out) throw IoError("cannot write " + csv_path);
        out << "id";
        for (int c = 1; c <= ef.d; ++c) out << ",h" << c;
        out << ",assignment\n";
        char buf[64];
        for (size_t i = 0; i < ef.ids.size(); ++i) {
            out << ef.ids[i];
            for (int c = 0; c < ef.d; ++c) {
                std::snprintf(buf, sizeof buf, ",%.10g", ef.coords[i][c]);
                out << buf;
            }
            out << "," << ef.cls[i] << "\n";
        }
    }
    std::printf("wrote %s\n", csv_path.c_str());
    if (csv_only) return 0;
    if (ef.d != 2)
        throw DimensionError("scatter render needs 2-D embeddings, got d=" +
                             std::to_string(ef.d) + " (use --csv-only for other d)");
    std::string png_path = out_dir + "/plot.png";
    vcctools::render_scatter(ef.x, ef.y, ef.cls, size_px, png_path);
    std::printf("wrote %s\n", png_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vcc: graph-based deep clustering (fit, evaluate, embed, "
                 "boundary-score, export-plot)"};
    app.set_version_flag("--version", VCC_VERSION);
    app.require_subcommand(1);

    std::function<int()> run;

    // fit
    {
        auto* cmd = app.add_subcommand("fit", "train on a dataset and write run artifacts");
        auto in = std::make_shared<InputOpts>();
        auto ov = std::make_shared<ConfigOverrides>();
        auto config_path = std::make_shared<std::string>();
        auto seed = std::make_shared<uint64_t>(0);
        auto out_dir = std::make_shared<std::string>("vcc-out");
        auto ck_in = std::make_shared<std::string>();
        auto ck_out = std::make_shared<std::string>();
        auto dump_graph = std::make_shared<bool>(false);
        add_input_flags(cmd, *in);
        add_config_flags(cmd, *ov);
        cmd->add_option("--config", *config_path, "key=value config file");
        cmd->add_option("--seed", *seed, "random seed")->capture_default_str();
        cmd->add_option("--out-dir", *out_dir, "output directory")->capture_default_str();
        cmd->add_option("--checkpoint-in", *ck_in, "resume from this checkpoint");
        cmd->add_option("--checkpoint-out", *ck_out,
                        "checkpoint path (default <out-dir>/checkpoint.bin)");
        cmd->add_flag("--dump-graph", *dump_graph, "also write the graph edge list CSV");
        cmd->callback([=, &run]() {
            run = [=]() {
                return cmd_fit(*in, *ov, *config_path, *seed, *out_dir, *ck_in, *ck_out,
                               *dump_graph);
            };
        });
    }

    // evaluate
    {
        auto* cmd = app.add_subcommand("evaluate", "ACC/NMI between two label files");
        auto pred = std::make_shared<std::string>();
        auto truth = std::make_shared<std::string>();
        auto out_dir = std::make_shared<std::string>();
        cmd->add_option("--pred", *pred, "predicted labels CSV (last column is read)")
            ->required();
        cmd->add_option("--truth", *truth, "true labels CSV (last column is read)")->required();
        cmd->add_option("--out-dir", *out_dir, "also write metrics.json here");
        cmd->callback([=, &run]() { run = [=]() { return cmd_evaluate(*pred, *truth, *out_dir); }; });
    }

    // embed
    {
        auto* cmd = app.add_subcommand("embed", "map a dataset through a saved checkpoint");
        auto in = std::make_shared<InputOpts>();
        auto ck_in = std::make_shared<std::string>();
        auto seed = std::make_shared<uint64_t>(0);
        auto out_dir = std::make_shared<std::string>("vcc-out");
        add_input_flags(cmd, *in);
        cmd->add_option("--checkpoint-in", *ck_in, "encoder checkpoint")->required();
        cmd->add_option("--seed", *seed, "random seed (blob generation only)")
            ->capture_default_str();
        cmd->add_option("--out-dir", *out_dir, "output directory")->capture_default_str();
        cmd->callback([=, &run]() { run = [=]() { return cmd_embed(*in, *ck_in, *seed, *out_dir); }; });
    }

    // boundary-score
    {
        auto* cmd = app.add_subcommand("boundary-score",
                                       "neighbor-distance variance per sample");
        auto in = std::make_shared<InputOpts>();
        auto m = std::make_shared<int>(10);
        auto seed = std::make_shared<uint64_t>(0);
        auto out_dir = std::make_shared<std::string>("vcc-out");
        add_input_flags(cmd, *in);
        cmd->add_option("--m", *m, "neighbor count")->capture_default_str();
        cmd->add_option("--seed", *seed, "random seed (blob generation only)")
            ->capture_default_str();
        cmd->add_option("--out-dir", *out_dir, "output directory")->capture_default_str();
        cmd->callback(
            [=, &run]() { run = [=]() { return cmd_boundary_score(*in, *m, *seed, *out_dir); }; });
    }

    // export-plot
    {
        auto* cmd = app.add_subcommand("export-plot",
                                       "scatter image / plot CSV from an embeddings file");
        auto emb = std::make_shared<std::string>();
        auto out_dir = std::make_shared<std::string>("vcc-out");
        auto csv_only = std::make_shared<bool>(false);
        auto size_px = std::make_shared<int>(800);
        cmd->add_option("--embeddings", *emb, "embeddings CSV written by fit/embed")
            ->required();
        cmd->add_option("--out-dir", *out_dir, "output directory")->capture_default_str();
        auto csv_flag = cmd->add_flag("--csv-only", *csv_only, "skip the raster image (any d)");
        // Rendering is already the default; --render exists to state it
        // explicitly and to conflict with --csv-only.
        cmd->add_flag("--render", "render the raster image (default; requires d=2)")
            ->excludes(csv_flag);
        cmd->add_option("--size", *size_px, "image side length in pixels")
            ->capture_default_str();
        cmd->callback(
            [=, &run]() { run = [=]() { return cmd_export_plot(*emb, *out_dir, *csv_only, *size_px); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // --help/--version exit 0, usage errors exit 2
    }

    try {
        return run ? run() : 2;
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
