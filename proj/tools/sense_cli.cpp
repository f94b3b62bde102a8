// sense: train joint text+graph node embeddings, bind ordered node sequences
// into single vectors by cyclic-shift superposition, and run the evaluation
// harness (classification, link prediction, decode sweeps, moment checks).

#include "CLI11.hpp"

#include "sense/eval.hpp"
#include "sense/graph.hpp"
#include "sense/manifest.hpp"
#include "sense/model.hpp"
#include "sense/sampler.hpp"
#include "sense/seq_codec.hpp"
#include "sense/vocab.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace sense;

namespace {

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::vector<std::size_t> parse_size_list(const std::string& text,
                                         const std::string& flag) {
    std::vector<std::size_t> out;
    for (const auto& part : split_list(text, ',')) {
        try {
            out.push_back(std::stoull(part));
        } catch (const std::exception&) {
            fail("usage", flag + ": '" + part + "' is not a number");
        }
    }
    if (out.empty()) fail("usage", flag + ": empty list");
    return out;
}

SplitSpec parse_split(const std::string& text, uint64_t seed) {
    auto parts = parse_size_list(text, "--split");
    if (parts.size() != 3)
        fail("usage", "--split wants three percentages like 60,20,20");
    SplitSpec spec;
    spec.train_frac = parts[0] / 100.0;
    spec.valid_frac = parts[1] / 100.0;
    spec.test_frac = parts[2] / 100.0;
    spec.seed = seed;
    spec.validate();
    return spec;
}

Variant parse_variant(const std::string& name) {
    if (name == "add") return Variant::Add;
    if (name == "concat") return Variant::Concat;
    fail("usage", "--variant must be add or concat");
}

TrainMode parse_mode(const std::string& name) {
    if (name == "joint") return TrainMode::Joint;
    if (name == "graph-only") return TrainMode::GraphOnly;
    if (name == "text-only") return TrainMode::TextOnly;
    fail("usage", "--mode must be joint, graph-only or text-only");
}

// Placeholder vocabulary for graph-only runs without a texts file: one inert
// token that never produces a pair.
Vocab placeholder_vocab() {
    Vocab vocab;
    vocab.token_to_id["<none>"] = 0;
    vocab.id_to_token = {"<none>"};
    vocab.counts = {1};
    vocab.total_count = 1;
    vocab.keep_prob = {1.0};
    return vocab;
}

// Flags shared by `train` and `eval linkpred` (which trains internally).
struct TrainFlags {
    std::string edges, texts, labels;
    bool directed = false;
    std::size_t dim = 128;
    std::string variant = "add";
    std::string mode = "joint";
    uint32_t walks_per_node = 10;
    uint32_t walk_length = 80;
    uint32_t text_window = 5;
    uint32_t node_window = 10;
    double p = 1.0;
    double q = 1.0;
    uint32_t negatives = 5;
    uint32_t epochs = 5;
    double beta1 = 0.025;
    double beta2 = 0.0125;
    uint64_t min_count = 5;
    double subsample = 1e-4;
    long char_limit = 500;
    uint64_t seed = 1;
    uint32_t threads = 1;

    WalkConfig walk_config() const {
        WalkConfig cfg;
        cfg.walks_per_node = walks_per_node;
        cfg.walk_length = walk_length;
        cfg.return_p = p;
        cfg.inout_q = q;
        cfg.node_window = node_window;
        return cfg;
    }
    TrainConfig train_config() const {
        TrainConfig cfg;
        cfg.variant = parse_variant(variant);
        cfg.dim = dim;
        cfg.epochs = epochs;
        cfg.negatives = negatives;
        cfg.beta1 = beta1;
        cfg.beta2 = beta2;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.text_window = text_window;
        return cfg;
    }
    std::optional<std::size_t> char_limit_opt() const {
        if (char_limit < 0) return std::nullopt;
        return static_cast<std::size_t>(char_limit);
    }
    void record(RunManifest& manifest) const {
        manifest.set_config("directed", directed);
        manifest.set_config("dim", static_cast<uint64_t>(dim));
        manifest.set_config("variant", variant);
        manifest.set_config("mode", mode);
        manifest.set_config("walks_per_node", static_cast<uint64_t>(walks_per_node));
        manifest.set_config("walk_length", static_cast<uint64_t>(walk_length));
        manifest.set_config("text_window", static_cast<uint64_t>(text_window));
        manifest.set_config("node_window", static_cast<uint64_t>(node_window));
        manifest.set_config("p", p);
        manifest.set_config("q", q);
        manifest.set_config("negatives", static_cast<uint64_t>(negatives));
        manifest.set_config("epochs", static_cast<uint64_t>(epochs));
        manifest.set_config("beta1", beta1);
        manifest.set_config("beta2", beta2);
        manifest.set_config("min_count", min_count);
        manifest.set_config("subsample", subsample);
        manifest.set_config("char_limit", static_cast<uint64_t>(char_limit < 0 ? 0 : char_limit));
        manifest.set_config("threads", static_cast<uint64_t>(threads));
        manifest.set_seed(seed);
    }
};

void add_train_flags(CLI::App* cmd, TrainFlags& f, bool require_edges = true) {
    auto* edges = cmd->add_option("--edges", f.edges, "edges.tsv: src<TAB>dst per line");
    if (require_edges) edges->required();
    cmd->add_option("--texts", f.texts, "nodes.tsv: node_id<TAB>text per line");
    cmd->add_option("--labels", f.labels, "labels.tsv: node_id<TAB>l1,l2 per line");
    cmd->add_flag("--directed", f.directed, "treat edge lines as directed arcs");
    cmd->add_option("--dim", f.dim, "embedding dimension")->capture_default_str();
    cmd->add_option("--variant", f.variant, "hidden combination: add|concat")
        ->capture_default_str();
    cmd->add_option("--mode", f.mode, "joint|graph-only|text-only")
        ->capture_default_str();
    cmd->add_option("--walks-per-node", f.walks_per_node, "walks started per node")
        ->capture_default_str();
    cmd->add_option("--walk-length", f.walk_length, "nodes per walk")
        ->capture_default_str();
    cmd->add_option("--text-window", f.text_window, "word context window")
        ->capture_default_str();
    cmd->add_option("--node-window", f.node_window, "node context window")
        ->capture_default_str();
    cmd->add_option("--p", f.p, "walk return parameter")->capture_default_str();
    cmd->add_option("--q", f.q, "walk in-out parameter")->capture_default_str();
    cmd->add_option("--negatives", f.negatives, "negative samples per pair")
        ->capture_default_str();
    cmd->add_option("--epochs", f.epochs, "training epochs")->capture_default_str();
    cmd->add_option("--beta1", f.beta1, "graph-pair learning rate")
        ->capture_default_str();
    cmd->add_option("--beta2", f.beta2, "text-pair learning rate")
        ->capture_default_str();
    cmd->add_option("--min-count", f.min_count, "minimum word count kept")
        ->capture_default_str();
    cmd->add_option("--subsample", f.subsample, "word subsampling threshold")
        ->capture_default_str();
    cmd->add_option("--char-limit", f.char_limit,
                    "description characters kept before tokenizing; -1 for all")
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
    cmd->add_option("--threads", f.threads,
                    "worker threads; >1 trades determinism for speed")
        ->capture_default_str();
}

struct LoadedCorpus {
    Graph graph;
    NodeDocs docs;
    Vocab vocab;
};

LoadedCorpus load_corpus(const TrainFlags& f, TrainMode mode,
                         RunManifest& manifest) {
    LoadedCorpus corpus;
    {
        auto timer = manifest.time_stage("load");
        corpus.graph = load_edge_list(f.edges, f.directed);
        manifest.add_input("edges", f.edges);
        if (!f.texts.empty()) {
            corpus.docs = load_node_texts(f.texts, corpus.graph, f.char_limit_opt());
            manifest.add_input("texts", f.texts);
        } else {
            if (mode != TrainMode::GraphOnly)
                fail("usage", "--texts is required unless --mode graph-only");
            corpus.docs.docs.resize(corpus.graph.node_count());
        }
        if (!f.labels.empty()) {
            load_labels(f.labels, corpus.graph);  // validates ids
            manifest.add_input("labels", f.labels);
        }
    }
    {
        auto timer = manifest.time_stage("vocab");
        corpus.vocab = f.texts.empty()
                           ? placeholder_vocab()
                           : build_vocab(corpus.docs, f.min_count, f.subsample);
    }
    return corpus;
}

void warn_if_threaded(uint32_t threads) {
    if (threads > 1)
        std::cerr << "sense: warning: --threads " << threads
                  << " applies unsynchronized updates; results are not "
                     "deterministic\n";
}

int cmd_train(const TrainFlags& f, const std::string& out,
              const std::string& out_words, std::string manifest_path) {
    TrainMode mode = parse_mode(f.mode);
    TrainConfig cfg = f.train_config();
    cfg.validate();
    warn_if_threaded(f.threads);

    RunManifest manifest("train");
    f.record(manifest);

    LoadedCorpus corpus = load_corpus(f, mode, manifest);
    TrainResult result = [&] {
        auto timer = manifest.time_stage("train");
        return train(corpus.graph, corpus.docs, corpus.vocab, f.walk_config(),
                     cfg, mode, &std::cerr);
    }();

    {
        auto timer = manifest.time_stage("write");
        std::vector<uint32_t> zero_rows;
        Matrix rows = node_embeddings(result.model, false, &zero_rows);
        save_embedding_file(out, rows, corpus.graph.node_ids);
        manifest.add_output(out);
        if (!out_words.empty()) {
            save_embedding_file(out_words, result.model.in_word,
                                corpus.vocab.id_to_token);
            manifest.add_output(out_words);
        }
    }
    if (manifest_path.empty()) manifest_path = out + ".manifest.json";
    manifest.write(manifest_path);
    std::cerr << "wrote " << out << '\n';
    return 0;
}

int cmd_encode(const std::string& embeddings, const std::string& sequence,
               bool assume_normalized, const std::string& out,
               std::string manifest_path) {
    RunManifest manifest("encode");
    manifest.set_config("sequence", sequence);
    manifest.set_config("assume_normalized", assume_normalized);
    manifest.add_input("embeddings", embeddings);

    auto ids = split_list(sequence, ',');
    if (ids.empty()) fail("usage", "--sequence must name at least one node");

    EmbeddingTable table = [&] {
        auto timer = manifest.time_stage("load");
        return EmbeddingTable::load(embeddings, assume_normalized);
    }();
    if (sequence_length_is_risky(ids.size(), table.dim()))
        std::cerr << "sense: warning: sequence length " << ids.size()
                  << " is large for dimension " << table.dim()
                  << "; decode accuracy degrades\n";

    SequenceVector seq = [&] {
        auto timer = manifest.time_stage("encode");
        return encode(ids, table);
    }();
    save_sequence_vector(out, seq);
    manifest.add_output(out);
    if (manifest_path.empty()) manifest_path = out + ".manifest.json";
    manifest.write(manifest_path);
    return 0;
}

int cmd_decode(const std::string& embeddings, const std::string& seqvec,
               bool assume_normalized, std::string manifest_path) {
    RunManifest manifest("decode");
    manifest.set_config("assume_normalized", assume_normalized);
    manifest.add_input("embeddings", embeddings);
    manifest.add_input("seqvec", seqvec);

    EmbeddingTable table = EmbeddingTable::load(embeddings, assume_normalized);
    SequenceVector seq = load_sequence_vector(seqvec);
    if (seq.values.size() != table.dim())
        fail("data", "sequence vector dimension " +
                         std::to_string(seq.values.size()) +
                         " does not match table dimension " +
                         std::to_string(table.dim()));
    {
        auto timer = manifest.time_stage("decode");
        std::cout << "position,node_id,score\n";
        for (std::size_t k = 1; k <= seq.length; ++k) {
            auto [idx, sc] = decode_position(seq, k, table);
            std::cout << k << ',' << table.ids[idx] << ',' << format_g9(sc)
                      << '\n';
        }
    }
    if (manifest_path.empty()) manifest_path = seqvec + ".decode.manifest.json";
    manifest.write(manifest_path);
    return 0;
}

int cmd_eval_classify(const std::string& embeddings, const std::string& labels,
                      const std::string& split, uint64_t seed,
                      const std::string& out, std::string manifest_path) {
    RunManifest manifest("eval classify");
    manifest.set_seed(seed);
    manifest.set_config("split", split);
    manifest.add_input("embeddings", embeddings);
    manifest.add_input("labels", labels);

    LoadedEmbeddings loaded = load_embedding_file(embeddings);
    Graph shell = build_graph_indexed(loaded.ids, {});
    LabelSet label_set = load_labels(labels, shell);

    SplitSpec spec = parse_split(split, seed);
    auto [clf, report] = [&] {
        auto timer = manifest.time_stage("classify");
        return train_ovr_classifier(loaded.rows, label_set, spec);
    }();
    for (const auto& name : report.skipped_labels)
        std::cerr << "sense: warning: label '" << name
                  << "' has fewer than 2 training positives; skipped\n";

    write_error_csv(out, report.train_error, report.valid_error,
                    report.test_error);
    manifest.add_output(out);
    manifest.set_config("chosen_l2", report.chosen_l2);
    if (manifest_path.empty()) manifest_path = out + ".manifest.json";
    manifest.write(manifest_path);
    std::cout << "test error " << format_g9(report.test_error) << '\n';
    return 0;
}

int cmd_eval_linkpred(const TrainFlags& f, double holdout,
                      const std::string& split, const std::string& out,
                      std::string manifest_path) {
    TrainMode mode = parse_mode(f.mode);
    TrainConfig cfg = f.train_config();
    cfg.validate();
    warn_if_threaded(f.threads);

    RunManifest manifest("eval linkpred");
    f.record(manifest);
    manifest.set_config("holdout", holdout);
    manifest.set_config("split", split);

    LoadedCorpus corpus = load_corpus(f, mode, manifest);
    SplitSpec spec = parse_split(split, f.seed);

    auto embed_fn = [&](const Graph& residual) {
        TrainResult r = train(residual, corpus.docs, corpus.vocab,
                              f.walk_config(), cfg, mode, nullptr);
        return node_embeddings(r.model, false);
    };
    LinkPredReport report = [&] {
        auto timer = manifest.time_stage("linkpred");
        return link_prediction(corpus.graph, embed_fn, holdout, spec, f.seed);
    }();

    write_error_csv(out, report.train_error, report.valid_error,
                    report.test_error);
    manifest.add_output(out);
    manifest.set_config("positives", static_cast<uint64_t>(report.positives));
    manifest.set_config("chosen_l2", report.chosen_l2);
    if (manifest_path.empty()) manifest_path = out + ".manifest.json";
    manifest.write(manifest_path);
    std::cout << "test error " << format_g9(report.test_error) << '\n';
    return 0;
}

int cmd_eval_sweep(const std::string& mode_name, std::size_t random_n,
                   const std::string& dims, const std::string& lengths,
                   std::size_t trials, const std::string& embeddings,
                   const std::string& edges, bool directed,
                   bool assume_normalized, uint64_t seed, const std::string& out,
                   std::string manifest_path) {
    RunManifest manifest("eval decode-sweep");
    manifest.set_seed(seed);
    manifest.set_config("mode", mode_name);
    manifest.set_config("trials", static_cast<uint64_t>(trials));
    manifest.set_config("lengths", lengths);

    DecodeExperiment exp;
    exp.lengths = parse_size_list(lengths, "--lengths");
    exp.trials = trials;
    exp.seed = seed;

    std::vector<SweepCell> cells;
    if (mode_name == "random") {
        exp.mode = SweepMode::RandomNodes;
        exp.random_n = random_n;
        exp.dims = parse_size_list(dims, "--dims");
        manifest.set_config("n", static_cast<uint64_t>(random_n));
        manifest.set_config("dims", dims);
        auto timer = manifest.time_stage("sweep");
        cells = decoding_sweep(exp);
    } else if (mode_name == "walk") {
        if (embeddings.empty() || edges.empty())
            fail("usage", "walk mode needs --embeddings and --edges");
        exp.mode = SweepMode::RandomWalk;
        manifest.add_input("embeddings", embeddings);
        manifest.add_input("edges", edges);
        EmbeddingTable table = EmbeddingTable::load(embeddings, assume_normalized);
        Graph graph = load_edge_list(edges, directed);
        auto timer = manifest.time_stage("sweep");
        cells = decoding_sweep(exp, &table, &graph);
    } else {
        fail("usage", "--mode must be random or walk");
    }

    for (const auto& cell : cells)
        if (cell.skipped)
            std::cerr << "sense: note: cell dim=" << cell.dim
                      << " length=" << cell.length << " skipped: " << cell.note
                      << '\n';
    write_sweep_csv(out, cells);
    manifest.add_output(out);
    if (manifest_path.empty()) manifest_path = out + ".manifest.json";
    manifest.write(manifest_path);
    return 0;
}

int cmd_eval_theorem(std::size_t n, std::size_t samples, double c, bool has_c,
                     std::size_t m, uint64_t seed, const std::string& out,
                     std::string manifest_path) {
    RunManifest manifest("eval theorem-check");
    manifest.set_seed(seed);
    manifest.set_config("n", static_cast<uint64_t>(n));
    manifest.set_config("samples", static_cast<uint64_t>(samples));

    Rng rng(seed);
    MomentStats stats;
    double target = 0.0;
    if (has_c) {
        manifest.set_config("c", c);
        manifest.set_config("m", static_cast<uint64_t>(m));
        auto timer = manifest.time_stage("sample");
        stats = shifted_dot_moments(n, c, m, samples, rng);
        target = (1.0 - c * c) / static_cast<double>(n - 1);
    } else {
        auto timer = manifest.time_stage("sample");
        stats = random_dot_moments(n, samples, rng);
        target = 1.0 / static_cast<double>(n);
    }
    std::cout << "mean " << format_g9(stats.mean) << '\n'
              << "variance " << format_g9(stats.variance) << '\n'
              << "target " << format_g9(target) << '\n';
    if (!out.empty()) {
        std::ofstream csv(out);
        if (!csv) fail("io", "cannot write CSV '" + out + "'");
        csv << "n,c,m,samples,mean,variance,target\n";
        csv << n << ',' << (has_c ? format_g9(c) : "") << ','
            << (has_c ? std::to_string(m) : "") << ',' << samples << ','
            << format_g9(stats.mean) << ',' << format_g9(stats.variance) << ','
            << format_g9(target) << '\n';
        manifest.add_output(out);
    }
    if (manifest_path.empty())
        manifest_path = out.empty() ? "theorem-check.manifest.json"
                                    : out + ".manifest.json";
    manifest.write(manifest_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint text+graph node embeddings with cyclic-shift sequence "
                 "encoding"};
    app.require_subcommand(1);

    // train
    TrainFlags train_flags;
    std::string train_out, train_out_words, train_manifest;
    auto* train_cmd = app.add_subcommand("train", "train node embeddings");
    add_train_flags(train_cmd, train_flags);
    train_cmd->add_option("--out", train_out, "embedding output file")->required();
    train_cmd->add_option("--out-words", train_out_words,
                          "optional word-vector dump (same format)");
    train_cmd->add_option("--manifest", train_manifest, "manifest path");

    // encode
    std::string enc_embeddings, enc_sequence, enc_out, enc_manifest;
    bool enc_assume_normalized = false;
    auto* encode_cmd =
        app.add_subcommand("encode", "bind an ordered node sequence into one vector");
    encode_cmd->add_option("--embeddings", enc_embeddings, "embedding file")
        ->required();
    encode_cmd->add_option("--sequence", enc_sequence, "comma-separated node ids")
        ->required();
    encode_cmd->add_option("--out", enc_out, "sequence vector output")->required();
    encode_cmd->add_flag("--assume-normalized", enc_assume_normalized,
                         "skip row normalization on load");
    encode_cmd->add_option("--manifest", enc_manifest, "manifest path");

    // decode
    std::string dec_embeddings, dec_seqvec, dec_manifest;
    bool dec_assume_normalized = false;
    auto* decode_cmd =
        app.add_subcommand("decode", "recover the node at every position");
    decode_cmd->add_option("--embeddings", dec_embeddings, "embedding file")
        ->required();
    decode_cmd->add_option("--seqvec", dec_seqvec, "sequence vector file")
        ->required();
    decode_cmd->add_flag("--assume-normalized", dec_assume_normalized,
                         "skip row normalization on load");
    decode_cmd->add_option("--manifest", dec_manifest, "manifest path");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluation harness");
    eval_cmd->require_subcommand(1);

    std::string cls_embeddings, cls_labels, cls_split = "60,20,20", cls_out,
                cls_manifest;
    uint64_t cls_seed = 1;
    auto* classify_cmd =
        eval_cmd->add_subcommand("classify", "one-vs-rest multi-label error");
    classify_cmd->add_option("--embeddings", cls_embeddings, "feature file")
        ->required();
    classify_cmd->add_option("--labels", cls_labels, "labels.tsv")->required();
    classify_cmd->add_option("--split", cls_split, "train,valid,test percentages")
        ->capture_default_str();
    classify_cmd->add_option("--seed", cls_seed, "split seed")->capture_default_str();
    classify_cmd->add_option("--out", cls_out, "CSV output")->required();
    classify_cmd->add_option("--manifest", cls_manifest, "manifest path");

    TrainFlags lp_flags;
    lp_flags.mode = "graph-only";
    double lp_holdout = 0.01;
    std::string lp_split = "60,20,20", lp_out, lp_manifest;
    auto* linkpred_cmd =
        eval_cmd->add_subcommand("linkpred", "held-out edge prediction error");
    add_train_flags(linkpred_cmd, lp_flags);
    linkpred_cmd->add_option("--holdout", lp_holdout, "fraction of edges removed")
        ->capture_default_str();
    linkpred_cmd->add_option("--split", lp_split, "train,valid,test percentages")
        ->capture_default_str();
    linkpred_cmd->add_option("--out", lp_out, "CSV output")->required();
    linkpred_cmd->add_option("--manifest", lp_manifest, "manifest path");

    std::string sw_mode = "random", sw_dims = "128,256,512,1024",
                sw_lengths = "1,2,5,10,20,50", sw_embeddings, sw_edges, sw_out,
                sw_manifest;
    std::size_t sw_n = 0, sw_trials = 200;
    bool sw_directed = false, sw_assume_normalized = false;
    uint64_t sw_seed = 1;
    auto* sweep_cmd = eval_cmd->add_subcommand(
        "decode-sweep", "exact-recovery rate over (dim, length) cells");
    sweep_cmd->add_option("--mode", sw_mode, "random|walk")->capture_default_str();
    sweep_cmd->add_option("--n", sw_n, "node count for random mode");
    sweep_cmd->add_option("--dims", sw_dims, "dimensions for random mode")
        ->capture_default_str();
    sweep_cmd->add_option("--lengths", sw_lengths, "sequence lengths")
        ->capture_default_str();
    sweep_cmd->add_option("--trials", sw_trials, "sequences per cell")
        ->capture_default_str();
    sweep_cmd->add_option("--embeddings", sw_embeddings, "table for walk mode");
    sweep_cmd->add_option("--edges", sw_edges, "graph for walk mode");
    sweep_cmd->add_flag("--directed", sw_directed, "walk-mode graph is directed");
    sweep_cmd->add_flag("--assume-normalized", sw_assume_normalized,
                        "skip row normalization on load");
    sweep_cmd->add_option("--seed", sw_seed, "sweep seed")->capture_default_str();
    sweep_cmd->add_option("--out", sw_out, "CSV output")->required();
    sweep_cmd->add_option("--manifest", sw_manifest, "manifest path");

    std::size_t th_n = 128, th_samples = 100000, th_m = 1;
    double th_c = 0.0;
    uint64_t th_seed = 1;
    std::string th_out, th_manifest;
    auto* theorem_cmd = eval_cmd->add_subcommand(
        "theorem-check",
        "empirical moments of shifted/unshifted unit-vector inner products");
    theorem_cmd->add_option("--n", th_n, "vector dimension")->capture_default_str();
    theorem_cmd->add_option("--samples", th_samples, "Monte-Carlo samples")
        ->capture_default_str();
    auto* c_opt =
        theorem_cmd->add_option("--c", th_c, "conditioned inner product x.y");
    theorem_cmd->add_option("--m", th_m, "cyclic shift (with --c)")
        ->capture_default_str();
    theorem_cmd->add_option("--seed", th_seed, "sampling seed")
        ->capture_default_str();
    theorem_cmd->add_option("--out", th_out, "optional CSV output");
    theorem_cmd->add_option("--manifest", th_manifest, "manifest path");

    try {
        app.parse(argc, argv);
        if (*train_cmd)
            return cmd_train(train_flags, train_out, train_out_words,
                             train_manifest);
        if (*encode_cmd)
            return cmd_encode(enc_embeddings, enc_sequence,
                              enc_assume_normalized, enc_out, enc_manifest);
        if (*decode_cmd)
            return cmd_decode(dec_embeddings, dec_seqvec, dec_assume_normalized,
                              dec_manifest);
        if (*classify_cmd)
            return cmd_eval_classify(cls_embeddings, cls_labels, cls_split,
                                     cls_seed, cls_out, cls_manifest);
        if (*linkpred_cmd)
            return cmd_eval_linkpred(lp_flags, lp_holdout, lp_split, lp_out,
                                     lp_manifest);
        if (*sweep_cmd)
            return cmd_eval_sweep(sw_mode, sw_n, sw_dims, sw_lengths, sw_trials,
                                  sw_embeddings, sw_edges, sw_directed,
                                  sw_assume_normalized, sw_seed, sw_out,
                                  sw_manifest);
        if (*theorem_cmd)
            return cmd_eval_theorem(th_n, th_samples, th_c, c_opt->count() > 0,
                                    th_m, th_seed, th_out, th_manifest);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "sense: error: [usage] " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "sense: error: [" << e.code() << "] " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "sense: error: [internal] " << e.what() << '\n';
        return 1;
    }
}
