#include "sense/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace sense {

namespace {

// splitmix64 over (seed, salt); derives independent rng streams.
uint64_t mix64(uint64_t a, uint64_t b) {
    uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 0x243f6a8885a308d3ULL);
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27; x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// softplus(x) = log(1 + e^x), the stable form of -log sig(-x)
double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

void stable_softmax(const std::vector<double>& logits, std::vector<double>& probs) {
    probs.resize(logits.size());
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
}

}  // namespace

void TrainConfig::validate() const {
    if (dim < 1) fail("config", "dim must be >= 1");
    if (epochs < 1) fail("config", "epochs must be >= 1");
    if (negatives < 1) fail("config", "negatives must be >= 1");
    if (!(beta1 > beta2 && beta2 > 0.0))
        fail("config", "learning rates must satisfy beta1 > beta2 > 0 "
                       "(graph rate strictly above text rate)");
    if (threads < 1) fail("config", "threads must be >= 1");
}

SenseModel::SenseModel(std::size_t word_count, std::size_t node_count,
                       std::size_t d, Variant v, uint64_t seed)
    : variant(v), dim(d) {
    if (word_count < 1 || node_count < 1 || d < 1)
        fail("config", "model dimensions must be >= 1");
    in_word = Matrix(word_count, d);
    in_node = Matrix(node_count, d);
    out = Matrix(word_count + node_count, hidden_dim());

    Rng rng(seed);
    const double bound = 0.5 / static_cast<double>(d);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (double& x : in_word.data) x = uniform(rng);
    for (double& x : in_node.data) x = uniform(rng);
}

void SenseModel::hidden_into(int32_t input_word, uint32_t input_node,
                             double* out_h) const {
    const double* node_row = in_node.row(input_node);
    if (variant == Variant::Add) {
        if (input_word >= 0) {
            const double* word_row = in_word.row(static_cast<uint32_t>(input_word));
            for (std::size_t i = 0; i < dim; ++i) out_h[i] = word_row[i] + node_row[i];
        } else {
            std::memcpy(out_h, node_row, dim * sizeof(double));
        }
    } else {
        if (input_word >= 0) {
            std::memcpy(out_h, in_word.row(static_cast<uint32_t>(input_word)),
                        dim * sizeof(double));
        } else {
            std::memset(out_h, 0, dim * sizeof(double));
        }
        std::memcpy(out_h + dim, node_row, dim * sizeof(double));
    }
}

std::vector<double> SenseModel::hidden(int32_t input_word,
                                       uint32_t input_node) const {
    std::vector<double> h(hidden_dim());
    hidden_into(input_word, input_node, h.data());
    return h;
}

void SenseModel::full_output_probs(std::span<const double> hidden,
                                   std::vector<double>& word_probs,
                                   std::vector<double>& node_probs) const {
    if (hidden.size() != hidden_dim())
        fail("data", "hidden vector dimension mismatch");
    const std::size_t w = word_count();
    const std::size_t n = node_count();
    std::vector<double> logits(w);
    for (std::size_t i = 0; i < w; ++i)
        logits[i] = dot(hidden.data(), out.row(i), hidden_dim());
    stable_softmax(logits, word_probs);
    logits.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        logits[j] = dot(hidden.data(), out.row(w + j), hidden_dim());
    stable_softmax(logits, node_probs);
}

namespace {

struct TargetTerm {
    std::size_t out_row;
    double g;  // d(loss)/d(logit): sig(z)-1 for the positive, sig(z) for negatives
};

// Shared core: evaluates loss and per-target logit gradients at the current
// parameters. grad_h, when non-null, receives d(loss)/d(hidden).
double eval_pair(const SenseModel& model, const TrainingPair& pair,
                 std::span<const uint32_t> negatives, const double* h,
                 std::vector<TargetTerm>& terms, double* grad_h) {
    const std::size_t hd = model.hidden_dim();
    const std::size_t base = pair.kind == PairKind::Text ? 0 : model.word_count();

    terms.clear();
    double loss = 0.0;
    {
        const std::size_t row = model.target_index(pair);
        double z = dot(h, model.out.row(row), hd);
        loss += softplus(-z);
        terms.push_back({row, sigmoid(z) - 1.0});
    }
    for (uint32_t neg : negatives) {
        const std::size_t row = base + neg;
        if (row >= model.out.rows) fail("data", "negative target out of range");
        double z = dot(h, model.out.row(row), hd);
        loss += softplus(z);
        terms.push_back({row, sigmoid(z)});
    }
    if (grad_h) {
        std::fill(grad_h, grad_h + hd, 0.0);
        for (const auto& term : terms)
            axpy(term.g, model.out.row(term.out_row), grad_h, hd);
    }
    return loss;
}

}  // namespace

double pair_loss(const SenseModel& model, const TrainingPair& pair,
                 std::span<const uint32_t> negatives) {
    std::vector<double> h = model.hidden(pair.input_word, pair.input_node);
    std::vector<TargetTerm> terms;
    return eval_pair(model, pair, negatives, h.data(), terms, nullptr);
}

double pair_loss_and_grads(const SenseModel& model, const TrainingPair& pair,
                           std::span<const uint32_t> negatives,
                           PairGrads& grads) {
    const std::size_t d = model.dim;
    std::vector<double> h = model.hidden(pair.input_word, pair.input_node);
    std::vector<double> grad_h(model.hidden_dim());
    std::vector<TargetTerm> terms;
    double loss = eval_pair(model, pair, negatives, h.data(), terms, grad_h.data());

    grads.has_word = pair.input_word >= 0;
    grads.d_word.assign(d, 0.0);
    grads.d_node.assign(d, 0.0);
    if (model.variant == Variant::Add) {
        if (grads.has_word) grads.d_word.assign(grad_h.begin(), grad_h.end());
        grads.d_node.assign(grad_h.begin(), grad_h.end());
    } else {
        if (grads.has_word)
            grads.d_word.assign(grad_h.begin(), grad_h.begin() + d);
        grads.d_node.assign(grad_h.begin() + d, grad_h.end());
    }

    grads.d_out.clear();
    for (const auto& term : terms) {
        std::vector<double> g(model.hidden_dim());
        axpy(term.g, h.data(), g.data(), model.hidden_dim());
        grads.d_out.emplace_back(static_cast<uint32_t>(term.out_row), std::move(g));
    }
    return loss;
}

double sgd_step(SenseModel& model, const TrainingPair& pair,
                std::span<const uint32_t> negatives, const TrainConfig& cfg,
                double progress) {
    double decay = cfg.lr_decay
                       ? std::max(1e-4, 1.0 - std::clamp(progress, 0.0, 1.0))
                       : 1.0;
    double rate = (pair.kind == PairKind::Graph ? cfg.beta1 : cfg.beta2) * decay;

    const std::size_t d = model.dim;
    const std::size_t hd = model.hidden_dim();
    thread_local std::vector<double> h, grad_h;
    thread_local std::vector<TargetTerm> terms;
    h.resize(hd);
    grad_h.resize(hd);

    model.hidden_into(pair.input_word, pair.input_node, h.data());
    double loss = eval_pair(model, pair, negatives, h.data(), terms, grad_h.data());

    // Output rows move only after grad_h is fully accumulated, so the whole
    // step is taken at the pre-step parameters.
    for (const auto& term : terms)
        axpy(-rate * term.g, h.data(), model.out.row(term.out_row), hd);

    double* node_row = model.in_node.row(pair.input_node);
    if (model.variant == Variant::Add) {
        axpy(-rate, grad_h.data(), node_row, d);
        if (pair.input_word >= 0)
            axpy(-rate, grad_h.data(),
                 model.in_word.row(static_cast<uint32_t>(pair.input_word)), d);
    } else {
        axpy(-rate, grad_h.data() + d, node_row, d);
        if (pair.input_word >= 0)
            axpy(-rate, grad_h.data(),
                 model.in_word.row(static_cast<uint32_t>(pair.input_word)), d);
    }
    return loss;
}

namespace {

void draw_negatives(const AliasTable& noise, uint32_t true_target, uint32_t k,
                    Rng& rng, std::vector<uint32_t>& out) {
    out.clear();
    for (uint32_t i = 0; i < k; ++i) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            uint32_t candidate = noise.sample(rng);
            if (candidate != true_target) {
                out.push_back(candidate);
                break;
            }
        }
    }
}

struct EpochShare {
    const std::vector<TrainingPair>* pairs;
    const AliasTable* word_noise;
    const AliasTable* node_noise;
    std::atomic<uint64_t>* processed;
    uint64_t planned_total;
};

double run_range(SenseModel& model, const TrainConfig& cfg, const EpochShare& share,
                 std::size_t begin, std::size_t end, Rng rng, std::ostream* log,
                 double* log_window_loss, uint64_t* log_window_count) {
    std::vector<uint32_t> negatives;
    double loss_sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const TrainingPair& pair = (*share.pairs)[i];
        const AliasTable* noise = pair.kind == PairKind::Text ? share.word_noise
                                                              : share.node_noise;
        draw_negatives(*noise, pair.target, cfg.negatives, rng, negatives);
        uint64_t done = share.processed->fetch_add(1, std::memory_order_relaxed);
        double progress = static_cast<double>(done) /
                          static_cast<double>(share.planned_total);
        double loss = sgd_step(model, pair, negatives, cfg, progress);
        loss_sum += loss;
        if (log) {
            *log_window_loss += loss;
            if (++*log_window_count % 10000 == 0) {
                (*log) << "  pairs " << done + 1 << "  mean loss "
                       << *log_window_loss / 10000.0 << '\n';
                *log_window_loss = 0.0;
            }
        }
    }
    return loss_sum;
}

}  // namespace

TrainResult train(const Graph& graph, const NodeDocs& docs, const Vocab& vocab,
                  const WalkConfig& walk_cfg, const TrainConfig& cfg,
                  TrainMode mode, std::ostream* log) {
    cfg.validate();
    walk_cfg.validate();
    const bool include_graph = mode != TrainMode::TextOnly;
    const bool include_text = mode != TrainMode::GraphOnly;

    EncodedDocs encoded = encode_docs(docs, vocab);
    TrainResult result{
        SenseModel(vocab.size(), graph.node_count(), cfg.dim, cfg.variant, cfg.seed),
        {}, 0};
    SenseModel& model = result.model;

    std::optional<AliasTable> word_noise;
    if (include_text)
        word_noise = AliasTable::from_counts(vocab.counts, cfg.noise_power);

    std::atomic<uint64_t> processed{0};
    uint64_t planned_total = 0;

    for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng stream_rng(mix64(cfg.seed, 2 * epoch));
        EpochData data = build_epoch(graph, encoded, vocab, walk_cfg,
                                     cfg.text_window, stream_rng, include_graph,
                                     include_text);
        if (epoch == 0) {
            if (data.pairs.empty())
                fail("data", "training pair stream is empty for the selected mode");
            planned_total = static_cast<uint64_t>(data.pairs.size()) * cfg.epochs;
        }
        std::optional<AliasTable> node_noise;
        if (include_graph)
            node_noise = AliasTable::from_counts(data.node_visit_counts,
                                                 cfg.noise_power);

        EpochShare share{&data.pairs,
                         word_noise ? &*word_noise : nullptr,
                         node_noise ? &*node_noise : nullptr,
                         &processed, planned_total};

        if (log) (*log) << "epoch " << epoch + 1 << "/" << cfg.epochs << "  pairs "
                        << data.pairs.size() << '\n';

        double epoch_loss = 0.0;
        if (cfg.threads <= 1) {
            Rng neg_rng(mix64(cfg.seed, 2 * epoch + 1));
            double window_loss = 0.0;
            uint64_t window_count = 0;
            epoch_loss = run_range(model, cfg, share, 0, data.pairs.size(),
                                   std::move(neg_rng), log, &window_loss,
                                   &window_count);
        } else {
            std::vector<std::thread> workers;
            std::vector<double> losses(cfg.threads, 0.0);
            std::size_t chunk = (data.pairs.size() + cfg.threads - 1) / cfg.threads;
            for (uint32_t t = 0; t < cfg.threads; ++t) {
                std::size_t begin = std::min(data.pairs.size(), t * chunk);
                std::size_t end = std::min(data.pairs.size(), begin + chunk);
                workers.emplace_back([&, t, begin, end] {
                    losses[t] = run_range(model, cfg, share, begin, end,
                                          Rng(mix64(cfg.seed, 1000 + epoch * 64 + t)),
                                          nullptr, nullptr, nullptr);
                });
            }
            for (auto& worker : workers) worker.join();
            for (double l : losses) epoch_loss += l;
        }
        result.epoch_mean_loss.push_back(epoch_loss /
                                         static_cast<double>(data.pairs.size()));
        result.pairs_processed += data.pairs.size();
        if (log) (*log) << "epoch " << epoch + 1 << " mean loss "
                        << result.epoch_mean_loss.back() << '\n';
    }
    return result;
}

Matrix node_embeddings(const SenseModel& model, bool normalize,
                       std::vector<uint32_t>* zero_rows) {
    Matrix rows = model.in_node;
    if (zero_rows) zero_rows->clear();
    if (!normalize) return rows;
    for (std::size_t i = 0; i < rows.rows; ++i) {
        double* row = rows.row(i);
        double norm = std::sqrt(dot(row, row, rows.cols));
        if (norm <= 1e-15) {
            if (zero_rows) zero_rows->push_back(static_cast<uint32_t>(i));
            continue;
        }
        for (std::size_t j = 0; j < rows.cols; ++j) row[j] /= norm;
    }
    return rows;
}

void save_embedding_file(const std::string& path, const Matrix& rows,
                         std::span<const std::string> ids) {
    if (ids.size() != rows.rows)
        fail("data", "embedding rows and ids disagree in length");
    std::ofstream out(path);
    if (!out) fail("io", "cannot write embedding file '" + path + "'");
    out << rows.rows << ' ' << rows.cols << '\n';
    for (std::size_t i = 0; i < rows.rows; ++i) {
        if (ids[i].find_first_of(" \t") != std::string::npos)
            fail("data", "node id '" + ids[i] +
                             "' contains whitespace and cannot be saved in the "
                             "space-separated embedding format");
        out << ids[i];
        const double* row = rows.row(i);
        for (std::size_t j = 0; j < rows.cols; ++j)
            out << ' ' << format_g9(row[j]);
        out << '\n';
    }
}

LoadedEmbeddings load_embedding_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open embedding file '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        fail("parse", "embedding file '" + path + "' is empty");
    std::istringstream header(line);
    std::size_t n = 0, d = 0;
    if (!(header >> n >> d) || n == 0 || d == 0)
        fail("parse", path + ":1: expected header 'n d'");

    LoadedEmbeddings loaded;
    loaded.ids.reserve(n);
    loaded.rows = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            fail("parse", path + ": expected " + std::to_string(n) +
                              " embedding rows, got " + std::to_string(i));
        std::istringstream row(line);
        std::string id;
        if (!(row >> id))
            fail("parse", path + ":" + std::to_string(i + 2) + ": missing node id");
        double* values = loaded.rows.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            if (!(row >> values[j]))
                fail("parse", path + ":" + std::to_string(i + 2) +
                                  ": expected " + std::to_string(d) + " values");
        }
        std::string extra;
        if (row >> extra)
            fail("parse", path + ":" + std::to_string(i + 2) + ": trailing data");
        loaded.ids.push_back(std::move(id));
    }
    return loaded;
}

}  // namespace sense
