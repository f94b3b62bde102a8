#include "sense/eval.hpp"

#include "sense/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace sense {

namespace {

uint64_t mix64(uint64_t a, uint64_t b) {
    uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 0x243f6a8885a308d3ULL);
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27; x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void SplitSpec::validate() const {
    auto in_open_unit = [](double f) { return f > 0.0 && f < 1.0; };
    if (!in_open_unit(train_frac) || !in_open_unit(valid_frac) ||
        !in_open_unit(test_frac))
        fail("config", "split fractions must lie in (0, 1)");
    if (std::abs(train_frac + valid_frac + test_frac - 1.0) > 1e-9)
        fail("config", "split fractions must sum to 1");
}

Split make_split(std::size_t count, const SplitSpec& spec) {
    spec.validate();
    if (count < 3) fail("data", "need at least 3 samples to split");
    std::vector<uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(spec.seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::size_t n_train = static_cast<std::size_t>(
        std::llround(spec.train_frac * static_cast<double>(count)));
    std::size_t n_valid = static_cast<std::size_t>(
        std::llround(spec.valid_frac * static_cast<double>(count)));
    n_train = std::min(n_train, count - 2);
    n_train = std::max<std::size_t>(n_train, 1);
    n_valid = std::min(n_valid, count - n_train - 1);
    n_valid = std::max<std::size_t>(n_valid, 1);

    Split split;
    split.train.assign(order.begin(), order.begin() + n_train);
    split.valid.assign(order.begin() + n_train, order.begin() + n_train + n_valid);
    split.test.assign(order.begin() + n_train + n_valid, order.end());
    return split;
}

LinearModel fit_logistic(const Matrix& features, std::span<const uint8_t> labels,
                         std::span<const uint32_t> rows, double l2,
                         std::size_t iters) {
    if (rows.empty()) fail("data", "cannot fit a classifier on no samples");
    const std::size_t d = features.cols;
    const double m = static_cast<double>(rows.size());

    double max_sq = 0.0;
    for (uint32_t r : rows) {
        const double* x = features.row(r);
        max_sq = std::max(max_sq, dot(x, x, d));
    }
    // Logistic curvature is bounded by max||x||^2/4 + l2; the inverse is a
    // safe step size.
    const double step = 1.0 / (0.25 * max_sq + l2 + 1e-12);

    LinearModel model;
    model.weights.assign(d, 0.0);
    std::vector<double> grad(d);
    for (std::size_t it = 0; it < iters; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (uint32_t r : rows) {
            const double* x = features.row(r);
            double err = sigmoid(model.decision(x)) - static_cast<double>(labels[r]);
            axpy(err / m, x, grad.data(), d);
            grad_bias += err / m;
        }
        axpy(l2, model.weights.data(), grad.data(), d);
        for (std::size_t j = 0; j < d; ++j) model.weights[j] -= step * grad[j];
        model.bias -= step * grad_bias;
    }
    return model;
}

std::vector<uint32_t> OvrClassifier::predict(const double* x) const {
    std::vector<uint32_t> chosen;
    double best = -std::numeric_limits<double>::infinity();
    uint32_t best_label = 0;
    for (uint32_t l = 0; l < models.size(); ++l) {
        double margin = models[l].decision(x);
        if (margin > 0.0) chosen.push_back(l);
        if (margin > best) {
            best = margin;
            best_label = l;
        }
    }
    if (chosen.empty() && !models.empty()) chosen.push_back(best_label);
    return chosen;
}

namespace {

// Exact-set-match error of the classifier over sample rows. truth holds
// kept-label indicators per sample; a sample whose true set includes a
// skipped label can never be predicted correctly and counts as wrong.
double exact_match_error(const OvrClassifier& clf, const Matrix& view,
                         const std::vector<std::vector<uint8_t>>& truth,
                         const std::vector<uint8_t>& has_unscored_label,
                         std::span<const uint32_t> rows) {
    if (rows.empty()) return 0.0;
    std::size_t wrong = 0;
    for (uint32_t r : rows) {
        if (has_unscored_label[r]) {
            ++wrong;
            continue;
        }
        auto predicted = clf.predict(view.row(r));
        std::vector<uint8_t> indicator(clf.models.size(), 0);
        for (uint32_t l : predicted) indicator[l] = 1;
        if (indicator != truth[r]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(rows.size());
}

}  // namespace

std::pair<OvrClassifier, OvrReport> train_ovr_classifier(
    const Matrix& features, const LabelSet& labels, const SplitSpec& split_spec) {
    if (labels.labels.size() != features.rows)
        fail("data", "features must cover all labeled nodes");

    // The task is defined over labeled nodes only.
    std::vector<uint32_t> sample_rows;
    for (uint32_t v = 0; v < labels.labels.size(); ++v)
        if (!labels.labels[v].empty()) sample_rows.push_back(v);
    if (sample_rows.size() < 3) fail("data", "too few labeled nodes");

    Split split = make_split(sample_rows.size(), split_spec);

    const std::size_t universe = labels.label_universe.size();
    std::vector<std::vector<uint8_t>> membership(
        sample_rows.size(), std::vector<uint8_t>(universe, 0));
    for (std::size_t s = 0; s < sample_rows.size(); ++s) {
        for (const auto& name : labels.labels[sample_rows[s]]) {
            auto it = std::lower_bound(labels.label_universe.begin(),
                                       labels.label_universe.end(), name);
            membership[s][it - labels.label_universe.begin()] = 1;
        }
    }

    OvrReport report;
    report.samples = sample_rows.size();

    // Keep labels with at least 2 training positives.
    std::vector<uint32_t> kept;
    for (uint32_t l = 0; l < universe; ++l) {
        std::size_t positives = 0;
        for (uint32_t r : split.train) positives += membership[r][l];
        if (positives >= 2) kept.push_back(l);
        else report.skipped_labels.push_back(labels.label_universe[l]);
    }
    if (kept.empty()) fail("data", "every label has fewer than 2 training positives");

    std::vector<std::vector<uint8_t>> truth(sample_rows.size(),
                                            std::vector<uint8_t>(kept.size(), 0));
    std::vector<uint8_t> has_unscored_label(sample_rows.size(), 0);
    for (std::size_t s = 0; s < sample_rows.size(); ++s) {
        std::vector<uint8_t> covered(universe, 0);
        for (std::size_t k = 0; k < kept.size(); ++k) {
            truth[s][k] = membership[s][kept[k]];
            covered[kept[k]] = 1;
        }
        for (uint32_t l = 0; l < universe; ++l)
            if (membership[s][l] && !covered[l]) has_unscored_label[s] = 1;
    }

    // Feature rows in sample space.
    Matrix view(sample_rows.size(), features.cols);
    for (std::size_t s = 0; s < sample_rows.size(); ++s)
        std::copy_n(features.row(sample_rows[s]), features.cols, view.row(s));

    OvrClassifier best_clf;
    double best_valid = std::numeric_limits<double>::infinity();
    for (double l2 : kL2Grid) {
        OvrClassifier clf;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            std::vector<uint8_t> y(sample_rows.size(), 0);
            for (std::size_t s = 0; s < sample_rows.size(); ++s) y[s] = truth[s][k];
            clf.models.push_back(fit_logistic(view, y, split.train, l2));
            clf.label_names.push_back(labels.label_universe[kept[k]]);
        }
        double valid_error =
            exact_match_error(clf, view, truth, has_unscored_label, split.valid);
        if (valid_error < best_valid) {
            best_valid = valid_error;
            best_clf = std::move(clf);
            report.chosen_l2 = l2;
        }
    }

    report.valid_error = best_valid;
    report.train_error = exact_match_error(best_clf, view, truth,
                                           has_unscored_label, split.train);
    report.test_error = exact_match_error(best_clf, view, truth,
                                          has_unscored_label, split.test);
    return {std::move(best_clf), report};
}

LinkPredReport link_prediction(
    const Graph& graph, const std::function<Matrix(const Graph&)>& embed_fn,
    double holdout_frac, const SplitSpec& split_spec, uint64_t seed) {
    if (!(holdout_frac > 0.0) || holdout_frac >= 1.0)
        fail("config", "holdout fraction must lie in (0, 1); 0 gives no positives");
    const std::size_t n = graph.node_count();
    const std::size_t target = static_cast<std::size_t>(
        std::llround(holdout_frac * static_cast<double>(graph.edge_count())));
    if (target < 1) fail("data", "holdout fraction removes no edges");

    // Incident-degree guard: never strip a node of its last edge, so the
    // residual graph still trains every node.
    std::vector<std::size_t> degree(n, 0);
    for (const auto& [src, dst] : graph.edges) {
        ++degree[src];
        ++degree[dst];
    }

    Rng rng(seed);
    std::vector<uint32_t> order(graph.edge_count());
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<uint8_t> removed(graph.edge_count(), 0);
    std::size_t removed_count = 0;
    for (uint32_t e : order) {
        if (removed_count == target) break;
        auto [src, dst] = graph.edges[e];
        if (src != dst && (degree[src] <= 1 || degree[dst] <= 1)) continue;
        if (src == dst && degree[src] <= 2) continue;
        removed[e] = 1;
        ++removed_count;
        --degree[src];
        --degree[dst];
    }
    if (removed_count < target)
        fail("data", "insufficient removable edges for the requested holdout");

    std::vector<std::pair<uint32_t, uint32_t>> residual, positives;
    for (std::size_t e = 0; e < graph.edge_count(); ++e)
        (removed[e] ? positives : residual).push_back(graph.edges[e]);

    Graph residual_graph = build_graph_indexed(graph.node_ids, residual);
    Matrix embeddings = embed_fn(residual_graph);
    if (embeddings.rows != n) fail("data", "embed_fn returned wrong row count");

    // Negatives: node pairs with no arc in either direction in the original
    // graph (so never a removed positive either).
    std::unordered_set<uint64_t> used;
    auto key = [n](uint32_t a, uint32_t b) {
        return static_cast<uint64_t>(std::min(a, b)) * n + std::max(a, b);
    };
    std::vector<std::pair<uint32_t, uint32_t>> negatives;
    std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(n - 1));
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * target + 1000;
    while (negatives.size() < positives.size()) {
        if (++attempts > max_attempts)
            fail("data", "could not sample enough non-adjacent node pairs");
        uint32_t u = pick(rng), v = pick(rng);
        if (u == v) continue;
        if (graph.has_edge(u, v) || graph.has_edge(v, u)) continue;
        if (!used.insert(key(u, v)).second) continue;
        negatives.emplace_back(u, v);
    }

    const std::size_t samples = positives.size() + negatives.size();
    Matrix features(samples, embeddings.cols);
    std::vector<uint8_t> y(samples, 0);
    for (std::size_t i = 0; i < samples; ++i) {
        auto [u, v] = i < positives.size() ? positives[i]
                                           : negatives[i - positives.size()];
        const double* a = embeddings.row(u);
        const double* b = embeddings.row(v);
        double* f = features.row(i);
        for (std::size_t j = 0; j < embeddings.cols; ++j)
            f[j] = std::abs(a[j] - b[j]);
        y[i] = i < positives.size() ? 1 : 0;
    }

    Split split = make_split(samples, split_spec);
    auto error_on = [&](const LinearModel& model, std::span<const uint32_t> rows) {
        std::size_t wrong = 0;
        for (uint32_t r : rows) {
            bool predicted = model.decision(features.row(r)) > 0.0;
            if (predicted != (y[r] != 0)) ++wrong;
        }
        return static_cast<double>(wrong) / static_cast<double>(rows.size());
    };

    LinkPredReport report;
    report.positives = positives.size();
    LinearModel best_model;
    double best_valid = std::numeric_limits<double>::infinity();
    for (double l2 : kL2Grid) {
        LinearModel model = fit_logistic(features, y, split.train, l2);
        double valid_error = error_on(model, split.valid);
        if (valid_error < best_valid) {
            best_valid = valid_error;
            best_model = std::move(model);
            report.chosen_l2 = l2;
        }
    }
    report.valid_error = best_valid;
    report.train_error = error_on(best_model, split.train);
    report.test_error = error_on(best_model, split.test);
    report.positive_pairs = std::move(positives);
    report.negative_pairs = std::move(negatives);
    return report;
}

namespace {

EmbeddingTable random_table(std::size_t n, std::size_t d, Rng& rng) {
    Matrix rows(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        auto v = random_unit_vector(d, rng);
        std::copy(v.begin(), v.end(), rows.row(i));
    }
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = "n" + std::to_string(i);
    return EmbeddingTable::from_rows(std::move(rows), std::move(ids),
                                     /*assume_normalized=*/true);
}

std::vector<uint32_t> walk_sequence(const Graph& graph, std::size_t length,
                                    Rng& rng) {
    WalkConfig cfg;
    cfg.walk_length = static_cast<uint32_t>(length);
    std::uniform_int_distribution<uint32_t> start(
        0, static_cast<uint32_t>(graph.node_count() - 1));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto walk = random_walk(graph, start(rng), cfg, rng);
        if (walk.size() == length) return walk;
    }
    fail("data", "graph walks keep hitting sinks before the requested length");
}

}  // namespace

std::vector<SweepCell> decoding_sweep(const DecodeExperiment& exp,
                                      const EmbeddingTable* table,
                                      const Graph* graph) {
    if (exp.trials < 1) fail("config", "trials must be >= 1");
    if (exp.lengths.empty()) fail("config", "no sequence lengths given");

    std::vector<std::size_t> dims = exp.dims;
    std::vector<uint32_t> graph_to_table;
    if (exp.mode == SweepMode::RandomNodes) {
        if (exp.random_n < 1) fail("config", "random mode needs a node count");
        if (dims.empty()) fail("config", "random mode needs dimensions");
    } else {
        if (!table || !graph)
            fail("config", "walk mode needs an embedding table and a graph");
        if (table->size() != graph->node_count())
            fail("data", "embedding table and graph disagree on node count");
        graph_to_table.resize(graph->node_count());
        for (uint32_t v = 0; v < graph->node_count(); ++v)
            graph_to_table[v] = table->index_of(graph->node_ids[v]);
        dims = {table->dim()};
    }

    std::vector<SweepCell> cells;
    for (std::size_t dim : dims) {
        for (std::size_t length : exp.lengths) {
            SweepCell cell;
            cell.dim = dim;
            cell.length = length;
            cell.trials = exp.trials;
            if (length > dim) {
                cell.skipped = true;
                cell.note = "length exceeds dimension; wraparound would be ambiguous";
                cells.push_back(std::move(cell));
                continue;
            }
            Rng rng(mix64(mix64(exp.seed, dim), length));
            const EmbeddingTable* cell_table = table;
            EmbeddingTable generated;
            if (exp.mode == SweepMode::RandomNodes) {
                generated = random_table(exp.random_n, dim, rng);
                cell_table = &generated;
            }
            std::uniform_int_distribution<uint32_t> pick(
                0, static_cast<uint32_t>(cell_table->size() - 1));
            std::size_t recovered = 0;
            std::vector<uint32_t> sequence(length);
            for (std::size_t t = 0; t < exp.trials; ++t) {
                if (exp.mode == SweepMode::RandomNodes) {
                    for (auto& idx : sequence) idx = pick(rng);
                } else {
                    sequence = walk_sequence(*graph, length, rng);
                    for (auto& idx : sequence) idx = graph_to_table[idx];
                }
                auto decoded = decode_indices(encode_indices(sequence, *cell_table),
                                              *cell_table);
                if (std::equal(sequence.begin(), sequence.end(), decoded.begin(),
                               decoded.end()))
                    ++recovered;
            }
            cell.accuracy = static_cast<double>(recovered) /
                            static_cast<double>(exp.trials);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

void write_sweep_csv(const std::string& path, std::span<const SweepCell> cells) {
    std::ofstream out(path);
    if (!out) fail("io", "cannot write CSV '" + path + "'");
    out << "dim,length,accuracy,trials\n";
    for (const auto& cell : cells) {
        if (cell.skipped) continue;
        out << cell.dim << ',' << cell.length << ',' << format_g9(cell.accuracy)
            << ',' << cell.trials << '\n';
    }
}

void write_error_csv(const std::string& path, double train_error,
                     double valid_error, double test_error) {
    std::ofstream out(path);
    if (!out) fail("io", "cannot write CSV '" + path + "'");
    out << "split,error\n";
    out << "train," << format_g9(train_error) << '\n';
    out << "valid," << format_g9(valid_error) << '\n';
    out << "test," << format_g9(test_error) << '\n';
}

}  // namespace sense
